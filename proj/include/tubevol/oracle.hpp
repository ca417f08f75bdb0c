#pragma once

// Monte Carlo estimators independent of the quadrature path.
//
// Every sample i draws its randomness from a stream keyed by (seed, i), so
// the estimate does not depend on how samples are split across threads.

#include <cstdint>
#include <limits>
#include <optional>
#include <variant>

#include "tubevol/body.hpp"

namespace tubevol {

/// SplitMix64 stream keyed by (seed, index); a UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  CounterRng(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller, one draw per call).
  double normal();

 private:
  std::uint64_t state_;
};

/// The cut used to count hits: a normal form or a full hyperplane. No cut
/// counts every point.
using CutSpec = std::variant<std::monostate, NormalForm, Hyperplane>;

struct MonteCarloOptions {
  /// Worker threads; 0 = hardware concurrency. Never changes the result.
  unsigned threads = 0;
};

struct MonteCarloResult {
  CutVolumeResult volume;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

/// Exact tube sampler: (t, y) uniform in the (m+1)-ball of radius eps,
/// accepted with probability ((1+t)/(1+eps))^{n-1}, x = (1+t) * direction.
/// The estimate is C0 * hits / samples with binomial standard error.
MonteCarloResult mc_cut_volume(const BodySpec& spec, const CutSpec& cut, Side side,
                               std::uint64_t samples, std::uint64_t seed,
                               const MonteCarloOptions& options = {});

/// Uniform sampling in [-(1+eps), 1+eps]^n x [-eps, eps]^m; the estimate is
/// box volume * (inside and on side) / samples.
MonteCarloResult mc_cut_volume_box(const BodySpec& spec, const CutSpec& cut, Side side,
                                   std::uint64_t samples, std::uint64_t seed,
                                   const MonteCarloOptions& options = {});

MonteCarloResult mc_total_volume_box(const BodySpec& spec, std::uint64_t samples,
                                     std::uint64_t seed, const MonteCarloOptions& options = {});

}  // namespace tubevol
