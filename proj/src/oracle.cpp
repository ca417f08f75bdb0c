#include "tubevol/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

namespace tubevol {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Side test for the cut at a sampled point.
class CutEvaluator {
 public:
  CutEvaluator(const BodySpec& spec, const CutSpec& cut) : spec_(spec), cut_(cut) {
    if (const auto* h = std::get_if<Hyperplane>(&cut_)) {
      h->validate(spec);
      reduce_to_normal_form(*h);  // rejects the trivial equation
    }
  }

  [[nodiscard]] bool counts(std::span<const double> x, std::span<const double> y, Side side) const {
    double s = 0.0;
    if (std::holds_alternative<std::monostate>(cut_)) return true;
    if (const auto* nf = std::get_if<NormalForm>(&cut_)) {
      s = nf->degenerate ? y[0] - nf->c : x[0] - nf->a * y[0] - nf->c;
    } else {
      const auto& h = std::get<Hyperplane>(cut_);
      for (int i = 0; i < spec_.n; ++i) s += h.alpha[i] * x[i];
      for (int j = 0; j < spec_.m; ++j) s += h.gamma[j] * y[j];
      s -= h.beta;
    }
    return side == Side::geq ? s >= 0.0 : s <= 0.0;
  }

 private:
  const BodySpec& spec_;
  const CutSpec& cut_;
};

/// Sums per-sample hit indicators over [0, samples) on several threads.
template <class SampleFn>
std::uint64_t count_hits(std::uint64_t samples, unsigned threads, const SampleFn& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(samples, 1)));
  std::vector<std::uint64_t> partial(threads, 0);
  auto work = [&](unsigned t) {
    const std::uint64_t lo = samples * t / threads;
    const std::uint64_t hi = samples * (t + 1) / threads;
    std::uint64_t hits = 0;
    for (std::uint64_t i = lo; i < hi; ++i) hits += fn(i) ? 1 : 0;
    partial[t] = hits;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  std::uint64_t total = 0;
  for (auto h : partial) total += h;
  return total;
}

MonteCarloResult binomial_estimate(double scale, std::uint64_t samples, std::uint64_t hits) {
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  MonteCarloResult r;
  r.samples = samples;
  r.hits = hits;
  r.volume.value = scale * p;
  r.volume.error_estimate = scale * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  r.volume.method = Method::monte_carlo;
  return r;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t index)
    : state_(mix64(seed ^ 0x6a09e667f3bcc909ULL) ^ mix64(index + 0x9e3779b97f4a7c15ULL)) {}

CounterRng::result_type CounterRng::operator()() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

MonteCarloResult mc_cut_volume(const BodySpec& spec, const CutSpec& cut, Side side,
                               std::uint64_t samples, std::uint64_t seed,
                               const MonteCarloOptions& options) {
  spec.validate();
  if (samples < 1) throw std::invalid_argument("Monte Carlo needs at least one sample");
  const CutEvaluator eval(spec, cut);
  const double eps = spec.eps;
  const int n = spec.n;
  const int m = spec.m;

  auto sample = [&](std::uint64_t i) {
    CounterRng rng(seed, i);
    thread_local std::vector<double> x;
    thread_local std::vector<double> ball;  // (t, y)
    x.resize(n);
    ball.resize(m + 1);
    for (;;) {
      double r2 = 0.0;
      for (double& z : ball) {
        z = rng.uniform(-eps, eps);
        r2 += z * z;
      }
      if (r2 > eps * eps) continue;
      const double ratio = std::pow((1.0 + ball[0]) / (1.0 + eps), n - 1);
      if (rng.uniform() < ratio) break;
    }
    double norm = 0.0;
    do {
      norm = 0.0;
      for (double& v : x) {
        v = rng.normal();
        norm += v * v;
      }
    } while (norm == 0.0);
    const double radius = (1.0 + ball[0]) / std::sqrt(norm);
    for (double& v : x) v *= radius;
    return eval.counts(x, std::span<const double>(ball).subspan(1), side);
  };

  const std::uint64_t hits = count_hits(samples, options.threads, sample);
  return binomial_estimate(total_volume(spec), samples, hits);
}

MonteCarloResult mc_cut_volume_box(const BodySpec& spec, const CutSpec& cut, Side side,
                                   std::uint64_t samples, std::uint64_t seed,
                                   const MonteCarloOptions& options) {
  spec.validate();
  if (samples < 1) throw std::invalid_argument("Monte Carlo needs at least one sample");
  const CutEvaluator eval(spec, cut);
  const double eps = spec.eps;
  const double rx = 1.0 + eps;

  auto sample = [&](std::uint64_t i) {
    CounterRng rng(seed, i);
    thread_local std::vector<double> x;
    thread_local std::vector<double> y;
    x.resize(spec.n);
    y.resize(spec.m);
    double x2 = 0.0;
    double y2 = 0.0;
    for (double& v : x) {
      v = rng.uniform(-rx, rx);
      x2 += v * v;
    }
    for (double& v : y) {
      v = rng.uniform(-eps, eps);
      y2 += v * v;
    }
    const double d = std::sqrt(x2) - 1.0;
    if (d * d + y2 > eps * eps) return false;
    return eval.counts(x, y, side);
  };

  const std::uint64_t hits = count_hits(samples, options.threads, sample);
  const double box = std::pow(2.0 * rx, spec.n) * std::pow(2.0 * eps, spec.m);
  return binomial_estimate(box, samples, hits);
}

MonteCarloResult mc_total_volume_box(const BodySpec& spec, std::uint64_t samples,
                                     std::uint64_t seed, const MonteCarloOptions& options) {
  return mc_cut_volume_box(spec, std::monostate{}, Side::geq, samples, seed, options);
}

}  // namespace tubevol
