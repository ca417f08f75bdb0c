#pragma once

// Weighted-polynomial models of the single-valued functions S(a, c) and
// P(a, c) whose quadratic V^2 - S V + P has the cut volumes as roots.
//
// A model stores F(a, c) = sum coeff * a^i * c^j in original coordinates and
// represents F / (1 + a^2)^k, with k = (n + m - 1) / 2 for S and k = n + m
// for P.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tubevol/body.hpp"
#include "tubevol/classify.hpp"

namespace tubevol {

enum class Target { S, P };

std::string_view to_string(Target t);
Target parse_target(std::string_view s);

/// Weight exponent k for the target on this body.
int weight_exponent(Target t, const BodySpec& spec);

struct VolumeSample {
  double a = 0.0;
  double c = 0.0;
  double value = 0.0;
};

struct FitWindow {
  double a_lo = 0.0;
  double a_hi = 0.0;
  double c_lo = 0.0;
  double c_hi = 0.0;
};

struct Monomial {
  int i = 0;  // power of a
  int j = 0;  // power of c
  bool operator==(const Monomial&) const = default;
};

/// The fit in its conditioned coordinates: a-factor T_l(x) with
/// x = (s - a_mid) / a_half, s = 1/(1+a^2), times s^{k-K} (even fits), or
/// x = (a - a_mid) / a_half times (1+a^2)^{-k}; c-factor T_j((c - c_mid) / c_half).
/// coeffs follow the order of PolynomialModel::basis.
struct ChebyshevForm {
  bool in_s = true;
  double a_mid = 0.0;
  double a_half = 1.0;
  double c_mid = 0.0;
  double c_half = 1.0;
  std::vector<double> coeffs;
};

struct PolynomialModel {
  BodySpec spec;
  Target target = Target::S;
  int k = 0;
  int degree_a = 0;
  int degree_c = 0;
  std::vector<Monomial> basis;
  std::vector<double> coeffs;
  double residual_rms = 0.0;
  FitWindow fit_window;
  /// Present for fitted models; evaluation goes through it because the
  /// monomial form cancels badly at high degree.
  std::optional<ChebyshevForm> chebyshev;

  [[nodiscard]] double numerator(double a, double c) const;
  [[nodiscard]] double evaluate(double a, double c) const;
  /// Largest |coeff| over monomials with odd power of a, relative to the
  /// largest |coeff| overall.
  [[nodiscard]] double odd_coefficient_ratio() const;
};

class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, std::vector<Monomial> offending)
      : std::runtime_error(what), offending_basis(std::move(offending)) {}
  std::vector<Monomial> offending_basis;
};

struct FitOptions {
  bool even_in_a = true;
};

/// Tensor basis a^i c^j, 0 <= i <= degree_a (even i only when even_in_a),
/// 0 <= j <= degree_c.
std::vector<Monomial> make_basis(int degree_a, int degree_c, bool even_in_a);

/// Least squares of value * (1 + a^2)^k on the basis, rows weighted by
/// (1 + a^2)^{-k} so residuals are in target units. Solved by column-pivoted
/// QR on a Chebyshev basis (in s = 1/(1+a^2) for even fits, in scaled a
/// otherwise; scaled c) and converted back to monomials.
PolynomialModel fit_weighted_polynomial(const BodySpec& spec, std::span<const VolumeSample> samples,
                                        Target target, int degree_a, int degree_c,
                                        const FitOptions& options = {});

/// S := V_geq on domain (3). Samples must all classify as Separating3.
PolynomialModel fit_S(const BodySpec& spec, std::span<const VolumeSample> samples, int degree_a,
                      int degree_c, const FitOptions& options = {});

/// P = V (S - V) at domain (2r) samples of V_geq.
std::vector<VolumeSample> derive_P_samples(const BodySpec& spec,
                                           std::span<const VolumeSample> samples,
                                           const PolynomialModel& s_model);

PolynomialModel fit_P(const BodySpec& spec, std::span<const VolumeSample> p_samples, int degree_a,
                      int degree_c, const FitOptions& options = {});

double rms_residual(const PolynomialModel& model, std::span<const VolumeSample> samples);

struct PhiModel {
  PolynomialModel s_model;
  PolynomialModel p_model;
  double c0 = 0.0;
};

/// Roots (S +- sqrt(S^2 - 4P)) / 2 of V^2 - S V + P at (a, c).
std::pair<std::complex<double>, std::complex<double>> phi_roots(const PhiModel& phi, double a,
                                                                double c);

struct Candidates {
  std::vector<double> values;
  int discarded_complex = 0;
  std::vector<std::string> warnings;
};

/// Candidate values of V_geq at (a, c) implied by the quadratic factors.
Candidates predict_candidates(const PhiModel& phi, double a, double c, Domain label);

/// min over candidates of |measured - candidate|; +inf when there are none.
double min_candidate_residual(const Candidates& candidates, double measured);

// Degree sweep with a seeded 80/20 train/validation split.

struct SweepEntry {
  int degree = 0;
  int degree_a = 0;
  int degree_c = 0;
  double train_rms = 0.0;
  double validation_rms = 0.0;
  bool ok = true;
  std::string error;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  int chosen_degree = -1;
  [[nodiscard]] const SweepEntry* entry(int degree) const;
};

struct SweepOptions {
  /// Degree d is the numerator's c-degree.
  std::vector<int> degrees{4, 5, 6, 7, 8, 9, 10};
  /// a-degrees tried at each d: 2 (k + e) for e here; the best on the
  /// validation split is kept.
  std::vector<int> a_excess{0, 1, 2, 3, 4};
  std::uint64_t split_seed = 12345;
  double validation_fraction = 0.2;
  /// Validation RMS at or below this counts as converged.
  double noise_floor = 0.0;
  /// Literal (d, d) degrees instead of the a-degree search.
  bool square = false;
};

std::vector<int> sweep_a_degrees(int degree, int k, const SweepOptions& options);

using FitFunction =
    std::function<PolynomialModel(std::span<const VolumeSample> train, int degree_a, int degree_c)>;

/// Fits every degree on the training part and scores it on the validation
/// part; each entry holds the best a-degree for its d. Failed fits are
/// recorded, not thrown.
SweepResult sweep_degrees(std::span<const VolumeSample> samples, int k, const SweepOptions& options,
                          const FitFunction& fit);

/// Chosen degree: smallest whose validation RMS is within 10% of the minimum
/// (or at most the noise floor).
int choose_degree(const std::vector<SweepEntry>& entries, double noise_floor);

/// Deterministic train/validation index split.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t count, double validation_fraction, std::uint64_t seed);

}  // namespace tubevol
