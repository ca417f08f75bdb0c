#pragma once

// Verification pipeline and its report.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tubevol/algebra.hpp"
#include "tubevol/body.hpp"
#include "tubevol/classify.hpp"
#include "tubevol/io.hpp"
#include "tubevol/oracle.hpp"
#include "tubevol/quadrature.hpp"

namespace tubevol {

/// Rectangular sample grid over a domain: a_i spans [a_lo, a_hi] and
/// c = lo(a) + t (hi(a) - lo(a)) over the domain's c-interval, t in
/// [t_lo, t_hi]. With midpoints set, nodes sit at cell centers.
struct GridSpec {
  int na = 30;
  int nc = 30;
  double a_lo = 0.0;
  double a_hi = 1.5;
  double t_lo = 0.02;
  double t_hi = 0.98;
  bool midpoints = false;
};

struct GridPoint {
  double a = 0.0;
  double c = 0.0;
};

/// Grid nodes inside `domain`. Slopes where the domain is empty are skipped.
std::vector<GridPoint> domain_grid(const BodySpec& spec, Domain domain, const GridSpec& grid);

/// V_geq at every point by quadrature.
std::vector<VolumeSample> measure_geq(const BodySpec& spec, const std::vector<GridPoint>& points,
                                      double tol);

enum class CheckStatus {
  pass,
  fail,          // an exact claim does not hold: a bug
  reported,      // conjecture residual within its target
  above_target,  // conjecture residual above its target: a finding, not a bug
  unreachable,   // the configuration cannot exercise the check
};

std::string_view to_string(CheckStatus s);

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct SuiteSections {
  bool oracle = true;
  bool symmetry = true;
  bool boundaries = true;
  bool fit = true;
  bool cross_domain = true;
  bool monodromy = true;
};

struct SuiteConfig {
  BodySpec spec;
  SuiteSections sections;

  double quad_tol = kDefaultQuadratureTol;
  double fit_quad_tol = 1e-11;
  double symmetry_tol = 2e-8;
  double sigma_k = 4.0;
  /// Cross-domain target relative to C0.
  double cross_domain_rel = 1e-3;
  /// Validation RMS treated as converged when choosing the S degree.
  double s_noise_floor = 1e-10;
  double p_noise_floor = 0.0;
  double vieta_tol = 1e-6;
  double s_center_tol = 1e-6;
  double evenness_tol = 1e-8;

  std::uint64_t mc_seed = 20240607;
  std::uint64_t plane_seed = 777;
  std::uint64_t split_seed = 12345;

  std::uint64_t box_samples = 10'000'000;
  std::uint64_t tube_samples = 1'000'000;
  int battery_planes = 20;
  int symmetry_pairs = 10;
  int boundary_sweep_points = 50;

  GridSpec s_grid{30, 30, 0.0, 1.5, 0.02, 0.98, false};
  GridSpec p_grid{30, 30, 0.0, 4.0, 0.02, 0.98, false};
  GridSpec held_3{5, 5, 0.0, 1.5, 0.1, 0.9, true};
  GridSpec held_2l{5, 5, 0.0, 4.0, 0.1, 0.9, true};
  GridSpec held_4{5, 5, 2.0, 4.0, 0.1, 0.9, true};
  GridSpec evenness_grid{12, 12, -1.5, 1.5, 0.05, 0.95, false};

  /// Swept c-degrees of the P numerator.
  std::vector<int> degrees{4, 5, 6, 7, 8, 9, 10};
  std::vector<int> s_degrees{4, 5, 6, 7, 8, 9, 10};
  /// a-degrees tried per c-degree: 2 (k + e).
  std::vector<int> a_excess{0, 1, 2, 3, 4};
  /// Degree d -> (degree_a, degree_c) = (d, d), no a-degree search.
  bool square_degrees = false;

  unsigned threads = 0;

  /// Missing keys keep their defaults; unknown keys are rejected.
  static SuiteConfig from_json(const json& j);
  [[nodiscard]] json to_json() const;
};

// Building blocks shared with the acceptance suite.

struct BatteryPlane {
  Hyperplane plane;
  NormalForm nf;
  Domain domain = Domain::Outside1;
  Side side = Side::geq;
};

/// Random full hyperplanes whose normal forms cycle through the five
/// generic domains; near-discriminant draws are rejected.
std::vector<BatteryPlane> plane_battery(const BodySpec& spec, int count, std::uint64_t seed);

struct PlaneComparison {
  BatteryPlane plane;
  CutVolumeResult quad;
  MonteCarloResult mc;
  double delta = 0.0;
  double sigma = 0.0;
};

std::vector<PlaneComparison> compare_battery(const BodySpec& spec,
                                             const std::vector<BatteryPlane>& planes,
                                             std::uint64_t samples, std::uint64_t seed,
                                             double quad_tol, unsigned threads);

/// Random (a, c) with a in [-3, 3] away from the discriminant.
std::vector<GridPoint> random_generic_points(const BodySpec& spec, int count, std::uint64_t seed);

struct SymmetryResult {
  double max_mirror = 0.0;           // |V(a,c) - V(-a,c)|
  double max_reflection = 0.0;       // |V(a,c) + V(a,-c) - C0|
  double max_complement = 0.0;       // |V_geq + V_leq - C0|
  double center_error = 0.0;         // |V(0,0) - C0/2|
};

SymmetryResult symmetry_battery(const BodySpec& spec, const std::vector<GridPoint>& points,
                                double tol);

/// Where classify (no tolerance band) switches domain near each critical
/// offset at slope a, found by bisection; returns |found - expected| per offset.
std::vector<double> transition_errors(const BodySpec& spec, double a);

struct DegreeResidual {
  int degree = 0;
  int degree_a = 0;
  int degree_c = 0;
  bool ok = false;
  double fit_rms = 0.0;
  double max_residual = 0.0;
  double rms_residual = 0.0;
  std::size_t no_candidates = 0;  // every candidate complex
  std::string error;
};

struct CrossDomainResult {
  SweepResult s_sweep;
  SweepResult p_sweep;
  std::optional<PolynomialModel> s_model;
  std::optional<PolynomialModel> p_model;
  std::size_t s_samples = 0;
  std::size_t p_samples = 0;
  double vieta_max = 0.0;
  double bound_s = 0.0;  // max |S| on a dense grid of domain (3)
  double bound_p = 0.0;  // max |P| on a dense grid of domain (2r)
  double s_center_error = 0.0;
  std::size_t held3_points = 0;
  std::size_t held2l_points = 0;
  std::size_t held4_points = 0;
  double held3_max = 0.0;
  double held2l_max = 0.0;
  double held4_max = 0.0;
  double held4_rms = 0.0;
  int discarded_complex = 0;
  bool domain4_reachable = true;
  /// Held-out domain-(4) residuals for P at every swept degree (S fixed).
  std::vector<DegreeResidual> per_degree;
  std::vector<std::string> errors;
};

/// Fits S on domain (3), P on domain (2r) and predicts the held-out points.
CrossDomainResult run_cross_domain(const SuiteConfig& config);

struct Report {
  BodySpec spec;
  double c0 = 0.0;
  std::vector<Check> checks;
  json models = json::object();
  json details = json::object();
  json seeds = json::object();
  json timing = json::object();

  [[nodiscard]] json to_json() const;
  [[nodiscard]] bool exact_claims_hold() const;
  [[nodiscard]] const Check* find(const std::string& name) const;
};

Report run_suite(const SuiteConfig& config);

void write_report(const Report& report, const std::filesystem::path& path);

}  // namespace tubevol
