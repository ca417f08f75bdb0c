#include "tubevol/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/special_functions/binomial.hpp>

namespace tubevol {
namespace {

/// Monomial coefficients of T_0..T_degree: rows[n][r] is the x^r coefficient.
std::vector<std::vector<double>> chebyshev_monomials(int degree) {
  std::vector<std::vector<double>> rows(degree + 1, std::vector<double>(degree + 1, 0.0));
  rows[0][0] = 1.0;
  if (degree >= 1) rows[1][1] = 1.0;
  for (int n = 2; n <= degree; ++n)
    for (int r = 0; r <= n; ++r)
      rows[n][r] = (r > 0 ? 2.0 * rows[n - 1][r - 1] : 0.0) - rows[n - 2][r];
  return rows;
}

/// T_0(x)..T_degree(x).
void chebyshev_values(double x, int degree, std::vector<double>& out) {
  out.resize(degree + 1);
  out[0] = 1.0;
  if (degree >= 1) out[1] = x;
  for (int n = 2; n <= degree; ++n) out[n] = 2.0 * x * out[n - 1] - out[n - 2];
}

/// Center and half-width of [lo, hi]; a degenerate range gets half-width 1.
std::pair<double, double> centered(double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  return {0.5 * (lo + hi), half > 0.0 ? half : 1.0};
}

/// rows[t][q]: coefficient of z^q in ((z - mid) / half)^t.
std::vector<std::vector<double>> affine_powers(double mid, double half, int degree) {
  std::vector<std::vector<double>> rows(degree + 1, std::vector<double>(degree + 1, 0.0));
  for (int t = 0; t <= degree; ++t)
    for (int q = 0; q <= t; ++q)
      rows[t][q] = boost::math::binomial_coefficient<double>(t, q) * std::pow(-mid, t - q) /
                   std::pow(half, t);
  return rows;
}

std::string describe(const std::vector<Monomial>& basis) {
  std::ostringstream os;
  for (std::size_t i = 0; i < basis.size(); ++i)
    os << (i ? " " : "") << "a^" << basis[i].i << "c^" << basis[i].j;
  return os.str();
}

}  // namespace

std::string_view to_string(Target t) { return t == Target::S ? "S" : "P"; }

Target parse_target(std::string_view s) {
  if (s == "S") return Target::S;
  if (s == "P") return Target::P;
  throw std::invalid_argument("target must be S or P, got '" + std::string(s) + "'");
}

int weight_exponent(Target t, const BodySpec& spec) {
  return t == Target::S ? (spec.n + spec.m - 1) / 2 : spec.n + spec.m;
}

std::vector<Monomial> make_basis(int degree_a, int degree_c, bool even_in_a) {
  if (degree_a < 0 || degree_c < 0) throw std::invalid_argument("degrees must be >= 0");
  std::vector<Monomial> basis;
  for (int i = 0; i <= degree_a; i += even_in_a ? 2 : 1)
    for (int j = 0; j <= degree_c; ++j) basis.push_back({i, j});
  return basis;
}

double PolynomialModel::numerator(double a, double c) const {
  if (chebyshev) return evaluate(a, c) * std::pow(1.0 + a * a, k);
  double acc = 0.0;
  for (std::size_t t = 0; t < basis.size(); ++t)
    acc += coeffs[t] * std::pow(a, basis[t].i) * std::pow(c, basis[t].j);
  return acc;
}

double PolynomialModel::evaluate(double a, double c) const {
  if (!chebyshev) return numerator(a, c) / std::pow(1.0 + a * a, k);
  const ChebyshevForm& f = *chebyshev;
  int na = 0;
  for (const auto& b : basis) na = std::max(na, f.in_s ? b.i / 2 : b.i);
  thread_local std::vector<double> ta;
  thread_local std::vector<double> tc;
  double w = 0.0;
  if (f.in_s) {
    const double s = 1.0 / (1.0 + a * a);
    w = std::pow(s, k - degree_a / 2);
    chebyshev_values((s - f.a_mid) / f.a_half, na, ta);
  } else {
    w = std::pow(1.0 + a * a, -k);
    chebyshev_values((a - f.a_mid) / f.a_half, na, ta);
  }
  chebyshev_values((c - f.c_mid) / f.c_half, degree_c, tc);
  double acc = 0.0;
  for (std::size_t t = 0; t < basis.size(); ++t)
    acc += f.coeffs[t] * ta[f.in_s ? basis[t].i / 2 : basis[t].i] * tc[basis[t].j];
  return w * acc;
}

double PolynomialModel::odd_coefficient_ratio() const {
  double largest = 0.0;
  double odd = 0.0;
  for (std::size_t t = 0; t < basis.size(); ++t) {
    largest = std::max(largest, std::abs(coeffs[t]));
    if (basis[t].i % 2) odd = std::max(odd, std::abs(coeffs[t]));
  }
  return largest > 0.0 ? odd / largest : 0.0;
}

PolynomialModel fit_weighted_polynomial(const BodySpec& spec, std::span<const VolumeSample> samples,
                                        Target target, int degree_a, int degree_c,
                                        const FitOptions& options) {
  PolynomialModel model;
  model.spec = spec;
  model.target = target;
  model.k = weight_exponent(target, spec);
  model.degree_a = degree_a;
  model.degree_c = degree_c;
  model.basis = make_basis(degree_a, degree_c, options.even_in_a);
  const auto cols = static_cast<Eigen::Index>(model.basis.size());
  const auto rows = static_cast<Eigen::Index>(samples.size());
  if (rows < cols)
    throw FitError("need at least " + std::to_string(cols) + " samples for basis, got " +
                       std::to_string(rows),
                   model.basis);

  FitWindow& win = model.fit_window;
  win.a_lo = win.c_lo = std::numeric_limits<double>::infinity();
  win.a_hi = win.c_hi = -std::numeric_limits<double>::infinity();
  double a_scale = 0.0;
  double s_lo = std::numeric_limits<double>::infinity();
  double s_hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    win.a_lo = std::min(win.a_lo, s.a);
    win.a_hi = std::max(win.a_hi, s.a);
    win.c_lo = std::min(win.c_lo, s.c);
    win.c_hi = std::max(win.c_hi, s.c);
    a_scale = std::max(a_scale, std::abs(s.a));
    const double sv = 1.0 / (1.0 + s.a * s.a);
    s_lo = std::min(s_lo, sv);
    s_hi = std::max(s_hi, sv);
  }
  const auto [c_mid, c_half] = centered(win.c_lo, win.c_hi);
  const auto [s_mid, s_half] = centered(s_lo, s_hi);
  if (a_scale == 0.0) a_scale = 1.0;

  // Even basis: a^{2i} (1+a^2)^{-k}, i <= K, spans s^{k-K} p(s) with
  // s = 1/(1+a^2) and deg p <= K, so the columns are s^{k-K} T_l(x(s)) T_j(y(c)).
  // Otherwise a -> a / a_scale, which keeps parity.
  const bool even = options.even_in_a;
  const int K = degree_a / 2;
  const int na = even ? K : degree_a;

  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  std::vector<double> ta;
  std::vector<double> tc;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& s = samples[r];
    double w = 0.0;
    if (even) {
      const double sv = 1.0 / (1.0 + s.a * s.a);
      w = std::pow(sv, model.k - K);
      chebyshev_values((sv - s_mid) / s_half, na, ta);
    } else {
      w = std::pow(1.0 + s.a * s.a, -model.k);
      chebyshev_values(s.a / a_scale, na, ta);
    }
    chebyshev_values((s.c - c_mid) / c_half, degree_c, tc);
    for (Eigen::Index col = 0; col < cols; ++col) {
      const int ia = even ? model.basis[col].i / 2 : model.basis[col].i;
      design(r, col) = w * ta[ia] * tc[model.basis[col].j];
    }
    rhs(r) = s.value;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < cols) {
    std::vector<Monomial> offending;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index t = qr.rank(); t < cols; ++t) offending.push_back(model.basis[perm(t)]);
    throw FitError("rank-deficient design matrix (rank " + std::to_string(qr.rank()) + " of " +
                       std::to_string(cols) + "); dependent basis: " + describe(offending),
                   offending);
  }
  const Eigen::VectorXd cheb = qr.solve(rhs);

  // Back to monomials in original coordinates.
  // apoly[l][q]: coefficient of a^q in the a-factor of column family l.
  std::vector<std::vector<double>> apoly(na + 1, std::vector<double>(degree_a + 1, 0.0));
  const auto tma = chebyshev_monomials(na);
  if (even) {
    // (1+a^2)^{k} s^{k-K} T_l(x) = (1+a^2)^K T_l((s - s_mid)/s_half), and
    // (1+a^2)^K s^r = (1+a^2)^{K-r}.
    const auto xs = affine_powers(s_mid, s_half, na);
    for (int l = 0; l <= na; ++l)
      for (int t = 0; t <= l; ++t) {
        if (tma[l][t] == 0.0) continue;
        for (int r = 0; r <= t; ++r)
          for (int q = 0; q <= K - r; ++q)
            apoly[l][2 * q] += tma[l][t] * xs[t][r] *
                               boost::math::binomial_coefficient<double>(K - r, q);
      }
  } else {
    for (int l = 0; l <= na; ++l)
      for (int r = 0; r <= l; ++r) apoly[l][r] = tma[l][r] / std::pow(a_scale, r);
  }
  const auto tmc = chebyshev_monomials(degree_c);
  const auto cpow = affine_powers(c_mid, c_half, degree_c);
  std::vector<std::vector<double>> cpoly(degree_c + 1, std::vector<double>(degree_c + 1, 0.0));
  for (int j = 0; j <= degree_c; ++j)
    for (int t = 0; t <= j; ++t)
      for (int q = 0; q <= t; ++q) cpoly[j][q] += tmc[j][t] * cpow[t][q];

  std::vector<double> mono((degree_a + 1) * (degree_c + 1), 0.0);
  auto at = [&](int i, int j) -> double& { return mono[i * (degree_c + 1) + j]; };
  for (Eigen::Index col = 0; col < cols; ++col) {
    const int l = even ? model.basis[col].i / 2 : model.basis[col].i;
    const int j = model.basis[col].j;
    for (int p = 0; p <= degree_a; ++p) {
      if (apoly[l][p] == 0.0) continue;
      for (int q = 0; q <= j; ++q) at(p, q) += cheb(col) * apoly[l][p] * cpoly[j][q];
    }
  }
  model.coeffs.resize(model.basis.size());
  for (std::size_t t = 0; t < model.basis.size(); ++t)
    model.coeffs[t] = at(model.basis[t].i, model.basis[t].j);

  ChebyshevForm form;
  form.in_s = even;
  form.a_mid = even ? s_mid : 0.0;
  form.a_half = even ? s_half : a_scale;
  form.c_mid = c_mid;
  form.c_half = c_half;
  form.coeffs.assign(cheb.data(), cheb.data() + cheb.size());
  model.chebyshev = form;

  model.residual_rms = rms_residual(model, samples);
  return model;
}

double rms_residual(const PolynomialModel& model, std::span<const VolumeSample> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& s : samples) {
    const double r = model.evaluate(s.a, s.c) - s.value;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

PolynomialModel fit_S(const BodySpec& spec, std::span<const VolumeSample> samples, int degree_a,
                      int degree_c, const FitOptions& options) {
  for (const auto& s : samples)
    if (classify(s.a, s.c, spec) != Domain::Separating3)
      throw std::invalid_argument("fit_S sample (a=" + std::to_string(s.a) +
                                  ", c=" + std::to_string(s.c) + ") is not in domain (3)");
  return fit_weighted_polynomial(spec, samples, Target::S, degree_a, degree_c, options);
}

std::vector<VolumeSample> derive_P_samples(const BodySpec& spec,
                                           std::span<const VolumeSample> samples,
                                           const PolynomialModel& s_model) {
  if (s_model.target != Target::S) throw std::invalid_argument("derive_P_samples needs an S model");
  std::vector<VolumeSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    if (classify(s.a, s.c, spec) != Domain::RightOnly2r)
      throw std::invalid_argument("P sample (a=" + std::to_string(s.a) +
                                  ", c=" + std::to_string(s.c) + ") is not in domain (2r)");
    out.push_back({s.a, s.c, s.value * (s_model.evaluate(s.a, s.c) - s.value)});
  }
  return out;
}

PolynomialModel fit_P(const BodySpec& spec, std::span<const VolumeSample> p_samples, int degree_a,
                      int degree_c, const FitOptions& options) {
  return fit_weighted_polynomial(spec, p_samples, Target::P, degree_a, degree_c, options);
}

std::pair<std::complex<double>, std::complex<double>> phi_roots(const PhiModel& phi, double a,
                                                                double c) {
  const double s = phi.s_model.evaluate(a, c);
  const double p = phi.p_model.evaluate(a, c);
  const double disc = s * s - 4.0 * p;
  if (disc < 0.0) {
    const double im = 0.5 * std::sqrt(-disc);
    return {{0.5 * s, im}, {0.5 * s, -im}};
  }
  // Avoid cancellation: q = (s + sign(s) sqrt(disc)) / 2, roots q and p / q.
  const double root = std::sqrt(disc);
  const double q = 0.5 * (s + std::copysign(root, s));
  if (q == 0.0) return {{0.0, 0.0}, {0.0, 0.0}};
  const double r1 = q;
  const double r2 = p / q;
  return {{std::max(r1, r2), 0.0}, {std::min(r1, r2), 0.0}};
}

Candidates predict_candidates(const PhiModel& phi, double a, double c, Domain label) {
  Candidates out;
  auto real_roots = [&](double aa, double cc) {
    auto [r1, r2] = phi_roots(phi, aa, cc);
    std::vector<double> roots;
    for (auto r : {r1, r2}) {
      if (r.imag() != 0.0) {
        ++out.discarded_complex;
        std::ostringstream os;
        os << "complex root " << r.real() << (r.imag() < 0 ? "" : "+") << r.imag()
           << "i of Phi(., " << aa << ", " << cc << ") discarded";
        out.warnings.push_back(os.str());
        continue;
      }
      roots.push_back(r.real());
    }
    return roots;
  };
  switch (label) {
    case Domain::Separating3: {
      const double s = phi.s_model.evaluate(a, c);
      out.values = {s, phi.c0 - s};
      break;
    }
    case Domain::RightOnly2r:
      for (double r : real_roots(a, c)) {
        out.values.push_back(r);
        out.values.push_back(phi.c0 - r);
      }
      break;
    case Domain::LeftOnly2l:
      for (double r : real_roots(-a, -c)) {
        out.values.push_back(phi.c0 - r);
        out.values.push_back(r);
      }
      break;
    case Domain::Both4: {
      const auto right = real_roots(a, c);
      const auto left = real_roots(-a, -c);
      for (double r1 : right)
        for (double r2 : left) out.values.push_back(r1 + r2);
      break;
    }
    default:
      throw std::invalid_argument("no volume candidates for domain " +
                                  std::string(to_string(label)));
  }
  return out;
}

double min_candidate_residual(const Candidates& candidates, double measured) {
  double best = std::numeric_limits<double>::infinity();
  for (double v : candidates.values) best = std::min(best, std::abs(measured - v));
  return best;
}

std::vector<int> sweep_a_degrees(int degree, int k, const SweepOptions& options) {
  if (options.square) return {degree};
  std::vector<int> out;
  for (int e : options.a_excess)
    if (k + e >= 0) out.push_back(2 * (k + e));
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t count, double validation_fraction, std::uint64_t seed) {
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const auto n_valid = static_cast<std::size_t>(std::llround(validation_fraction * count));
  std::vector<std::size_t> valid(idx.begin(), idx.begin() + n_valid);
  std::vector<std::size_t> train(idx.begin() + n_valid, idx.end());
  std::sort(valid.begin(), valid.end());
  std::sort(train.begin(), train.end());
  return {train, valid};
}

const SweepEntry* SweepResult::entry(int degree) const {
  for (const auto& e : entries)
    if (e.degree == degree) return &e;
  return nullptr;
}

namespace {

/// Smallest key whose score is within 10% of the best (or under the floor).
template <class Item, class Key, class Score>
const Item* pick_smallest_near_best(const std::vector<Item>& items, Key key, Score score,
                                    double noise_floor) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& it : items)
    if (std::isfinite(score(it))) best = std::min(best, score(it));
  if (!std::isfinite(best)) return nullptr;
  const double accept = std::max(1.1 * best, noise_floor);
  const Item* chosen = nullptr;
  for (const auto& it : items)
    if (score(it) <= accept && (!chosen || key(it) < key(*chosen))) chosen = &it;
  return chosen;
}

}  // namespace

SweepResult sweep_degrees(std::span<const VolumeSample> samples, int k, const SweepOptions& options,
                          const FitFunction& fit) {
  auto [train_idx, valid_idx] =
      split_indices(samples.size(), options.validation_fraction, options.split_seed);
  std::vector<VolumeSample> train;
  std::vector<VolumeSample> valid;
  for (auto i : train_idx) train.push_back(samples[i]);
  for (auto i : valid_idx) valid.push_back(samples[i]);

  SweepResult out;
  for (int d : options.degrees) {
    std::vector<SweepEntry> tries;
    std::string last_error;
    for (int da : sweep_a_degrees(d, k, options)) {
      SweepEntry e;
      e.degree = d;
      e.degree_a = da;
      e.degree_c = d;
      try {
        const PolynomialModel model = fit(train, da, d);
        e.train_rms = model.residual_rms;
        e.validation_rms = rms_residual(model, valid);
        tries.push_back(e);
      } catch (const std::exception& ex) {
        last_error = ex.what();
      }
    }
    const SweepEntry* best = pick_smallest_near_best(
        tries, [](const SweepEntry& e) { return e.degree_a; },
        [](const SweepEntry& e) { return e.validation_rms; }, options.noise_floor);
    if (best) {
      out.entries.push_back(*best);
    } else {
      SweepEntry e;
      e.degree = d;
      e.degree_c = d;
      e.ok = false;
      e.error = last_error.empty() ? "no a-degree candidates" : last_error;
      out.entries.push_back(e);
    }
  }
  out.chosen_degree = choose_degree(out.entries, options.noise_floor);
  return out;
}

int choose_degree(const std::vector<SweepEntry>& entries, double noise_floor) {
  std::vector<SweepEntry> ok;
  for (const auto& e : entries)
    if (e.ok) ok.push_back(e);
  const SweepEntry* best = pick_smallest_near_best(
      ok, [](const SweepEntry& e) { return e.degree; },
      [](const SweepEntry& e) { return e.validation_rms; }, noise_floor);
  return best ? best->degree : -1;
}

}  // namespace tubevol
