#include "tubevol/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>

namespace tubevol {
namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

enum class Cut { geq, leq, none };

/// Closed-form antiderivative of (rho^2 - u^2)^p in u.
class SliceAntiderivative {
 public:
  explicit SliceAntiderivative(int p) : p_(p), coeff_(p + 1) {
    for (int k = 0; k <= p; ++k)
      coeff_[k] = boost::math::binomial_coefficient<double>(p, k) * ((k % 2) ? -1.0 : 1.0) /
                  (2.0 * k + 1.0);
  }

  [[nodiscard]] double operator()(double rho, double u) const {
    const double r2 = rho * rho;
    const double u2 = u * u;
    double acc = 0.0;
    double upow = u;
    for (int k = 0; k <= p_; ++k) {
      acc += coeff_[k] * std::pow(r2, p_ - k) * upow;
      upow *= u2;
    }
    return acc;
  }

  /// int over {|u| <= rho} restricted by the cut at u = level.
  [[nodiscard]] double chord(double rho, double level, Cut cut) const {
    double lo = -rho;
    double hi = rho;
    if (cut == Cut::geq) lo = std::max(level, -rho);
    if (cut == Cut::leq) hi = std::min(level, rho);
    if (!(lo < hi)) return 0.0;
    return (*this)(rho, hi) - (*this)(rho, lo);
  }

 private:
  int p_;
  std::vector<double> coeff_;
};

template <int N, class F>
double gauss_legendre(F&& f, double lo, double hi) {
  return boost::math::quadrature::gauss<double, N>::integrate(f, lo, hi);
}

class CutIntegrand {
 public:
  CutIntegrand(const BodySpec& spec, double a, double c, Cut cut, double inner_tol)
      : spec_(spec), a_(a), c_(c), cut_(cut), inner_tol_(inner_tol), slice_((spec.n - 3) / 2) {}

  /// Integrand of the outer integral in phi, v = eps sin(phi).
  [[nodiscard]] double operator()(double phi) const {
    const double v = spec_.eps * std::sin(phi);
    const double w = spec_.eps * std::cos(phi);
    return section(v, w) * w;
  }

 private:
  // int_theta cos^m(theta) rho G(rho) dtheta times w^m.
  [[nodiscard]] double section(double v, double w) const {
    if (w <= 0.0) return 0.0;
    const double level = a_ * v + c_;
    auto f = [&](double theta) {
      const double rho = 1.0 + w * std::sin(theta);
      return std::pow(std::cos(theta), spec_.m) * rho * slice_.chord(rho, level, cut_);
    };
    double total = 0.0;
    const double s = (std::abs(level) - 1.0) / w;
    if (cut_ != Cut::none && s > -1.0 && s < 1.0) {
      const double kink = std::asin(s);
      total = piece(f, -kHalfPi, kink) + piece(f, kink, kHalfPi);
    } else {
      total = piece(f, -kHalfPi, kHalfPi);
    }
    return total * std::pow(w, spec_.m);
  }

  template <class F>
  [[nodiscard]] double piece(F& f, double lo, double hi) const {
    if (!(lo < hi)) return 0.0;
    double prev = gauss_legendre<16>(f, lo, hi);
    double next = gauss_legendre<32>(f, lo, hi);
    if (std::abs(next - prev) <= inner_tol_) return next;
    prev = next;
    next = gauss_legendre<64>(f, lo, hi);
    if (std::abs(next - prev) <= inner_tol_) return next;
    return gauss_legendre<128>(f, lo, hi);
  }

  const BodySpec& spec_;
  double a_;
  double c_;
  Cut cut_;
  double inner_tol_;
  SliceAntiderivative slice_;
};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel make_panel(const F& f, double lo, double hi) {
  double err = 0.0;
  const double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, lo, hi, 0, 0.0, &err);
  return Panel{lo, hi, val, err};
}

/// Globally adaptive bisection on the worst panel until the summed error
/// estimate meets the absolute tolerance.
template <class F>
CutVolumeResult integrate_adaptive(const F& f, std::vector<double> breaks, double tol,
                                   int max_panels) {
  std::sort(breaks.begin(), breaks.end());
  std::priority_queue<Panel> heap;
  double err_sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) continue;
    const Panel p = make_panel(f, breaks[i], breaks[i + 1]);
    err_sum += p.error;
    heap.push(p);
  }
  int panels = static_cast<int>(heap.size());
  while (err_sum > tol && !heap.empty()) {
    if (panels >= max_panels)
      throw QuadratureError("cut volume quadrature did not reach tol " + std::to_string(tol) +
                            " within " + std::to_string(max_panels) +
                            " panels (error estimate " + std::to_string(err_sum) + ")");
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi)) {
      // Panel cannot be split further in double precision.
      throw QuadratureError("cut volume quadrature stalled at a degenerate panel");
    }
    Panel left = make_panel(f, worst.lo, mid);
    Panel right = make_panel(f, mid, worst.hi);
    err_sum += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  CutVolumeResult out{0.0, 0.0, Method::quadrature};
  for (; !heap.empty(); heap.pop()) {
    out.value += heap.top().value;
    out.error_estimate += heap.top().error;
  }
  return out;
}

double prefactor(const BodySpec& spec) {
  return sphere_area(spec.n - 2) * sphere_area(spec.m - 2) / (spec.m - 1);
}

/// phi-breakpoints where u = a v + c meets (u -/+ 1)^2 + v^2 = eps^2.
std::vector<double> circle_crossings(const BodySpec& spec, double a, double c) {
  std::vector<double> out;
  const double eps = spec.eps;
  for (double center : {-1.0, 1.0}) {
    const double d = c - center;
    const double disc = (1.0 + a * a) * eps * eps - d * d;
    if (disc <= 0.0) continue;
    const double root = std::sqrt(disc);
    for (double sgn : {-1.0, 1.0}) {
      const double v = (-a * d + sgn * root) / (1.0 + a * a);
      if (std::abs(v) < eps) out.push_back(std::asin(v / eps));
    }
  }
  return out;
}

CutVolumeResult run(const BodySpec& spec, double a, double c, Cut cut, double phi_lo,
                    double phi_hi, std::vector<double> breaks, double tol,
                    const QuadratureOptions& options) {
  const double k = prefactor(spec);
  const double inner_tol = tol / (10.0 * k * std::numbers::pi * spec.eps);
  CutIntegrand f(spec, a, c, cut, inner_tol);
  breaks.push_back(phi_lo);
  breaks.push_back(phi_hi);
  std::erase_if(breaks, [&](double b) { return b < phi_lo || b > phi_hi; });
  CutVolumeResult r = integrate_adaptive(f, std::move(breaks), tol / k, options.max_panels);
  r.value = std::max(0.0, r.value * k);
  r.error_estimate *= k;
  return r;
}

}  // namespace

CutVolumeResult cut_volume(const BodySpec& spec, const NormalForm& nf, Side side, double tol,
                           const QuadratureOptions& options) {
  spec.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("quadrature tol must be positive");
  if (classify(nf, spec, options.discriminant_tol) == Domain::NearDiscriminant)
    throw std::invalid_argument("plane is within " + std::to_string(options.discriminant_tol) +
                                " of a tangency; refusing to integrate");
  if (nf.degenerate) {
    // y1 >= c (or <= c): restrict v, keep the whole x-slice.
    const double s = std::clamp(nf.c / spec.eps, -1.0, 1.0);
    const double phi_c = std::asin(s);
    if (side == Side::geq) return run(spec, 0.0, 0.0, Cut::none, phi_c, kHalfPi, {}, tol, options);
    return run(spec, 0.0, 0.0, Cut::none, -kHalfPi, phi_c, {}, tol, options);
  }
  return run(spec, nf.a, nf.c, side == Side::geq ? Cut::geq : Cut::leq, -kHalfPi, kHalfPi,
             circle_crossings(spec, nf.a, nf.c), tol, options);
}

CutVolumeResult cut_volume(const BodySpec& spec, double a, double c, Side side, double tol,
                           const QuadratureOptions& options) {
  return cut_volume(spec, NormalForm{a, c, false}, side, tol, options);
}

CutVolumeResult cut_volume_hyperplane(const BodySpec& spec, const Hyperplane& h, Side side,
                                      double tol, const QuadratureOptions& options) {
  h.validate(spec);
  return cut_volume(spec, reduce_to_normal_form(h), side, tol, options);
}

CutVolumeResult whole_volume_quadrature(const BodySpec& spec, double tol,
                                        const QuadratureOptions& options) {
  spec.validate();
  return run(spec, 0.0, 0.0, Cut::none, -kHalfPi, kHalfPi, {}, tol, options);
}

}  // namespace tubevol
