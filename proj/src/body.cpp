#include "tubevol/body.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/binomial.hpp>

namespace tubevol {

void BodySpec::validate() const {
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("n must be odd and >= 3, got " + std::to_string(n));
  if (m < 2 || m % 2 != 0)
    throw std::invalid_argument("m must be even and >= 2, got " + std::to_string(m));
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps must lie in (0, 1), got " + std::to_string(eps));
}

void Hyperplane::validate(const BodySpec& spec) const {
  if (static_cast<int>(alpha.size()) != spec.n || static_cast<int>(gamma.size()) != spec.m)
    throw std::invalid_argument("hyperplane needs " + std::to_string(spec.n) + " alpha and " +
                                std::to_string(spec.m) + " gamma coefficients");
}

Hyperplane Hyperplane::scaled(double lambda) const {
  Hyperplane h = *this;
  for (double& v : h.alpha) v *= lambda;
  for (double& v : h.gamma) v *= lambda;
  h.beta *= lambda;
  return h;
}

std::string_view to_string(Side s) { return s == Side::geq ? "geq" : "leq"; }

std::string_view to_string(Method m) {
  switch (m) {
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
    case Method::closed_form: return "closed_form";
  }
  return "?";
}

std::string_view to_string(Membership m) {
  switch (m) {
    case Membership::Inside: return "inside";
    case Membership::Boundary: return "boundary";
    case Membership::Outside: return "outside";
  }
  return "?";
}

Side parse_side(std::string_view s) {
  if (s == "geq") return Side::geq;
  if (s == "leq") return Side::leq;
  throw std::invalid_argument("side must be geq or leq, got '" + std::string(s) + "'");
}

Method parse_method(std::string_view s) {
  if (s == "quadrature") return Method::quadrature;
  if (s == "monte_carlo") return Method::monte_carlo;
  if (s == "closed_form") return Method::closed_form;
  throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

double implicit_value(const BodySpec& spec, std::span<const double> point) {
  double x2 = 0.0;
  double y2 = 0.0;
  for (int i = 0; i < spec.n; ++i) x2 += point[i] * point[i];
  for (int j = 0; j < spec.m; ++j) y2 += point[spec.n + j] * point[spec.n + j];
  const double q = x2 + y2 + 1.0 - spec.eps * spec.eps;
  return q * q - 4.0 * x2;
}

Membership membership(const BodySpec& spec, std::span<const double> point, double tol) {
  const double v = implicit_value(spec, point);
  if (std::abs(v) <= tol) return Membership::Boundary;
  return v < 0.0 ? Membership::Inside : Membership::Outside;
}

NormalForm reduce_to_normal_form(const Hyperplane& h) {
  double na = 0.0;
  double ng = 0.0;
  for (double v : h.alpha) na += v * v;
  for (double v : h.gamma) ng += v * v;
  na = std::sqrt(na);
  ng = std::sqrt(ng);
  if (na == 0.0 && ng == 0.0)
    throw std::invalid_argument("hyperplane has alpha = 0 and gamma = 0");
  if (na == 0.0) return NormalForm{0.0, h.beta / ng, true};
  return NormalForm{ng / na, h.beta / na, false};
}

double sphere_area(int k) {
  const double h = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double ball_volume(int d) { return sphere_area(d - 1) / d; }

double total_volume(const BodySpec& spec) {
  spec.validate();
  // Integrate (1+t)^{n-1} over the (m+1)-ball of radius eps; odd moments vanish.
  const int d = spec.m + 1;
  double sum = 0.0;
  for (int j = 0; 2 * j <= spec.n - 1; ++j) {
    const double moment = std::pow(spec.eps, d + 2 * j) *
                          std::pow(std::numbers::pi, 0.5 * (d - 1)) *
                          std::tgamma(j + 0.5) / std::tgamma(j + 1.0 + 0.5 * d);
    sum += boost::math::binomial_coefficient<double>(spec.n - 1, 2 * j) * moment;
  }
  return sphere_area(spec.n - 1) * sum;
}

}  // namespace tubevol
