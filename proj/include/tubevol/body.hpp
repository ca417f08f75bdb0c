#pragma once

// Tube body around the unit sphere S^{n-1} in R^n x R^m:
//   (|x| - 1)^2 + |y|^2 <= eps^2,  n odd >= 3, m even >= 2, 0 < eps < 1.

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tubevol {

struct BodySpec {
  int n = 3;
  int m = 2;
  double eps = 0.5;

  /// Throws std::invalid_argument unless n is odd >= 3, m is even >= 2 and
  /// 0 < eps < 1.
  void validate() const;
  [[nodiscard]] int dim() const { return n + m; }

  static BodySpec make(int n, int m, double eps) {
    BodySpec s{n, m, eps};
    s.validate();
    return s;
  }
};

/// alpha . x + gamma . y = beta
struct Hyperplane {
  std::vector<double> alpha;
  std::vector<double> gamma;
  double beta = 0.0;

  void validate(const BodySpec& spec) const;
  [[nodiscard]] Hyperplane scaled(double lambda) const;
};

/// Representative x1 = a*y1 + c of the O(n) x O(m) orbit of a hyperplane.
/// When degenerate (alpha = 0) the plane is y1 = c and `a` is unused.
struct NormalForm {
  double a = 0.0;
  double c = 0.0;
  bool degenerate = false;
};

/// geq is {x1 - a*y1 - c >= 0} (resp. {y1 - c >= 0} when degenerate), which
/// is the image of {alpha.x + gamma.y - beta >= 0}.
enum class Side { geq, leq };

enum class Method { quadrature, monte_carlo, closed_form };

struct CutVolumeResult {
  double value = 0.0;
  double error_estimate = 0.0;
  Method method = Method::quadrature;
};

enum class Membership { Inside, Boundary, Outside };

std::string_view to_string(Side s);
std::string_view to_string(Method m);
std::string_view to_string(Membership m);
Side parse_side(std::string_view s);
Method parse_method(std::string_view s);

[[nodiscard]] inline Side opposite(Side s) {
  return s == Side::geq ? Side::leq : Side::geq;
}

/// (|x|^2 + |y|^2 + 1 - eps^2)^2 - 4|x|^2; negative inside the body.
double implicit_value(const BodySpec& spec, std::span<const double> point);

Membership membership(const BodySpec& spec, std::span<const double> point,
                      double tol);

NormalForm reduce_to_normal_form(const Hyperplane& h);

/// Closed-form volume C0 of the tube body.
double total_volume(const BodySpec& spec);

/// Area of the unit k-sphere S^k in R^{k+1}.
double sphere_area(int k);
/// Volume of the unit ball in R^d.
double ball_volume(int d);

}  // namespace tubevol
