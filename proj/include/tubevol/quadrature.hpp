#pragma once

// Deterministic cut volumes by reduction to an iterated integral.
//
// With u = x1, v = y1, rho = |x| and w(v) = sqrt(eps^2 - v^2), the body
// volume on the side {u - a v - c >= 0} is
//
//   K * int_v int_rho [ int_u (rho^2 - u^2)^{(n-3)/2} du ] rho
//         * (w^2 - (rho - 1)^2)^{(m-1)/2} drho dv,
//   K = |S^{n-2}| |S^{m-2}| / (m - 1),
//
// with |u| <= rho, |rho - 1| <= w. The u-integral is a polynomial and is done
// in closed form; rho = 1 + w sin(theta) turns the rho-integral into a
// trigonometric polynomial on at most two pieces (Gauss-Legendre), and the
// v-integral runs over v = eps sin(phi) with adaptive Gauss-Kronrod panels
// split where the slice line meets the two circles.

#include <stdexcept>

#include "tubevol/body.hpp"
#include "tubevol/classify.hpp"

namespace tubevol {

inline constexpr double kDefaultQuadratureTol = 1e-8;

struct QuadratureOptions {
  /// Evaluation budget: maximum number of outer Gauss-Kronrod panels.
  int max_panels = 4000;
  double discriminant_tol = kDefaultDiscriminantTol;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Volume of the part of the body on `side` of x1 = a*y1 + c (or y1 = c when
/// degenerate). Throws std::invalid_argument for planes within
/// discriminant_tol of a tangency, QuadratureError when the budget is
/// exhausted before reaching `tol` (absolute).
CutVolumeResult cut_volume(const BodySpec& spec, const NormalForm& nf, Side side,
                           double tol = kDefaultQuadratureTol,
                           const QuadratureOptions& options = {});

CutVolumeResult cut_volume(const BodySpec& spec, double a, double c, Side side,
                           double tol = kDefaultQuadratureTol,
                           const QuadratureOptions& options = {});

CutVolumeResult cut_volume_hyperplane(const BodySpec& spec, const Hyperplane& h, Side side,
                                      double tol = kDefaultQuadratureTol,
                                      const QuadratureOptions& options = {});

/// The same integral with the side constraint removed.
CutVolumeResult whole_volume_quadrature(const BodySpec& spec,
                                        double tol = kDefaultQuadratureTol,
                                        const QuadratureOptions& options = {});

}  // namespace tubevol
