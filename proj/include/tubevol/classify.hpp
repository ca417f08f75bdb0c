#pragma once

// Classification of the generic hyperplanes x1 = a*y1 + c by how the slice
// line meets the two circles (x1 -/+ 1)^2 + y1^2 = eps^2.

#include <array>
#include <string_view>

#include "tubevol/body.hpp"

namespace tubevol {

enum class Domain {
  Outside1,     // misses both circles, leaves them on one side
  LeftOnly2l,   // crosses the left circle only
  RightOnly2r,  // crosses the right circle only
  Separating3,  // misses both circles, separates them
  Both4,        // crosses both circles
  NearDiscriminant,
};

inline constexpr double kDefaultDiscriminantTol = 1e-9;

/// Thimble labels: circle (L at x1 = -1, R at x1 = +1) and the sign of the
/// tangency offset relative to the circle center.
enum class Label { Lminus = 0, Lplus = 1, Rminus = 2, Rplus = 3 };

inline constexpr std::array<Label, 4> kAllLabels{Label::Lminus, Label::Lplus, Label::Rminus,
                                                 Label::Rplus};

struct CriticalOffsets {
  double E = 0.0;
  std::array<double, 4> offsets{};  // ascending
  std::array<Label, 4> labels{};    // label of each offset
};

std::string_view to_string(Domain d);
std::string_view to_string(Label l);
/// Short CLI/CSV tag: "1", "2l", "2r", "3", "4", "near".
std::string_view domain_tag(Domain d);
Domain parse_domain_tag(std::string_view tag);
Label parse_label(std::string_view s);

/// Tangency half-width eps * sqrt(1 + a^2).
double tangency_halfwidth(double a, const BodySpec& spec);

/// The four offsets +-1 +- E at which x1 = a*y1 + c touches a slice circle.
CriticalOffsets critical_offsets(double a, const BodySpec& spec);

Domain classify(double a, double c, const BodySpec& spec, double tol = kDefaultDiscriminantTol);
Domain classify(const NormalForm& nf, const BodySpec& spec, double tol = kDefaultDiscriminantTol);
Domain classify_hyperplane(const Hyperplane& h, const BodySpec& spec,
                           double tol = kDefaultDiscriminantTol);

/// Open c-interval of a domain at slope a, or an empty interval
/// (lo >= hi) when the domain does not occur there. Outside1 has two
/// unbounded pieces and is not supported.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] bool empty() const { return !(lo < hi); }
};
Interval domain_c_interval(Domain d, double a, const BodySpec& spec);

/// Smallest |a| for which domain (4) exists: sqrt(1/eps^2 - 1).
double domain4_min_slope(const BodySpec& spec);

}  // namespace tubevol
