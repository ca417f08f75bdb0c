#include "tubevol/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tubevol {

std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::Outside1: return "Outside1";
    case Domain::LeftOnly2l: return "LeftOnly2l";
    case Domain::RightOnly2r: return "RightOnly2r";
    case Domain::Separating3: return "Separating3";
    case Domain::Both4: return "Both4";
    case Domain::NearDiscriminant: return "NearDiscriminant";
  }
  return "?";
}

std::string_view domain_tag(Domain d) {
  switch (d) {
    case Domain::Outside1: return "1";
    case Domain::LeftOnly2l: return "2l";
    case Domain::RightOnly2r: return "2r";
    case Domain::Separating3: return "3";
    case Domain::Both4: return "4";
    case Domain::NearDiscriminant: return "near";
  }
  return "?";
}

Domain parse_domain_tag(std::string_view tag) {
  if (tag == "1") return Domain::Outside1;
  if (tag == "2l") return Domain::LeftOnly2l;
  if (tag == "2r") return Domain::RightOnly2r;
  if (tag == "3") return Domain::Separating3;
  if (tag == "4") return Domain::Both4;
  if (tag == "near") return Domain::NearDiscriminant;
  throw std::invalid_argument("unknown domain '" + std::string(tag) + "'");
}

std::string_view to_string(Label l) {
  switch (l) {
    case Label::Lminus: return "L-";
    case Label::Lplus: return "L+";
    case Label::Rminus: return "R-";
    case Label::Rplus: return "R+";
  }
  return "?";
}

Label parse_label(std::string_view s) {
  for (Label l : kAllLabels)
    if (to_string(l) == s) return l;
  throw std::invalid_argument("unknown thimble label '" + std::string(s) + "'");
}

double tangency_halfwidth(double a, const BodySpec& spec) {
  return spec.eps * std::sqrt(1.0 + a * a);
}

CriticalOffsets critical_offsets(double a, const BodySpec& spec) {
  CriticalOffsets out;
  out.E = tangency_halfwidth(a, spec);
  std::array<std::pair<double, Label>, 4> raw{{{-1.0 - out.E, Label::Lminus},
                                               {-1.0 + out.E, Label::Lplus},
                                               {1.0 - out.E, Label::Rminus},
                                               {1.0 + out.E, Label::Rplus}}};
  // Stable on ties (E = 1) so the order keeps L+ before R-.
  std::stable_sort(raw.begin(), raw.end(),
                   [](const auto& l, const auto& r) { return l.first < r.first; });
  for (std::size_t i = 0; i < 4; ++i) {
    out.offsets[i] = raw[i].first;
    out.labels[i] = raw[i].second;
  }
  return out;
}

Domain classify(double a, double c, const BodySpec& spec, double tol) {
  const double scale = std::sqrt(1.0 + a * a);
  const double d_right = std::abs(1.0 - c) / scale;
  const double d_left = std::abs(1.0 + c) / scale;
  if (std::min(std::abs(d_right - spec.eps), std::abs(d_left - spec.eps)) * scale <= tol)
    return Domain::NearDiscriminant;
  const bool hits_right = d_right < spec.eps;
  const bool hits_left = d_left < spec.eps;
  if (hits_right && hits_left) return Domain::Both4;
  if (hits_right) return Domain::RightOnly2r;
  if (hits_left) return Domain::LeftOnly2l;
  return std::abs(c) < 1.0 ? Domain::Separating3 : Domain::Outside1;
}

Domain classify(const NormalForm& nf, const BodySpec& spec, double tol) {
  if (!nf.degenerate) return classify(nf.a, nf.c, spec, tol);
  // A horizontal slice line y1 = c meets both circles or neither.
  const double gap = std::abs(nf.c) - spec.eps;
  if (std::abs(gap) <= tol) return Domain::NearDiscriminant;
  return gap < 0.0 ? Domain::Both4 : Domain::Outside1;
}

Domain classify_hyperplane(const Hyperplane& h, const BodySpec& spec, double tol) {
  h.validate(spec);
  return classify(reduce_to_normal_form(h), spec, tol);
}

Interval domain_c_interval(Domain d, double a, const BodySpec& spec) {
  const double E = tangency_halfwidth(a, spec);
  switch (d) {
    case Domain::Separating3: return {-1.0 + E, 1.0 - E};
    case Domain::Both4: return {1.0 - E, E - 1.0};
    case Domain::RightOnly2r: return {std::abs(1.0 - E), 1.0 + E};
    case Domain::LeftOnly2l: return {-1.0 - E, -std::abs(1.0 - E)};
    default: break;
  }
  throw std::invalid_argument("no bounded c-interval for domain " + std::string(to_string(d)));
}

double domain4_min_slope(const BodySpec& spec) {
  return std::sqrt(1.0 / (spec.eps * spec.eps) - 1.0);
}

}  // namespace tubevol
