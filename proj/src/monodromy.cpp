#include "tubevol/monodromy.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tubevol {

Perm4::Perm4() : images_(kAllLabels) {}

Perm4::Perm4(std::array<Label, 4> images) : images_(images) {
  std::array<bool, 4> seen{};
  for (Label l : images_) {
    const int i = static_cast<int>(l);
    if (i < 0 || i > 3 || seen[i]) throw std::invalid_argument("Perm4 images must be a bijection");
    seen[i] = true;
  }
}

Perm4 Perm4::operator*(const Perm4& other) const {
  std::array<Label, 4> out{};
  for (Label l : kAllLabels) out[static_cast<int>(l)] = (*this)(other(l));
  return Perm4(out);
}

Perm4 Perm4::inverse() const {
  std::array<Label, 4> out{};
  for (Label l : kAllLabels) out[static_cast<int>((*this)(l))] = l;
  return Perm4(out);
}

bool Perm4::is_identity() const { return images_ == kAllLabels; }

bool Perm4::is_involution() const { return ((*this) * (*this)).is_identity(); }

std::string Perm4::to_string() const {
  std::string out;
  std::array<bool, 4> done{};
  for (Label start : kAllLabels) {
    if (done[static_cast<int>(start)] || (*this)(start) == start) continue;
    out += "(";
    for (Label l = start; !done[static_cast<int>(l)]; l = (*this)(l)) {
      done[static_cast<int>(l)] = true;
      out += tubevol::to_string(l);
    }
    out += ")";
  }
  return out.empty() ? "()" : out;
}

LeafSet::LeafSet(std::initializer_list<Label> labels) {
  for (Label l : labels) insert(l);
}

LeafSet LeafSet::full() { return from_mask(0xF); }

LeafSet LeafSet::from_mask(std::uint8_t mask) {
  LeafSet s;
  s.mask_ = mask & 0xF;
  return s;
}

std::size_t LeafSet::size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::vector<Label> LeafSet::labels() const {
  std::vector<Label> out;
  for (Label l : kAllLabels)
    if (contains(l)) out.push_back(l);
  return out;
}

std::string LeafSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (Label l : labels()) {
    if (!first) out += ",";
    out += tubevol::to_string(l);
    first = false;
  }
  return out + "}";
}

LeafSet parse_leaf(const std::string& text) {
  LeafSet s;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (!item.empty()) s.insert(parse_label(item));
  }
  return s;
}

Perm4 generator_g1() {
  return Perm4({Label::Lplus, Label::Lminus, Label::Rplus, Label::Rminus});
}

Perm4 generator_g2() {
  return Perm4({Label::Rplus, Label::Rminus, Label::Lplus, Label::Lminus});
}

Perm4 loop_to_perm(const LoopSpec& loop) {
  // (p, q) = (p - q)(1,0) + q(1,1); only parities survive.
  const bool use_g1 = ((loop.lk3 - loop.lk4) % 2) != 0;
  const bool use_g2 = (loop.lk4 % 2) != 0;
  Perm4 g;
  if (use_g1) g = g * generator_g1();
  if (use_g2) g = g * generator_g2();
  return g;
}

std::vector<Perm4> generated_group(const std::vector<Perm4>& generators) {
  std::set<Perm4> group{Perm4{}};
  std::vector<Perm4> frontier{Perm4{}};
  while (!frontier.empty()) {
    std::vector<Perm4> next;
    for (const auto& g : frontier)
      for (const auto& s : generators) {
        const Perm4 h = s * g;
        if (group.insert(h).second) next.push_back(h);
      }
    frontier = std::move(next);
  }
  return {group.begin(), group.end()};
}

std::vector<Perm4> group_closure() { return generated_group({generator_g1(), generator_g2()}); }

std::vector<Label> orbit(const std::vector<Perm4>& generators, Label label) {
  std::vector<Label> out{label};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& g : generators) {
      const Label l = g(out[i]);
      if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    }
  std::sort(out.begin(), out.end());
  return out;
}

LeafSet leaf_below(const CriticalOffsets& offsets, double c) {
  LeafSet s;
  for (std::size_t i = 0; i < 4; ++i)
    if (offsets.offsets[i] < c) s.insert(offsets.labels[i]);
  return s;
}

LeafSet leaf_of_domain(Domain label, Side side, const CriticalOffsets& offsets, double c) {
  LeafSet leq;
  switch (label) {
    case Domain::LeftOnly2l: leq = {Label::Lminus}; break;
    case Domain::Separating3: leq = {Label::Lminus, Label::Lplus}; break;
    case Domain::RightOnly2r: leq = {Label::Lminus, Label::Lplus, Label::Rminus}; break;
    case Domain::Both4: leq = {Label::Lminus, Label::Rminus}; break;
    case Domain::Outside1:
      leq = c > offsets.offsets.back() ? LeafSet::full() : LeafSet{};
      break;
    case Domain::NearDiscriminant:
      throw std::invalid_argument("no leaf for a plane on the discriminant");
  }
  return side == Side::leq ? leq : leq.complement();
}

LeafSet apply(const Perm4& g, const LeafSet& leaf) {
  LeafSet out;
  for (Label l : leaf.labels()) out.insert(g(l));
  return out;
}

LeafSet transport_leaf(const LeafSet& leaf, const LoopSpec& loop) {
  return apply(loop_to_perm(loop), leaf);
}

bool leaves_connected(const LeafSet& a, const LeafSet& b) {
  const auto group = group_closure();
  return std::any_of(group.begin(), group.end(), [&](const Perm4& g) { return apply(g, a) == b; });
}

}  // namespace tubevol
