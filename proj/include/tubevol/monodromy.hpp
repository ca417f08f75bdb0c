#pragma once

// Monodromy of the four thimble labels {L-, L+, R-, R+}.
//
// Loops in the space of generic hyperplanes are identified by their linking
// numbers with the two strata at infinity; the fundamental group of the
// complement is Z^2 and the representation factors through parity:
//   (1,0) -> g1 = (L- L+)(R- R+)
//   (1,1) -> g2 = (L- R+)(L+ R-)
// In the value-ordered labeling 1..4 = (L-, L+, R-, R+) (valid for E < 1)
// these are 1234 -> 2143 and 1234 -> 4321.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tubevol/body.hpp"
#include "tubevol/classify.hpp"

namespace tubevol {

class Perm4 {
 public:
  Perm4();  // identity
  explicit Perm4(std::array<Label, 4> images);

  [[nodiscard]] Label operator()(Label l) const { return images_[static_cast<int>(l)]; }
  [[nodiscard]] const std::array<Label, 4>& images() const { return images_; }

  /// (*this * other)(x) = (*this)(other(x)).
  [[nodiscard]] Perm4 operator*(const Perm4& other) const;
  [[nodiscard]] Perm4 inverse() const;
  [[nodiscard]] bool is_identity() const;
  [[nodiscard]] bool is_involution() const;  // order <= 2

  /// Cycle notation without fixed points, e.g. "(L-L+)(R-R+)"; "()" for identity.
  [[nodiscard]] std::string to_string() const;

  bool operator==(const Perm4&) const = default;
  auto operator<=>(const Perm4&) const = default;

 private:
  std::array<Label, 4> images_;
};

struct LoopSpec {
  long long lk3 = 0;
  long long lk4 = 0;
};

/// Subset of thimble labels; the volume leaf is the sum of their integrals.
class LeafSet {
 public:
  LeafSet() = default;
  LeafSet(std::initializer_list<Label> labels);
  static LeafSet full();
  static LeafSet from_mask(std::uint8_t mask);

  [[nodiscard]] bool contains(Label l) const { return mask_ & bit(l); }
  void insert(Label l) { mask_ |= bit(l); }
  [[nodiscard]] LeafSet complement() const { return from_mask(static_cast<std::uint8_t>(~mask_ & 0xF)); }
  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] bool empty() const { return mask_ == 0; }
  [[nodiscard]] std::uint8_t mask() const { return mask_; }
  /// Labels in L-, L+, R-, R+ order.
  [[nodiscard]] std::vector<Label> labels() const;
  [[nodiscard]] std::string to_string() const;

  bool operator==(const LeafSet&) const = default;

 private:
  static std::uint8_t bit(Label l) { return static_cast<std::uint8_t>(1u << static_cast<int>(l)); }
  std::uint8_t mask_ = 0;
};

/// Parses "L-,R-" (comma separated labels; empty string is the empty set).
LeafSet parse_leaf(const std::string& text);

Perm4 generator_g1();
Perm4 generator_g2();

Perm4 loop_to_perm(const LoopSpec& loop);

/// The image of the monodromy representation.
std::vector<Perm4> group_closure();
/// Closure of an arbitrary generating set.
std::vector<Perm4> generated_group(const std::vector<Perm4>& generators);

std::vector<Label> orbit(const std::vector<Perm4>& generators, Label label);

/// Labels whose critical offset lies below c: the thimbles making up the
/// leq part {x1 - a y1 - c <= 0}.
LeafSet leaf_below(const CriticalOffsets& offsets, double c);

/// Leaf of the `side` part for a domain. `c` is only consulted for Outside1,
/// where the leaf is empty or full depending on which side the body is on.
/// Throws std::invalid_argument for NearDiscriminant.
LeafSet leaf_of_domain(Domain label, Side side, const CriticalOffsets& offsets, double c);

LeafSet apply(const Perm4& g, const LeafSet& leaf);
LeafSet transport_leaf(const LeafSet& leaf, const LoopSpec& loop);

/// True iff some element of the full monodromy image maps a to b.
bool leaves_connected(const LeafSet& a, const LeafSet& b);

}  // namespace tubevol
