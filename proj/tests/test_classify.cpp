#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tubevol/classify.hpp"

using namespace tubevol;

namespace {

const BodySpec k32 = BodySpec::make(3, 2, 0.5);

Domain mirror_c(Domain d) {
  if (d == Domain::LeftOnly2l) return Domain::RightOnly2r;
  if (d == Domain::RightOnly2r) return Domain::LeftOnly2l;
  return d;
}

}  // namespace

TEST_CASE("critical offsets") {
  SUBCASE("a = 1") {
    const auto o = critical_offsets(1.0, k32);
    const double h = std::sqrt(2.0) / 2.0;
    CHECK(o.E == doctest::Approx(h));
    CHECK(o.offsets[0] == doctest::Approx(-1 - h));
    CHECK(o.offsets[1] == doctest::Approx(-1 + h));
    CHECK(o.offsets[2] == doctest::Approx(1 - h));
    CHECK(o.offsets[3] == doctest::Approx(1 + h));
    CHECK(o.offsets[0] == doctest::Approx(-1.70711).epsilon(1e-5));
    CHECK(o.labels == std::array{Label::Lminus, Label::Lplus, Label::Rminus, Label::Rplus});
  }
  SUBCASE("a = 0") {
    const auto o = critical_offsets(0.0, k32);
    CHECK(o.offsets == std::array{-1.5, -0.5, 0.5, 1.5});
  }
  SUBCASE("a = 2, E > 1 reorders the labels") {
    const auto o = critical_offsets(2.0, k32);
    const double E = std::sqrt(5.0) / 2.0;
    CHECK(o.E == doctest::Approx(E));
    CHECK(o.offsets[0] == doctest::Approx(-2.11803).epsilon(1e-5));
    CHECK(o.offsets[1] == doctest::Approx(1 - E));
    CHECK(o.offsets[2] == doctest::Approx(E - 1));
    CHECK(o.offsets[3] == doctest::Approx(1 + E));
    CHECK(o.labels == std::array{Label::Lminus, Label::Rminus, Label::Lplus, Label::Rplus});
  }
}

TEST_CASE("critical offsets are extremes of x1 - a y1 over the slice circles") {
  // max/min of u - a v on (u -+ 1)^2 + v^2 = eps^2 by brute force
  for (double a : {0.0, 0.3, 1.0, 2.0, 5.0}) {
    std::vector<double> found;
    for (double center : {-1.0, 1.0}) {
      double lo = 1e300;
      double hi = -1e300;
      for (int k = 0; k < 200000; ++k) {
        const double t = 2 * M_PI * k / 200000.0;
        const double u = center + 0.5 * std::cos(t);
        const double v = 0.5 * std::sin(t);
        lo = std::min(lo, u - a * v);
        hi = std::max(hi, u - a * v);
      }
      found.push_back(lo);
      found.push_back(hi);
    }
    std::sort(found.begin(), found.end());
    const auto o = critical_offsets(a, k32);
    for (int i = 0; i < 4; ++i) CHECK(o.offsets[i] == doctest::Approx(found[i]).epsilon(1e-8));
  }
}

TEST_CASE("classify examples") {
  CHECK(classify(0.0, 0.0, k32) == Domain::Separating3);
  CHECK(classify(0.0, 0.99, k32) == Domain::RightOnly2r);
  CHECK(classify(2.0, 0.0, k32) == Domain::Both4);
  CHECK(classify(0.0, 5.0, k32) == Domain::Outside1);
  CHECK(classify(0.0, -0.99, k32) == Domain::LeftOnly2l);

  CHECK(classify_hyperplane({{1, 0, 0}, {0, 0}, 0}, k32) == Domain::Separating3);
  CHECK(classify_hyperplane({{0, 0, 0}, {1, 0}, 0}, k32) == Domain::Both4);
  CHECK(classify_hyperplane({{0, 0, 0}, {1, 0}, 0.9}, k32) == Domain::Outside1);
  CHECK(classify_hyperplane({{0, 0, 0}, {1, 0}, 0.5}, k32) == Domain::NearDiscriminant);
  CHECK_THROWS_AS(classify_hyperplane({{1, 0}, {0, 0}, 0}, k32), std::invalid_argument);
}

TEST_CASE("mirror symmetries") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> ua(-4, 4);
  std::uniform_real_distribution<double> uc(-3, 3);
  for (int t = 0; t < 5000; ++t) {
    const double a = ua(gen);
    const double c = uc(gen);
    const Domain d = classify(a, c, k32);
    CHECK(classify(-a, c, k32) == d);
    CHECK(classify(a, -c, k32) == mirror_c(d));
  }
}

TEST_CASE("discriminant curves are refused") {
  for (double a : {0.0, 0.4, 1.0, 1.9, 3.0}) {
    const auto o = critical_offsets(a, k32);
    for (double c : o.offsets) {
      CHECK(classify(a, c, k32) == Domain::NearDiscriminant);
      CHECK(classify(a, c + 5e-10, k32) == Domain::NearDiscriminant);
      CHECK(classify(a, c + 1e-6, k32) != Domain::NearDiscriminant);
    }
  }
}

TEST_CASE("sweep order across the critical offsets") {
  auto sweep = [](double a) {
    std::vector<Domain> seen;
    for (double c = -4.0; c <= 4.0; c += 1e-3) {
      const Domain d = classify(a, c, k32);
      if (d == Domain::NearDiscriminant) continue;
      if (seen.empty() || seen.back() != d) seen.push_back(d);
    }
    return seen;
  };
  const std::vector<Domain> small{Domain::Outside1, Domain::LeftOnly2l, Domain::Separating3,
                                  Domain::RightOnly2r, Domain::Outside1};
  const std::vector<Domain> large{Domain::Outside1, Domain::LeftOnly2l, Domain::Both4,
                                  Domain::RightOnly2r, Domain::Outside1};
  for (double a : {0.0, 0.5, 1.0, 1.6}) CHECK(sweep(a) == small);
  for (double a : {1.8, 2.5, 4.0}) CHECK(sweep(a) == large);
}

TEST_CASE("transitions sit at the critical offsets") {
  for (double a : {0.0, 0.7, 2.3}) {
    const auto o = critical_offsets(a, k32);
    for (double c : o.offsets) {
      // bisection on the tolerance-free classifier
      double lo = c - 0.01;
      double hi = c + 0.01;
      const Domain left = classify(a, lo, k32, 0.0);
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (classify(a, mid, k32, 0.0) == left ? lo : hi) = mid;
      }
      CHECK(std::abs(0.5 * (lo + hi) - c) <= 1e-9);
    }
  }
}

TEST_CASE("domains 3 and 4 never share a slope") {
  const double amin = domain4_min_slope(k32);
  CHECK(amin == doctest::Approx(std::sqrt(3.0)));
  for (double a = 0.0; a < 5.0; a += 0.01) {
    const bool has3 = !domain_c_interval(Domain::Separating3, a, k32).empty();
    const bool has4 = !domain_c_interval(Domain::Both4, a, k32).empty();
    CHECK_FALSE((has3 && has4));
    if (std::abs(a - amin) > 1e-9) CHECK(has3 != has4);
  }
}

TEST_CASE("domain intervals classify consistently") {
  for (double eps : {0.2, 0.5, 0.9}) {
    const auto spec = BodySpec::make(3, 2, eps);
    for (double a : {0.0, 0.3, 1.2, 2.5, 6.0}) {
      for (Domain d : {Domain::LeftOnly2l, Domain::RightOnly2r, Domain::Separating3, Domain::Both4}) {
        const auto iv = domain_c_interval(d, a, spec);
        if (iv.empty()) continue;
        for (double t : {0.01, 0.3, 0.5, 0.99}) CHECK(classify(a, iv.lo + t * (iv.hi - iv.lo), spec) == d);
      }
    }
  }
  CHECK_THROWS_AS(domain_c_interval(Domain::Outside1, 0.0, k32), std::invalid_argument);
}

TEST_CASE("tags round-trip") {
  for (Domain d : {Domain::Outside1, Domain::LeftOnly2l, Domain::RightOnly2r, Domain::Separating3,
                   Domain::Both4, Domain::NearDiscriminant})
    CHECK(parse_domain_tag(domain_tag(d)) == d);
  CHECK(domain_tag(Domain::LeftOnly2l) == "2l");
  CHECK_THROWS(parse_domain_tag("5"));
  for (Label l : kAllLabels) CHECK(parse_label(to_string(l)) == l);
}
