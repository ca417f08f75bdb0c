#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "tubevol/body.hpp"

using namespace tubevol;

namespace {

const BodySpec k32 = BodySpec::make(3, 2, 0.5);

std::vector<double> point5(double x1, double x2 = 0, double x3 = 0, double y1 = 0, double y2 = 0) {
  return {x1, x2, x3, y1, y2};
}

double c0_32(double eps) {
  return 16.0 * std::numbers::pi * std::numbers::pi / 15.0 * eps * eps * eps * (5.0 + eps * eps);
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_NOTHROW(BodySpec::make(3, 2, 0.5));
  CHECK_NOTHROW(BodySpec::make(7, 4, 0.99));
  CHECK_THROWS_AS(BodySpec::make(4, 2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(BodySpec::make(1, 2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(BodySpec::make(3, 3, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(BodySpec::make(3, 0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(BodySpec::make(3, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BodySpec::make(3, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(BodySpec::make(3, 2, std::nan("")), std::invalid_argument);
}

TEST_CASE("implicit function examples") {
  CHECK(implicit_value(k32, point5(1.0)) == doctest::Approx(-0.9375).epsilon(1e-15));
  CHECK(std::abs(implicit_value(k32, point5(1.5))) < 1e-14);
  CHECK(implicit_value(k32, point5(0.0)) == doctest::Approx(0.75 * 0.75));
  CHECK(membership(k32, point5(1.0), 1e-12) == Membership::Inside);
  CHECK(membership(k32, point5(1.5), 1e-12) == Membership::Boundary);
  CHECK(membership(k32, point5(0.0), 1e-12) == Membership::Outside);
  // point on the y-side of the tube
  CHECK(membership(k32, point5(0, 1, 0, 0.49, 0), 1e-12) == Membership::Inside);
  CHECK(membership(k32, point5(0, 1, 0, 0.51, 0), 1e-12) == Membership::Outside);
}

TEST_CASE("membership agrees with the defining inequality") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.6, 1.6);
  for (int t = 0; t < 2000; ++t) {
    const auto p = point5(u(gen), u(gen), u(gen), u(gen) / 3, u(gen) / 3);
    const double r = std::hypot(p[0], p[1], p[2]);
    const double lhs = (r - 1) * (r - 1) + p[3] * p[3] + p[4] * p[4];
    if (std::abs(lhs - 0.25) < 1e-9) continue;
    CHECK((membership(k32, p, 0.0) == Membership::Inside) == (lhs < 0.25));
  }
}

TEST_CASE("normal form examples") {
  const auto a = reduce_to_normal_form({{1, 0, 0}, {0, 0}, 1});
  CHECK_FALSE(a.degenerate);
  CHECK(a.a == doctest::Approx(0.0));
  CHECK(a.c == doctest::Approx(1.0));

  const auto b = reduce_to_normal_form({{2, 0, 0}, {-2, 0}, 3});
  CHECK(b.a == doctest::Approx(1.0));
  CHECK(b.c == doctest::Approx(1.5));

  const auto d = reduce_to_normal_form({{0, 0, 0}, {3, 0}, 1.5});
  CHECK(d.degenerate);
  CHECK(d.c == doctest::Approx(0.5));
}

TEST_CASE("normal form is invariant under scaling and block rotations") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> g;
  for (int t = 0; t < 200; ++t) {
    Hyperplane h{{g(gen), g(gen), g(gen)}, {g(gen), g(gen)}, g(gen)};
    const auto base = reduce_to_normal_form(h);
    for (double lambda : {2.5, 1e-3, 40.0}) {
      const auto s = reduce_to_normal_form(h.scaled(lambda));
      CHECK(s.a == doctest::Approx(base.a).epsilon(1e-12));
      CHECK(s.c == doctest::Approx(base.c).epsilon(1e-12));
    }
    // rotate the y-block and permute/flip the x-block
    const double th = g(gen);
    Hyperplane r = h;
    r.gamma = {std::cos(th) * h.gamma[0] - std::sin(th) * h.gamma[1],
               std::sin(th) * h.gamma[0] + std::cos(th) * h.gamma[1]};
    r.alpha = {-h.alpha[2], h.alpha[0], h.alpha[1]};
    const auto rr = reduce_to_normal_form(r);
    CHECK(rr.a == doctest::Approx(base.a).epsilon(1e-12));
    CHECK(rr.c == doctest::Approx(base.c).epsilon(1e-12));
  }
}

TEST_CASE("negative scaling negates c") {
  Hyperplane h{{1, 2, 0}, {0.5, 0}, 0.3};
  const auto p = reduce_to_normal_form(h);
  const auto q = reduce_to_normal_form(h.scaled(-1));
  CHECK(q.a == doctest::Approx(p.a));
  CHECK(q.c == doctest::Approx(-p.c));
  CHECK_THROWS_AS(reduce_to_normal_form({{0, 0, 0}, {0, 0}, 1}), std::invalid_argument);
}

TEST_CASE("closed-form C0") {
  CHECK(total_volume(k32) == doctest::Approx(6.9087230807625515).epsilon(1e-15));
  for (double eps : {0.05, 0.2, 0.5, 0.9, 0.999})
    CHECK(total_volume(BodySpec::make(3, 2, eps)) == doctest::Approx(c0_32(eps)).epsilon(1e-14));
  CHECK(total_volume(BodySpec::make(3, 2, 0.9)) == doctest::Approx(44.589451461087975).epsilon(1e-14));
  // rounded value quoted for the default body
  CHECK(std::abs(total_volume(k32) - 6.90865) < 1e-4);
}

TEST_CASE("sphere and ball volumes") {
  const double pi = std::numbers::pi;
  CHECK(sphere_area(0) == doctest::Approx(2.0));
  CHECK(sphere_area(1) == doctest::Approx(2 * pi));
  CHECK(sphere_area(2) == doctest::Approx(4 * pi));
  CHECK(sphere_area(3) == doctest::Approx(2 * pi * pi));
  CHECK(ball_volume(3) == doctest::Approx(4 * pi / 3));
  CHECK(ball_volume(5) == doctest::Approx(8 * pi * pi / 15));
}

TEST_CASE("small-eps limit C0 / eps^{m+1} -> |S^{n-1}| * ball(m+1)") {
  for (auto [n, m] : std::vector<std::pair<int, int>>{{3, 2}, {5, 2}, {3, 4}, {7, 6}}) {
    const double lim = sphere_area(n - 1) * ball_volume(m + 1);
    const double eps = 1e-4;
    const double r = total_volume(BodySpec::make(n, m, eps)) / std::pow(eps, m + 1);
    CHECK(r == doctest::Approx(lim).epsilon(1e-6));
  }
}

TEST_CASE("C0 is increasing in eps") {
  for (auto [n, m] : std::vector<std::pair<int, int>>{{3, 2}, {5, 2}, {3, 4}}) {
    double prev = 0.0;
    for (double eps = 0.05; eps < 1.0; eps += 0.05) {
      const double v = total_volume(BodySpec::make(n, m, eps));
      CHECK(v > prev);
      prev = v;
    }
  }
}
