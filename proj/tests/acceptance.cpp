// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if a gating
// criterion fails. Criterion 6 tests an open conjecture and never gates.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tubevol/algebra.hpp"
#include "tubevol/certify.hpp"
#include "tubevol/monodromy.hpp"
#include "tubevol/oracle.hpp"
#include "tubevol/quadrature.hpp"

using namespace tubevol;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
};

bool g_gating_failure = false;

void criterion(int id, bool gating, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("criterion %d: %s  %s%s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", o.summary.c_str(),
              gating ? "" : " (non-gating)", secs);
  std::fflush(stdout);
  if (!o.pass && gating) g_gating_failure = true;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void detail(const std::string& s) {
  std::printf("    %s\n", s.c_str());
  std::fflush(stdout);
}

// closed form vs box sampler
Outcome box_check(const std::vector<double>& eps_list, int n, int m, std::uint64_t samples,
                  std::uint64_t seed) {
  bool ok = true;
  std::string summary;
  for (double eps : eps_list) {
    const auto spec = BodySpec::make(n, m, eps);
    const double c0 = total_volume(spec);
    const auto r = mc_total_volume_box(spec, samples, seed);
    const double z = std::abs(r.volume.value - c0) / r.volume.error_estimate;
    ok = ok && z <= 4.0;
    detail(fmt("n=%g m=%g eps=%g: C0=%.10g", n, m, eps, c0) +
           fmt(" box=%.10g sigma=%.3g |z|=%.2f", r.volume.value, r.volume.error_estimate, z));
    summary += fmt("eps=%g |z|=%.2f; ", eps, z);
  }
  return {ok, summary + fmt("%.0e box samples each, 4 sigma", static_cast<double>(samples))};
}

// quadrature vs tube sampler on the plane battery
Outcome battery_check(const BodySpec& spec, std::uint64_t samples) {
  const double tol = kDefaultQuadratureTol;
  const auto planes = plane_battery(spec, 20, 777);
  const auto cmp = compare_battery(spec, planes, samples, 20240607, tol, 0);
  int bad = 0;
  double worst = 0.0;
  for (const auto& c : cmp) {
    const double bound = 4.0 * c.sigma + tol;
    worst = std::max(worst, c.sigma > 0 ? c.delta / c.sigma : (c.delta > tol ? INFINITY : 0.0));
    if (c.delta > bound) ++bad;
  }
  std::vector<int> per_domain(5, 0);
  for (const auto& c : cmp) ++per_domain[static_cast<int>(c.plane.domain)];
  detail(fmt("domains 1/2l/2r/3/4: %g/%g/%g/%g", per_domain[0], per_domain[1], per_domain[2],
             per_domain[3]) +
         fmt("/%g", per_domain[4]));
  return {bad == 0, fmt("%g planes, %g outside 4 sigma, worst |delta|/sigma=%.2f",
                        static_cast<double>(cmp.size()), bad, worst)};
}

Outcome symmetry_check(const BodySpec& spec) {
  const auto pts = random_generic_points(spec, 10, 4242);
  const auto s = symmetry_battery(spec, pts, 1e-9);
  const double lim = 2e-8;
  const bool ok = s.max_mirror <= lim && s.max_reflection <= lim && s.center_error <= lim &&
                  s.max_complement <= lim;
  return {ok, fmt("mirror %.2e, reflection %.2e, center %.2e, complement %.2e (limit 2e-8)",
                  s.max_mirror, s.max_reflection, s.center_error, s.max_complement)};
}

PolynomialModel planted_model(const BodySpec& spec, Target t, int da, int dc, bool even,
                              unsigned seed) {
  PolynomialModel m;
  m.spec = spec;
  m.target = t;
  m.k = weight_exponent(t, spec);
  m.degree_a = da;
  m.degree_c = dc;
  m.basis = make_basis(da, dc, even);
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t i = 0; i < m.basis.size(); ++i) m.coeffs.push_back(u(gen));
  return m;
}

double planted_error(const BodySpec& spec, Target t, int da, int dc, bool even, double a_lo,
                     double a_hi, double c_lo, double c_hi, unsigned seed) {
  const auto truth = planted_model(spec, t, da, dc, even, seed);
  std::vector<VolumeSample> samples;
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) {
      const double a = a_lo + (a_hi - a_lo) * i / 29.0;
      const double c = c_lo + (c_hi - c_lo) * j / 29.0;
      samples.push_back({a, c, truth.evaluate(a, c)});
    }
  FitOptions opt;
  opt.even_in_a = even;
  const auto fit = fit_weighted_polynomial(spec, samples, t, da, dc, opt);
  double e = 0.0;
  for (std::size_t i = 0; i < fit.coeffs.size(); ++i)
    e = std::max(e, std::abs(fit.coeffs[i] - truth.coeffs[i]));
  return e;
}

}  // namespace

int main() {
  const BodySpec k32 = BodySpec::make(3, 2, 0.5);
  const double c0 = total_volume(k32);

  criterion(1, true, [] { return box_check({0.5, 0.2, 0.9}, 3, 2, 100'000'000, 20240607); });

  criterion(2, true, [&] { return battery_check(k32, 10'000'000); });

  criterion(3, true, [&] { return symmetry_check(k32); });

  criterion(4, true, [&] {
    const double tol = 1e-10;
    const double beyond = cut_volume(k32, 0.0, 1.5 + 1e-6, Side::geq, tol).value;
    const auto co = critical_offsets(0.0, k32);
    const std::array<double, 4> expect{-1.5, -0.5, 0.5, 1.5};
    double offset_err = 0.0;
    for (int i = 0; i < 4; ++i) offset_err = std::max(offset_err, std::abs(co.offsets[i] - expect[i]));
    const auto terr = transition_errors(k32, 0.0);
    const double worst_t = offset_err + *std::max_element(terr.begin(), terr.end());
    // 50 points from below -1.5 to above 1.5, off the offsets
    double prev = INFINITY;
    double worst_rise = 0.0;
    int points = 0;
    for (int i = 0; i < 50; ++i) {
      const double c = -1.7 + 3.4 * (i + 0.5) / 50.0;
      if (classify(0.0, c, k32) == Domain::NearDiscriminant) continue;
      const double v = cut_volume(k32, 0.0, c, Side::geq, tol).value;
      if (std::isfinite(prev)) worst_rise = std::max(worst_rise, v - prev);
      prev = v;
      ++points;
    }
    const bool ok = beyond == 0.0 && worst_rise <= 2 * tol && worst_t <= 1e-9 && points == 50;
    return Outcome{ok, fmt("V(0,1.5+1e-6)=%g, sweep of %g points worst rise %.2e, transitions off by %.2e",
                           beyond, points, worst_rise, worst_t)};
  });

  // The pipeline fit is shared by criteria 5 and 6.
  SuiteConfig cfg;
  cfg.spec = k32;
  std::optional<CrossDomainResult> cd;

  criterion(5, true, [&] {
    struct Case {
      const char* name;
      Target t;
      int da;
      int dc;
      bool even;
      double a_lo, a_hi, c_lo, c_hi;
      bool gating;
    };
    // The last case is bounded by the monomial basis itself (condition ~1e7
    // on that window), not by the solver; it is shown, not gated.
    const std::vector<Case> cases{
        {"S (6,6) on a in [0,1.5]", Target::S, 6, 6, true, 0, 1.5, -0.5, 0.5, true},
        {"P (6,4) on a in [0,4]", Target::P, 6, 4, true, 0, 4, 0.5, 2.5, true},
        {"S unrestricted (5,4) on a in [-1.5,1.5]", Target::S, 5, 4, false, -1.5, 1.5, -0.5, 0.5, true},
        {"P (10,6) on a in [0,4]", Target::P, 10, 6, true, 0, 4, 0.5, 2.5, false},
    };
    double e = 0.0;
    unsigned seed = 1;
    for (const auto& c : cases) {
      const double err = planted_error(k32, c.t, c.da, c.dc, c.even, c.a_lo, c.a_hi, c.c_lo, c.c_hi, seed++);
      detail(std::string(c.name) + fmt(": max coefficient error %.2e", err) + (c.gating ? "" : " (informational)"));
      if (c.gating) e = std::max(e, err);
    }
    cd = run_cross_domain(cfg);
    if (!cd->s_model) return Outcome{false, "no S model"};
    const double s00 = cd->s_model->evaluate(0.0, 0.0);
    const double center = std::abs(s00 - c0 / 2);
    return Outcome{e <= 1e-10 && center <= 1e-6,
                   fmt("planted coefficient error %.2e (limit 1e-10); S(0,0)=%.12g, |S(0,0)-C0/2|=%.2e (limit 1e-6)",
                       e, s00, center)};
  });

  criterion(6, false, [&] {
    if (!cd) cd = run_cross_domain(cfg);
    const double target = 1e-3 * c0;
    for (const auto& d : cd->per_degree) {
      std::string s = fmt("P c-degree %g (a-degree %g): fit rms %.2e", d.degree, d.degree_a, d.fit_rms);
      if (!d.ok)
        s += "  fit failed: " + d.error;
      else if (d.no_candidates > 0)
        s += fmt("  max residual inf (%g points without real candidates)", static_cast<double>(d.no_candidates));
      else
        s += fmt("  max residual %.3e  rms %.3e", d.max_residual, d.rms_residual);
      detail(s);
    }
    // plateau: the degree chosen on the validation split
    const int chosen = cd->p_sweep.chosen_degree;
    double at_plateau = INFINITY;
    for (const auto& d : cd->per_degree)
      if (d.degree == chosen && d.ok && d.no_candidates == 0) at_plateau = d.max_residual;
    double worst_rise = 0.0;
    int rise_from = -1;
    for (std::size_t i = 1; i < cd->per_degree.size(); ++i) {
      const double a = cd->per_degree[i - 1].max_residual;
      const double b = cd->per_degree[i].max_residual;
      const bool prev_finite = cd->per_degree[i - 1].ok && cd->per_degree[i - 1].no_candidates == 0;
      const bool cur_finite = cd->per_degree[i].ok && cd->per_degree[i].no_candidates == 0;
      if (!prev_finite || !cur_finite) continue;
      // rises at or below the target count as noise
      if (b - a > worst_rise && b > target) {
        worst_rise = b - a;
        rise_from = cd->per_degree[i - 1].degree;
      }
    }
    const bool plateau_ok = at_plateau <= target;
    const bool monotone = worst_rise == 0.0;
    std::string s = fmt("%g held-out domain-4 points; at plateau degree %g max residual %.3e (target %.3e); ",
                        static_cast<double>(cd->held4_points), chosen, at_plateau, target);
    s += monotone ? "decreasing through the sweep"
                  : fmt("not monotone: rises by %.3f from degree %g to %g", worst_rise, rise_from, rise_from + 1);
    s += fmt("; held-out domain 3 %.1e, domain 2l %.1e", cd->held3_max, cd->held2l_max);
    return Outcome{plateau_ok && monotone, s};
  });

  criterion(7, true, [] {
    bool ok = true;
    const auto g = group_closure();
    ok = ok && g.size() == 4;
    for (const auto& x : g) {
      ok = ok && x.is_involution();
      for (const auto& y : g) ok = ok && x * y == y * x;
    }
    const auto o1 = orbit({generator_g1()}, Label::Lminus);
    const auto o2 = orbit({generator_g1()}, Label::Rplus);
    auto same = [](std::vector<Label> v, std::vector<Label> w) {
      std::sort(v.begin(), v.end());
      std::sort(w.begin(), w.end());
      return v == w;
    };
    ok = ok && same(o1, {Label::Lminus, Label::Lplus}) && same(o2, {Label::Rminus, Label::Rplus});
    for (Label l : kAllLabels) ok = ok && orbit(g, l).size() == 4;
    const LeafSet d3{Label::Lminus, Label::Lplus};
    const LeafSet d4{Label::Lminus, Label::Rminus};
    const LeafSet d2l{Label::Lminus};
    const LeafSet d2r{Label::Rplus};
    const bool leaves = leaves_connected(d3, d3.complement()) && leaves_connected(d4, d4.complement()) &&
                        !leaves_connected(d2l, d2l.complement()) &&
                        !leaves_connected(d2r, d2r.complement());
    ok = ok && leaves;
    return Outcome{ok, "image of order 4, commuting involutions; <g1>-orbits {L-,L+},{R-,R+}; "
                       "full orbits of size 4; domain 3/4 leaves reach complements, domain 2 singletons do not"};
  });

  criterion(8, true, [] {
    bool ok = true;
    std::string summary;
    for (auto [n, m] : std::vector<std::pair<int, int>>{{5, 2}, {3, 4}}) {
      const auto spec = BodySpec::make(n, m, 0.5);
      const auto a = box_check({0.5}, n, m, 10'000'000, 20240607);
      const auto b = battery_check(spec, 10'000'000);
      const auto c = symmetry_check(spec);
      detail(fmt("n=%g m=%g: ", n, m) + (a.pass ? "C0 ok" : "C0 FAIL") + ", " +
             (b.pass ? "battery ok" : "battery FAIL") + " (" + b.summary + "), " +
             (c.pass ? "symmetries ok" : "symmetries FAIL") + " (" + c.summary + ")");
      ok = ok && a.pass && b.pass && c.pass;
      summary += fmt("(%g,%g) ", n, m) + (a.pass && b.pass && c.pass ? "ok; " : "failed; ");
    }
    return Outcome{ok, summary + "criteria 1-3 at 1e7 samples, 4 sigma"};
  });

  std::printf("acceptance: %s\n", g_gating_failure ? "FAIL" : "PASS");
  return g_gating_failure ? 1 : 0;
}
