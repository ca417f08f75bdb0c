#include "tubevol/certify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>

#include "tubevol/monodromy.hpp"

namespace tubevol {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lerp(double lo, double hi, int i, int count, bool midpoints) {
  if (midpoints) return lo + (hi - lo) * (i + 0.5) / count;
  if (count == 1) return 0.5 * (lo + hi);
  return lo + (hi - lo) * i / (count - 1);
}

Check exact_check(std::string name, bool ok, double measured, double target, double tolerance,
                  std::string note = {}) {
  return {std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, measured, target, tolerance,
          std::move(note)};
}

Check within(std::string name, double measured, double tolerance, std::string note = {}) {
  return exact_check(std::move(name), measured <= tolerance, measured, 0.0, tolerance,
                     std::move(note));
}

Check conjecture_check(std::string name, double measured, double target, std::string note = {}) {
  return {std::move(name), measured <= target ? CheckStatus::reported : CheckStatus::above_target,
          measured, target, target, std::move(note)};
}

// Unit vector uniform on the sphere in R^dim.
std::vector<double> random_direction(CounterRng& rng, int dim) {
  std::vector<double> v(dim);
  double norm = 0.0;
  while (norm < 1e-12) {
    norm = 0.0;
    for (double& z : v) {
      z = rng.normal();
      norm += z * z;
    }
  }
  norm = std::sqrt(norm);
  for (double& z : v) z /= norm;
  return v;
}

json sweep_json(const SweepResult& sweep) {
  json entries = json::array();
  for (const auto& e : sweep.entries) {
    json row{{"degree", e.degree},
             {"degree_a", e.degree_a},
             {"degree_c", e.degree_c},
             {"ok", e.ok}};
    if (e.ok) {
      row["train_rms"] = e.train_rms;
      row["validation_rms"] = e.validation_rms;
    } else {
      row["error"] = e.error;
    }
    entries.push_back(row);
  }
  return {{"entries", entries}, {"chosen_degree", sweep.chosen_degree}};
}

// max |model| on a compact grid inside the domain the model was fitted on
double max_abs_on_domain(const BodySpec& spec, const PolynomialModel& model, Domain domain,
                         const GridSpec& fitted) {
  const GridSpec dense{50, 50, fitted.a_lo, fitted.a_hi, 0.01, 0.99, false};
  double out = 0.0;
  for (const auto& p : domain_grid(spec, domain, dense))
    out = std::max(out, std::abs(model.evaluate(p.a, p.c)));
  return out;
}

std::string tag(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", a);
  return buf;
}

struct HeldOut {
  std::size_t points = 0;
  double max = 0.0;
  double rms = 0.0;
  int discarded = 0;
  std::size_t no_candidates = 0;
};

HeldOut score_held_out(const PhiModel& phi, Domain domain, const std::vector<VolumeSample>& samples) {
  HeldOut h;
  double ss = 0.0;
  for (const auto& s : samples) {
    const Candidates cand = predict_candidates(phi, s.a, s.c, domain);
    h.discarded += cand.discarded_complex;
    const double r = min_candidate_residual(cand, s.value);
    if (cand.values.empty()) ++h.no_candidates;
    h.max = std::max(h.max, r);
    ss += r * r;
  }
  h.points = samples.size();
  if (!samples.empty()) h.rms = std::sqrt(ss / static_cast<double>(samples.size()));
  return h;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::reported: return "reported";
    case CheckStatus::above_target: return "above_target";
    case CheckStatus::unreachable: return "unreachable";
  }
  return "?";
}

std::vector<GridPoint> domain_grid(const BodySpec& spec, Domain domain, const GridSpec& grid) {
  if (grid.na < 1 || grid.nc < 1) throw std::invalid_argument("grid needs at least 1x1 points");
  std::vector<GridPoint> out;
  for (int i = 0; i < grid.na; ++i) {
    const double a = lerp(grid.a_lo, grid.a_hi, i, grid.na, grid.midpoints);
    const Interval iv = domain_c_interval(domain, a, spec);
    if (iv.empty()) continue;
    for (int j = 0; j < grid.nc; ++j) {
      const double t = lerp(grid.t_lo, grid.t_hi, j, grid.nc, grid.midpoints);
      const double c = iv.lo + t * (iv.hi - iv.lo);
      if (classify(a, c, spec) == domain) out.push_back({a, c});
    }
  }
  return out;
}

std::vector<VolumeSample> measure_geq(const BodySpec& spec, const std::vector<GridPoint>& points,
                                      double tol) {
  std::vector<VolumeSample> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back({p.a, p.c, cut_volume(spec, p.a, p.c, Side::geq, tol).value});
  return out;
}

SuiteConfig SuiteConfig::from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("config: expected a JSON object", 0, "");
  SuiteConfig cfg;
  static const std::set<std::string> known = {
      "n",       "m",        "eps",          "sections",      "tolerances", "seeds",
      "mc",      "grids",    "degrees",      "s_degrees",      "a_excess", "square_degrees",
      "threads"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw SchemaError("config: unknown key '" + key + "'", 0, key);

  try {
    cfg.spec = BodySpec::make(j.value("n", cfg.spec.n), j.value("m", cfg.spec.m),
                              j.value("eps", cfg.spec.eps));
    if (j.contains("sections")) {
      const auto& s = j.at("sections");
      // A sections object lists exactly what runs.
      cfg.sections = {s.value("oracle", false),     s.value("symmetry", false),
                      s.value("boundaries", false), s.value("fit", false),
                      s.value("cross_domain", false), s.value("monodromy", false)};
    }
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      cfg.quad_tol = t.value("quadrature", cfg.quad_tol);
      cfg.fit_quad_tol = t.value("fit_quadrature", cfg.fit_quad_tol);
      cfg.symmetry_tol = t.value("symmetry", cfg.symmetry_tol);
      cfg.sigma_k = t.value("sigma", cfg.sigma_k);
      cfg.cross_domain_rel = t.value("cross_domain_rel", cfg.cross_domain_rel);
      cfg.s_noise_floor = t.value("s_noise_floor", cfg.s_noise_floor);
      cfg.p_noise_floor = t.value("p_noise_floor", cfg.p_noise_floor);
      cfg.vieta_tol = t.value("vieta", cfg.vieta_tol);
      cfg.s_center_tol = t.value("s_center", cfg.s_center_tol);
      cfg.evenness_tol = t.value("evenness", cfg.evenness_tol);
    }
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      cfg.mc_seed = s.value("mc", cfg.mc_seed);
      cfg.plane_seed = s.value("planes", cfg.plane_seed);
      cfg.split_seed = s.value("split", cfg.split_seed);
    }
    if (j.contains("mc")) {
      const auto& s = j.at("mc");
      cfg.box_samples = s.value("box_samples", cfg.box_samples);
      cfg.tube_samples = s.value("tube_samples", cfg.tube_samples);
      cfg.battery_planes = s.value("planes", cfg.battery_planes);
      cfg.symmetry_pairs = s.value("symmetry_pairs", cfg.symmetry_pairs);
      cfg.boundary_sweep_points = s.value("boundary_sweep_points", cfg.boundary_sweep_points);
    }
    if (j.contains("grids")) {
      auto read_grid = [&](const char* key, GridSpec& g) {
        if (!j.at("grids").contains(key)) return;
        const auto& x = j.at("grids").at(key);
        g.na = x.value("na", g.na);
        g.nc = x.value("nc", g.nc);
        if (x.contains("a")) {
          g.a_lo = x.at("a").at(0).get<double>();
          g.a_hi = x.at("a").at(1).get<double>();
        }
        if (x.contains("t")) {
          g.t_lo = x.at("t").at(0).get<double>();
          g.t_hi = x.at("t").at(1).get<double>();
        }
        g.midpoints = x.value("midpoints", g.midpoints);
      };
      read_grid("s", cfg.s_grid);
      read_grid("p", cfg.p_grid);
      read_grid("held_3", cfg.held_3);
      read_grid("held_2l", cfg.held_2l);
      read_grid("held_4", cfg.held_4);
      read_grid("evenness", cfg.evenness_grid);
    }
    if (j.contains("degrees")) cfg.degrees = j.at("degrees").get<std::vector<int>>();
    if (j.contains("s_degrees")) cfg.s_degrees = j.at("s_degrees").get<std::vector<int>>();
    if (j.contains("a_excess")) cfg.a_excess = j.at("a_excess").get<std::vector<int>>();
    cfg.square_degrees = j.value("square_degrees", cfg.square_degrees);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("config: ") + e.what(), 0, "");
  }
  if (cfg.degrees.empty() || cfg.s_degrees.empty())
    throw SchemaError("config: degree lists must not be empty", 0, "degrees");
  if (cfg.a_excess.empty() && !cfg.square_degrees)
    throw SchemaError("config: a_excess must not be empty", 0, "a_excess");
  if (!(cfg.quad_tol > 0.0) || !(cfg.fit_quad_tol > 0.0))
    throw SchemaError("config: quadrature tolerances must be positive", 0, "tolerances");
  return cfg;
}

json SuiteConfig::to_json() const {
  auto grid = [](const GridSpec& g) {
    return json{{"na", g.na},
                {"nc", g.nc},
                {"a", {g.a_lo, g.a_hi}},
                {"t", {g.t_lo, g.t_hi}},
                {"midpoints", g.midpoints}};
  };
  return json{{"n", spec.n},
              {"m", spec.m},
              {"eps", spec.eps},
              {"sections",
               {{"oracle", sections.oracle},
                {"symmetry", sections.symmetry},
                {"boundaries", sections.boundaries},
                {"fit", sections.fit},
                {"cross_domain", sections.cross_domain},
                {"monodromy", sections.monodromy}}},
              {"tolerances",
               {{"quadrature", quad_tol},
                {"fit_quadrature", fit_quad_tol},
                {"symmetry", symmetry_tol},
                {"sigma", sigma_k},
                {"cross_domain_rel", cross_domain_rel},
                {"s_noise_floor", s_noise_floor},
                {"p_noise_floor", p_noise_floor},
                {"vieta", vieta_tol},
                {"s_center", s_center_tol},
                {"evenness", evenness_tol}}},
              {"seeds", {{"mc", mc_seed}, {"planes", plane_seed}, {"split", split_seed}}},
              {"mc",
               {{"box_samples", box_samples},
                {"tube_samples", tube_samples},
                {"planes", battery_planes},
                {"symmetry_pairs", symmetry_pairs},
                {"boundary_sweep_points", boundary_sweep_points}}},
              {"grids",
               {{"s", grid(s_grid)},
                {"p", grid(p_grid)},
                {"held_3", grid(held_3)},
                {"held_2l", grid(held_2l)},
                {"held_4", grid(held_4)},
                {"evenness", grid(evenness_grid)}}},
              {"degrees", degrees},
              {"s_degrees", s_degrees},
              {"a_excess", a_excess},
              {"square_degrees", square_degrees},
              {"threads", threads}};
}

std::vector<BatteryPlane> plane_battery(const BodySpec& spec, int count, std::uint64_t seed) {
  spec.validate();
  static constexpr std::array<Domain, 5> cycle = {Domain::Outside1, Domain::LeftOnly2l,
                                                  Domain::RightOnly2r, Domain::Separating3,
                                                  Domain::Both4};
  std::vector<BatteryPlane> out;
  const double a4 = domain4_min_slope(spec);
  std::uint64_t draw = 0;
  for (int k = 0; k < count; ++k) {
    const Domain want = cycle[k % cycle.size()];
    for (;;) {
      CounterRng rng(seed, draw++);
      double a = 0.0;
      if (want == Domain::Both4) {
        a = rng.uniform(a4 + 0.2, a4 + 2.5);
      } else if (want == Domain::Separating3) {
        // domain (3) needs E < 1
        a = rng.uniform(0.0, 0.95 * a4);
      } else {
        a = rng.uniform(0.0, 3.0);
      }
      double c = 0.0;
      if (want == Domain::Outside1) {
        const double E = tangency_halfwidth(a, spec);
        c = 1.0 + E + rng.uniform(0.02, 0.5);
        if (rng.uniform() < 0.5) c = -c;
      } else {
        const Interval iv = domain_c_interval(want, a, spec);
        if (iv.empty()) continue;
        c = iv.lo + rng.uniform(0.05, 0.95) * (iv.hi - iv.lo);
      }
      if (classify(a, c, spec, 1e-6) != want) continue;

      const double lambda = rng.uniform(0.5, 2.0);
      const auto u = random_direction(rng, spec.n);
      const auto v = random_direction(rng, spec.m);
      BatteryPlane bp;
      bp.plane.alpha.resize(spec.n);
      bp.plane.gamma.resize(spec.m);
      for (int i = 0; i < spec.n; ++i) bp.plane.alpha[i] = lambda * u[i];
      for (int i = 0; i < spec.m; ++i) bp.plane.gamma[i] = -lambda * a * v[i];
      bp.plane.beta = lambda * c;
      bp.nf = reduce_to_normal_form(bp.plane);
      bp.domain = classify(bp.nf, spec);
      bp.side = rng.uniform() < 0.5 ? Side::geq : Side::leq;
      out.push_back(bp);
      break;
    }
  }
  return out;
}

std::vector<PlaneComparison> compare_battery(const BodySpec& spec,
                                             const std::vector<BatteryPlane>& planes,
                                             std::uint64_t samples, std::uint64_t seed,
                                             double quad_tol, unsigned threads) {
  std::vector<PlaneComparison> out;
  MonteCarloOptions mco;
  mco.threads = threads;
  for (std::size_t k = 0; k < planes.size(); ++k) {
    PlaneComparison pc;
    pc.plane = planes[k];
    pc.quad = cut_volume_hyperplane(spec, pc.plane.plane, pc.plane.side, quad_tol);
    pc.mc = mc_cut_volume(spec, pc.plane.plane, pc.plane.side, samples, seed + k, mco);
    pc.delta = std::abs(pc.quad.value - pc.mc.volume.value);
    pc.sigma = pc.mc.volume.error_estimate;
    out.push_back(pc);
  }
  return out;
}

std::vector<GridPoint> random_generic_points(const BodySpec& spec, int count, std::uint64_t seed) {
  std::vector<GridPoint> out;
  std::uint64_t draw = 0;
  while (static_cast<int>(out.size()) < count) {
    CounterRng rng(seed, draw++);
    const double a = rng.uniform(-3.0, 3.0);
    const double E = tangency_halfwidth(a, spec);
    const double c = rng.uniform(-(1.0 + E + 0.2), 1.0 + E + 0.2);
    if (classify(a, c, spec, 1e-6) == Domain::NearDiscriminant) continue;
    out.push_back({a, c});
  }
  return out;
}

SymmetryResult symmetry_battery(const BodySpec& spec, const std::vector<GridPoint>& points,
                                double tol) {
  const double c0 = total_volume(spec);
  SymmetryResult r;
  for (const auto& p : points) {
    const double v = cut_volume(spec, p.a, p.c, Side::geq, tol).value;
    const double mirror = cut_volume(spec, -p.a, p.c, Side::geq, tol).value;
    const double refl = cut_volume(spec, p.a, -p.c, Side::geq, tol).value;
    const double leq = cut_volume(spec, p.a, p.c, Side::leq, tol).value;
    r.max_mirror = std::max(r.max_mirror, std::abs(v - mirror));
    r.max_reflection = std::max(r.max_reflection, std::abs(v + refl - c0));
    r.max_complement = std::max(r.max_complement, std::abs(v + leq - c0));
  }
  r.center_error = std::abs(cut_volume(spec, 0.0, 0.0, Side::geq, tol).value - 0.5 * c0);
  return r;
}

std::vector<double> transition_errors(const BodySpec& spec, double a) {
  const CriticalOffsets co = critical_offsets(a, spec);
  std::vector<double> out;
  for (std::size_t i = 0; i < 4; ++i) {
    const double target = co.offsets[i];
    double gap = 0.5;
    if (i > 0) gap = std::min(gap, target - co.offsets[i - 1]);
    if (i < 3) gap = std::min(gap, co.offsets[i + 1] - target);
    if (!(gap > 0.0)) {
      out.push_back(kInf);  // coincident offsets: no single transition
      continue;
    }
    double lo = target - 0.25 * gap;
    double hi = target + 0.25 * gap;
    const Domain below = classify(a, lo, spec, 0.0);
    const Domain above = classify(a, hi, spec, 0.0);
    if (below == above) {
      out.push_back(kInf);
      continue;
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (classify(a, mid, spec, 0.0) == below)
        lo = mid;
      else
        hi = mid;
    }
    out.push_back(std::abs(0.5 * (lo + hi) - target));
  }
  return out;
}

namespace {

// domain (3) needs |a| below the domain-(4) threshold
GridSpec inside_domain3(const BodySpec& spec, GridSpec g) {
  const double amax = 0.95 * domain4_min_slope(spec);
  g.a_hi = std::min(g.a_hi, amax);
  g.a_lo = std::max(g.a_lo, -amax);
  return g;
}

}  // namespace

CrossDomainResult run_cross_domain(const SuiteConfig& config) {
  const BodySpec& spec = config.spec;
  const double c0 = total_volume(spec);
  const double qt = config.fit_quad_tol;
  CrossDomainResult r;

  SweepOptions opts;
  opts.degrees = config.s_degrees;
  opts.a_excess = config.a_excess;
  opts.split_seed = config.split_seed;
  opts.square = config.square_degrees;

  // S on domain (3)
  const auto s_samples = measure_geq(spec, domain_grid(spec, Domain::Separating3, inside_domain3(spec, config.s_grid)), qt);
  r.s_samples = s_samples.size();
  opts.noise_floor = config.s_noise_floor;
  r.s_sweep = sweep_degrees(s_samples, weight_exponent(Target::S, spec), opts,
                            [&](std::span<const VolumeSample> train, int da, int dc) {
                              return fit_S(spec, train, da, dc);
                            });
  if (r.s_sweep.chosen_degree < 0) {
    r.errors.push_back("no S degree could be fitted");
    return r;
  }
  {
    const SweepEntry* e = r.s_sweep.entry(r.s_sweep.chosen_degree);
    r.s_model = fit_S(spec, s_samples, e->degree_a, e->degree_c);
  }
  r.s_center_error = std::abs(r.s_model->evaluate(0.0, 0.0) - 0.5 * c0);
  r.bound_s = max_abs_on_domain(spec, *r.s_model, Domain::Separating3, inside_domain3(spec, config.s_grid));

  // P on domain (2r)
  const auto v2r = measure_geq(spec, domain_grid(spec, Domain::RightOnly2r, config.p_grid), qt);
  const auto p_samples = derive_P_samples(spec, v2r, *r.s_model);
  r.p_samples = p_samples.size();
  const int kP = weight_exponent(Target::P, spec);
  opts.degrees = config.degrees;
  opts.noise_floor = config.p_noise_floor;
  auto fit_p = [&](std::span<const VolumeSample> train, int da, int dc) {
    return fit_P(spec, train, da, dc);
  };
  r.p_sweep = sweep_degrees(p_samples, kP, opts, fit_p);

  // held-out domain (4): only slopes where it exists
  std::vector<VolumeSample> held4;
  {
    const auto pts = domain_grid(spec, Domain::Both4, config.held_4);
    r.domain4_reachable = !pts.empty();
    held4 = measure_geq(spec, pts, qt);
  }

  PhiModel phi;
  phi.s_model = *r.s_model;
  phi.c0 = c0;
  for (const auto& e : r.p_sweep.entries) {
    DegreeResidual dr;
    dr.degree = e.degree;
    dr.degree_a = e.degree_a;
    dr.degree_c = e.degree_c;
    if (!e.ok) {
      dr.error = e.error;
      r.per_degree.push_back(dr);
      continue;
    }
    try {
      phi.p_model = fit_P(spec, p_samples, dr.degree_a, dr.degree_c);
      dr.fit_rms = phi.p_model.residual_rms;
      const HeldOut h = score_held_out(phi, Domain::Both4, held4);
      dr.max_residual = h.max;
      dr.rms_residual = h.rms;
      dr.no_candidates = h.no_candidates;
      dr.ok = true;
    } catch (const std::exception& e) {
      dr.error = e.what();
    }
    r.per_degree.push_back(dr);
  }

  if (r.p_sweep.chosen_degree < 0) {
    r.errors.push_back("no P degree could be fitted");
    return r;
  }
  {
    const SweepEntry* e = r.p_sweep.entry(r.p_sweep.chosen_degree);
    r.p_model = fit_P(spec, p_samples, e->degree_a, e->degree_c);
  }
  phi.p_model = *r.p_model;
  r.bound_p = max_abs_on_domain(spec, *r.p_model, Domain::RightOnly2r, config.p_grid);

  for (const auto& s : v2r) {
    const double S = r.s_model->evaluate(s.a, s.c);
    const double P = r.p_model->evaluate(s.a, s.c);
    r.vieta_max = std::max(r.vieta_max, std::abs(s.value * s.value - S * s.value + P));
  }

  const auto held3 = measure_geq(spec, domain_grid(spec, Domain::Separating3, inside_domain3(spec, config.held_3)), qt);
  const auto held2l = measure_geq(spec, domain_grid(spec, Domain::LeftOnly2l, config.held_2l), qt);
  const HeldOut h3 = score_held_out(phi, Domain::Separating3, held3);
  const HeldOut h2l = score_held_out(phi, Domain::LeftOnly2l, held2l);
  const HeldOut h4 = score_held_out(phi, Domain::Both4, held4);
  r.held3_points = h3.points;
  r.held2l_points = h2l.points;
  r.held4_points = h4.points;
  r.held3_max = h3.max;
  r.held2l_max = h2l.max;
  r.held4_max = h4.max;
  r.held4_rms = h4.rms;
  r.discarded_complex = h3.discarded + h2l.discarded + h4.discarded;
  return r;
}

json Report::to_json() const {
  json checks_json = json::array();
  for (const auto& c : checks) {
    json row{{"name", c.name},
             {"status", std::string(tubevol::to_string(c.status))},
             {"measured", c.measured},
             {"target", c.target},
             {"tolerance", c.tolerance}};
    if (!c.note.empty()) row["note"] = c.note;
    checks_json.push_back(row);
  }
  return json{{"spec", {{"n", spec.n}, {"m", spec.m}, {"eps", spec.eps}, {"C0", c0}}},
              {"checks", checks_json},
              {"models", models},
              {"seeds", seeds},
              {"details", details},
              {"timing", timing}};
}

bool Report::exact_claims_hold() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const Check& c) { return c.status == CheckStatus::fail; });
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

void oracle_section(const SuiteConfig& cfg, Report& rep) {
  const BodySpec& spec = cfg.spec;
  MonteCarloOptions mco;
  mco.threads = cfg.threads;

  const auto box = mc_total_volume_box(spec, cfg.box_samples, cfg.mc_seed, mco);
  rep.checks.push_back(within("oracle.C0_vs_box_mc", std::abs(box.volume.value - rep.c0),
                              cfg.sigma_k * box.volume.error_estimate,
                              "box MC " + format_double(box.volume.value)));

  const auto whole = whole_volume_quadrature(spec, cfg.quad_tol);
  rep.checks.push_back(within("oracle.C0_vs_quadrature", std::abs(whole.value - rep.c0), cfg.quad_tol));

  // the two samplers on one cut
  const NormalForm nf{0.4, 0.6, false};
  const auto tube = mc_cut_volume(spec, nf, Side::geq, cfg.tube_samples, cfg.mc_seed + 1, mco);
  const auto boxcut = mc_cut_volume_box(spec, nf, Side::geq, cfg.tube_samples, cfg.mc_seed + 2, mco);
  const double comb = std::hypot(tube.volume.error_estimate, boxcut.volume.error_estimate);
  rep.checks.push_back(within("oracle.tube_vs_box_sampler",
                              std::abs(tube.volume.value - boxcut.volume.value), cfg.sigma_k * comb));

  const auto planes = plane_battery(spec, cfg.battery_planes, cfg.plane_seed);
  const auto cmp = compare_battery(spec, planes, cfg.tube_samples, cfg.mc_seed + 100, cfg.quad_tol,
                                   cfg.threads);
  json rows = json::array();
  for (std::size_t k = 0; k < cmp.size(); ++k) {
    const auto& pc = cmp[k];
    // quadrature tolerance covers the sigma = 0 cases (empty or full cut)
    const double tol = cfg.sigma_k * pc.sigma + cfg.quad_tol;
    rep.checks.push_back(within("oracle.plane_" + std::to_string(k), pc.delta, tol,
                                "domain " + std::string(domain_tag(pc.plane.domain)) + ", side " +
                                    std::string(to_string(pc.plane.side))));
    rows.push_back({{"a", pc.plane.nf.a},
                    {"c", pc.plane.nf.c},
                    {"domain", domain_tag(pc.plane.domain)},
                    {"side", to_string(pc.plane.side)},
                    {"quadrature", pc.quad.value},
                    {"mc", pc.mc.volume.value},
                    {"stderr", pc.sigma}});
  }
  rep.details["plane_battery"] = rows;
}

void symmetry_section(const SuiteConfig& cfg, Report& rep) {
  const BodySpec& spec = cfg.spec;
  const auto pts = random_generic_points(spec, cfg.symmetry_pairs, cfg.plane_seed + 1);
  const SymmetryResult s = symmetry_battery(spec, pts, cfg.quad_tol);
  rep.checks.push_back(within("symmetry.mirror_a", s.max_mirror, cfg.symmetry_tol));
  rep.checks.push_back(within("symmetry.reflection_c", s.max_reflection, cfg.symmetry_tol));
  rep.checks.push_back(within("symmetry.center", s.center_error, cfg.symmetry_tol));
  rep.checks.push_back(within("complementarity.random", s.max_complement, 2.0 * cfg.quad_tol));

  // leaf and complement sum to C0 in every domain
  const double a4 = domain4_min_slope(spec);
  struct Rep {
    Domain d;
    double a;
  };
  const Rep reps[] = {{Domain::LeftOnly2l, 0.5}, {Domain::RightOnly2r, 0.5},
                      {Domain::Separating3, 0.5 * a4}, {Domain::Both4, a4 + 0.5}};
  for (const auto& r : reps) {
    const Interval iv = domain_c_interval(r.d, r.a, spec);
    const double c = 0.5 * (iv.lo + iv.hi);
    const double g = cut_volume(spec, r.a, c, Side::geq, cfg.quad_tol).value;
    const double l = cut_volume(spec, r.a, c, Side::leq, cfg.quad_tol).value;
    rep.checks.push_back(within("complementarity.domain_" + std::string(domain_tag(r.d)),
                                std::abs(g + l - rep.c0), 2.0 * cfg.quad_tol));
  }
  {
    const double E = tangency_halfwidth(0.5, spec);
    const double c = 1.0 + E + 0.3;
    const double g = cut_volume(spec, 0.5, c, Side::geq, cfg.quad_tol).value;
    const double l = cut_volume(spec, 0.5, c, Side::leq, cfg.quad_tol).value;
    rep.checks.push_back(
        within("complementarity.domain_1", std::abs(g + l - rep.c0), 2.0 * cfg.quad_tol));
  }
}

void boundary_section(const SuiteConfig& cfg, Report& rep) {
  const BodySpec& spec = cfg.spec;
  for (double a : {0.0, 0.7}) {
    const auto errs = transition_errors(spec, a);
    const double worst = *std::max_element(errs.begin(), errs.end());
    rep.checks.push_back(within("boundaries.transitions_a" + tag(a), worst, 1e-9));

    const CriticalOffsets co = critical_offsets(a, spec);
    const double c_out = co.offsets[3] + 1e-6;
    const double v_out = cut_volume(spec, a, c_out, Side::geq, cfg.quad_tol).value;
    rep.checks.push_back(exact_check("boundaries.empty_beyond_a" + tag(a), v_out == 0.0,
                                     v_out, 0.0, 0.0));

    // sweep across all four offsets
    const int npts = std::max(2, cfg.boundary_sweep_points);
    const double lo = co.offsets[0] - 0.1;
    const double hi = co.offsets[3] + 0.1;
    std::vector<double> values;
    double max_step = 0.0;
    for (int i = 0; i < npts; ++i) {
      double c = lo + (hi - lo) * i / (npts - 1);
      if (classify(a, c, spec) == Domain::NearDiscriminant) c += 1e-7;
      values.push_back(cut_volume(spec, a, c, Side::geq, cfg.quad_tol).value);
    }
    double worst_rise = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) {
      worst_rise = std::max(worst_rise, values[i] - values[i - 1]);
      max_step = std::max(max_step, std::abs(values[i] - values[i - 1]));
    }
    rep.checks.push_back(
        within("boundaries.monotone_a" + tag(a), worst_rise, 2.0 * cfg.quad_tol));

    // no jump across a critical offset
    const double delta = 1e-6;
    const double slope_bound = rep.c0;  // |dV/dc| is a section volume, far below C0
    double worst_jump = 0.0;
    for (double cs : co.offsets) {
      const double below = cut_volume(spec, a, cs - delta, Side::geq, cfg.quad_tol).value;
      const double above = cut_volume(spec, a, cs + delta, Side::geq, cfg.quad_tol).value;
      worst_jump = std::max(worst_jump, std::abs(above - below));
    }
    rep.checks.push_back(within("boundaries.continuity_a" + tag(a), worst_jump,
                                2.0 * delta * slope_bound + 2.0 * cfg.quad_tol));
  }
}

void fit_section(const SuiteConfig& cfg, const CrossDomainResult& cd, Report& rep) {
  const BodySpec& spec = cfg.spec;
  if (!cd.s_model) {
    rep.checks.push_back(exact_check("fit.S", false, kInf, 0.0, 0.0, "no S model"));
    return;
  }
  rep.checks.push_back(within("fit.S_center", cd.s_center_error, cfg.s_center_tol));
  rep.checks.push_back(conjecture_check("fit.S_residual", cd.s_model->residual_rms,
                                        cfg.cross_domain_rel * rep.c0));
  rep.checks.push_back(
      exact_check("fit.S_bounded", cd.bound_s <= 10.0 * rep.c0, cd.bound_s, 0.0, 10.0 * rep.c0));

  // evenness: unrestricted basis on samples with both signs of a
  const auto pts = domain_grid(spec, Domain::Separating3, inside_domain3(spec, cfg.evenness_grid));
  const auto samples = measure_geq(spec, pts, cfg.fit_quad_tol);
  FitOptions unrestricted;
  unrestricted.even_in_a = false;
  try {
    const auto m = fit_weighted_polynomial(spec, samples, Target::S, cd.s_model->degree_a,
                                           cd.s_model->degree_c, unrestricted);
    rep.checks.push_back(within("fit.S_evenness", m.odd_coefficient_ratio(), cfg.evenness_tol));
  } catch (const std::exception& e) {
    rep.checks.push_back(exact_check("fit.S_evenness", false, kInf, 0.0, cfg.evenness_tol, e.what()));
  }

  if (!cd.p_model) {
    rep.checks.push_back(exact_check("fit.P", false, kInf, 0.0, 0.0, "no P model"));
    return;
  }
  rep.checks.push_back(conjecture_check("fit.P_residual", cd.p_model->residual_rms,
                                        cfg.cross_domain_rel * rep.c0 * rep.c0));
  rep.checks.push_back(exact_check("fit.P_bounded", cd.bound_p <= 10.0 * rep.c0 * rep.c0,
                                   cd.bound_p, 0.0, 10.0 * rep.c0 * rep.c0));
  rep.checks.push_back(conjecture_check("fit.vieta_2r", cd.vieta_max, cfg.vieta_tol));
}

void cross_domain_section(const SuiteConfig& cfg, const CrossDomainResult& cd, Report& rep) {
  const double target = cfg.cross_domain_rel * rep.c0;
  if (!cd.s_model || !cd.p_model) {
    for (const auto& e : cd.errors)
      rep.checks.push_back(exact_check("cross_domain.pipeline", false, kInf, 0.0, 0.0, e));
    return;
  }
  rep.checks.push_back(conjecture_check("cross_domain.domain_3", cd.held3_max, target,
                                        std::to_string(cd.held3_points) + " points"));
  rep.checks.push_back(conjecture_check("cross_domain.domain_2l", cd.held2l_max, target,
                                        std::to_string(cd.held2l_points) + " points"));
  if (!cd.domain4_reachable) {
    rep.checks.push_back({"cross_domain.domain_4", CheckStatus::unreachable, kInf, target, target,
                          "domain 4 unreachable: requires a > " +
                              format_double(domain4_min_slope(cfg.spec))});
    return;
  }
  rep.checks.push_back(conjecture_check("cross_domain.domain_4", cd.held4_max, target,
                                        std::to_string(cd.held4_points) + " points, P degree " +
                                            std::to_string(cd.p_sweep.chosen_degree)));
  std::vector<double> maxima;
  for (const auto& d : cd.per_degree)
    if (d.ok) maxima.push_back(d.max_residual);
  double worst_rise = 0.0;
  std::string where;
  for (std::size_t i = 1; i < maxima.size(); ++i) {
    const double rise = maxima[i] - maxima[i - 1];
    if (std::isfinite(rise) && rise > worst_rise) {
      worst_rise = rise;
      where = "largest rise between degrees " + std::to_string(cd.per_degree[i - 1].degree) +
              " and " + std::to_string(cd.per_degree[i].degree);
    }
  }
  rep.checks.push_back(conjecture_check("cross_domain.domain_4_monotone", worst_rise, target,
                                        where.empty() ? "never rises" : where));
}

void monodromy_section(const SuiteConfig& cfg, Report& rep) {
  const Perm4 g1 = generator_g1();
  const Perm4 g2 = generator_g2();
  auto flag = [&](const std::string& name, bool ok, std::string note = {}) {
    rep.checks.push_back(exact_check(name, ok, ok ? 1.0 : 0.0, 1.0, 0.0, std::move(note)));
  };

  const auto group = group_closure();
  flag("monodromy.group_order_4", group.size() == 4, std::to_string(group.size()) + " elements");
  bool inv = true;
  bool comm = true;
  for (const auto& g : group) {
    inv = inv && g.is_involution();
    for (const auto& h : group) comm = comm && (g * h == h * g);
  }
  flag("monodromy.involutions", inv);
  flag("monodromy.commuting", comm);

  const auto o1 = orbit({g1}, Label::Lminus);
  const auto o2 = orbit({g1}, Label::Rminus);
  flag("monodromy.g1_orbits",
       o1 == std::vector<Label>{Label::Lminus, Label::Lplus} &&
           o2 == std::vector<Label>{Label::Rminus, Label::Rplus});
  bool full = true;
  for (Label l : kAllLabels) full = full && orbit({g1, g2}, l).size() == 4;
  flag("monodromy.full_orbits_size_4", full);

  // homomorphism over seeded random loops
  bool hom = true;
  bool parity = true;
  for (std::uint64_t k = 0; k < 200; ++k) {
    CounterRng rng(cfg.plane_seed + 2, k);
    auto draw = [&] { return static_cast<long long>(rng() % 41) - 20; };
    const LoopSpec x{draw(), draw()};
    const LoopSpec y{draw(), draw()};
    const LoopSpec sum{x.lk3 + y.lk3, x.lk4 + y.lk4};
    hom = hom && loop_to_perm(sum) == loop_to_perm(x) * loop_to_perm(y);
    const LoopSpec shifted{x.lk3 + 2 * draw(), x.lk4 + 2 * draw()};
    parity = parity && loop_to_perm(shifted) == loop_to_perm(x);
  }
  flag("monodromy.homomorphism", hom);
  flag("monodromy.parity_only", parity);

  flag("monodromy.generator_strings",
       g1.to_string() == "(L-L+)(R-R+)" && g2.to_string() == "(L-R+)(L+R-)");
  flag("monodromy.transport_R+", transport_leaf({Label::Rplus}, {1, 0}) == LeafSet{Label::Rminus});
  flag("monodromy.transport_domain4_leaf",
       transport_leaf({Label::Lminus, Label::Rminus}, {1, 0}) == LeafSet{Label::Lplus, Label::Rplus});
  flag("monodromy.g1_fixes_left_pair",
       apply(g1, {Label::Lminus, Label::Lplus}) == LeafSet{Label::Lminus, Label::Lplus});

  // domains (3) and (4) connect to their complements, (2) singletons do not
  const LeafSet d3{Label::Lminus, Label::Lplus};
  const LeafSet d4{Label::Lminus, Label::Rminus};
  flag("monodromy.domain3_connects", leaves_connected(d3, d3.complement()));
  flag("monodromy.domain4_connects", leaves_connected(d4, d4.complement()));
  const LeafSet d2r{Label::Rplus};
  const LeafSet d2l{Label::Lminus};
  flag("monodromy.domain2r_isolated", !leaves_connected(d2r, d2r.complement()));
  flag("monodromy.domain2l_isolated", !leaves_connected(d2l, d2l.complement()));
  bool self = true;
  for (std::uint8_t mask = 0; mask < 16; ++mask)
    self = self && leaves_connected(LeafSet::from_mask(mask), LeafSet::from_mask(mask));
  flag("monodromy.self_connected", self);
}

template <class Fn>
void run_section(const std::string& name, Report& rep, Fn&& fn) {
  const auto t0 = Clock::now();
  try {
    fn();
  } catch (const std::exception& e) {
    rep.checks.push_back(exact_check(name + ".error", false, kInf, 0.0, 0.0, e.what()));
  }
  rep.timing[name] = seconds_since(t0);
}

}  // namespace

Report run_suite(const SuiteConfig& config) {
  config.spec.validate();
  Report rep;
  rep.spec = config.spec;
  rep.c0 = total_volume(config.spec);
  const auto& s = config.sections;
  const auto t0 = Clock::now();

  if (s.oracle || s.symmetry || s.boundaries || s.fit || s.cross_domain)
    rep.seeds = {{"mc", config.mc_seed}, {"planes", config.plane_seed}, {"split", config.split_seed}};
  else if (s.monodromy)
    rep.seeds = {{"planes", config.plane_seed}};

  if (s.oracle) run_section("oracle", rep, [&] { oracle_section(config, rep); });
  if (s.symmetry) run_section("symmetry", rep, [&] { symmetry_section(config, rep); });
  if (s.boundaries) run_section("boundaries", rep, [&] { boundary_section(config, rep); });

  if (s.fit || s.cross_domain) {
    CrossDomainResult cd;
    bool have = false;
    run_section("fit", rep, [&] {
      cd = run_cross_domain(config);
      have = true;
      if (s.fit) fit_section(config, cd, rep);
    });
    if (have) {
      if (cd.s_model) rep.models["S"] = model_to_json(*cd.s_model);
      if (cd.p_model) rep.models["P"] = model_to_json(*cd.p_model);
      rep.details["sweep_S"] = sweep_json(cd.s_sweep);
      rep.details["sweep_P"] = sweep_json(cd.p_sweep);
      rep.details["samples"] = {{"S", cd.s_samples}, {"P", cd.p_samples}};
      if (s.cross_domain) {
        run_section("cross_domain", rep, [&] { cross_domain_section(config, cd, rep); });
        json rows = json::array();
        for (const auto& d : cd.per_degree) {
          json row{{"degree", d.degree}, {"degree_a", d.degree_a}, {"degree_c", d.degree_c},
                   {"ok", d.ok}};
          if (d.ok) {
            row["fit_rms"] = d.fit_rms;
            row["max_residual"] = d.max_residual;
            row["rms_residual"] = d.rms_residual;
            row["points_without_real_candidates"] = d.no_candidates;
          } else {
            row["error"] = d.error;
          }
          rows.push_back(row);
        }
        rep.details["domain_4_by_degree"] = rows;
        rep.details["discarded_complex"] = cd.discarded_complex;
      }
    }
  }

  if (s.monodromy) run_section("monodromy", rep, [&] { monodromy_section(config, rep); });
  rep.timing["total"] = seconds_since(t0);
  return rep;
}

void write_report(const Report& report, const std::filesystem::path& path) {
  write_json(path, report.to_json());
}

}  // namespace tubevol
