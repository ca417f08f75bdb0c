// tubevol: command-line front end. One JSON object per output line.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tubevol/algebra.hpp"
#include "tubevol/body.hpp"
#include "tubevol/certify.hpp"
#include "tubevol/classify.hpp"
#include "tubevol/io.hpp"
#include "tubevol/monodromy.hpp"
#include "tubevol/oracle.hpp"
#include "tubevol/quadrature.hpp"

using namespace tubevol;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool g_pretty = false;

void emit(const json& j) {
  if (!g_pretty) {
    std::cout << j.dump() << '\n';
    return;
  }
  std::size_t width = 0;
  for (const auto& [k, _] : j.items()) width = std::max(width, k.size());
  for (const auto& [k, v] : j.items()) {
    std::cout << k << std::string(width - k.size() + 2, ' ')
              << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
  std::cout << '\n';
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + ": malformed number '" + s + "'");
  }
}

std::pair<double, double> parse_range(const std::string& s, const std::string& what) {
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw UsageError(what + ": expected lo:hi, got '" + s + "'");
  const double lo = to_number(parts[0], what);
  const double hi = to_number(parts[1], what);
  if (!(lo <= hi)) throw UsageError(what + ": lo must not exceed hi");
  return {lo, hi};
}

std::pair<int, int> parse_grid(const std::string& s) {
  const auto parts = split(s, 'x');
  if (parts.size() != 2) throw UsageError("--grid: expected NxM, got '" + s + "'");
  int n = 0;
  int m = 0;
  try {
    std::size_t u1 = 0;
    std::size_t u2 = 0;
    n = std::stoi(parts[0], &u1);
    m = std::stoi(parts[1], &u2);
    if (u1 != parts[0].size() || u2 != parts[1].size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw UsageError("--grid: expected NxM, got '" + s + "'");
  }
  if (n < 1 || m < 1) throw UsageError("--grid: counts must be positive");
  return {n, m};
}

Hyperplane parse_plane(const std::string& s, const BodySpec& spec) {
  const auto parts = split(s, ',');
  if (static_cast<int>(parts.size()) != spec.n + spec.m + 1)
    throw UsageError("--plane: expected " + std::to_string(spec.n + spec.m + 1) +
                     " numbers (n alphas, m gammas, beta), got " + std::to_string(parts.size()));
  Hyperplane h;
  for (int i = 0; i < spec.n; ++i) h.alpha.push_back(to_number(parts[i], "--plane"));
  for (int i = 0; i < spec.m; ++i) h.gamma.push_back(to_number(parts[spec.n + i], "--plane"));
  h.beta = to_number(parts.back(), "--plane");
  try {
    h.validate(spec);
    reduce_to_normal_form(h);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--plane: ") + e.what());
  }
  return h;
}

json complex_json(std::complex<double> z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cut volumes of tube bodies around spheres"};
  app.require_subcommand(1);
  app.fallthrough();

  int n = 3;
  int m = 2;
  double eps = 0.5;
  unsigned threads = 0;
  app.add_option("--n", n, "dimension of the sphere's ambient space (odd, >= 3)");
  app.add_option("--m", m, "codimension (even, >= 2)");
  app.add_option("--eps", eps, "tube radius, 0 < eps < 1");
  app.add_option("--threads", threads, "worker cap for Monte Carlo (0 = all cores)");
  app.add_flag("--pretty", g_pretty, "aligned key/value output");

  // volume / classify share the plane flags
  double a = 0.0;
  double c = 0.0;
  std::string side_text = "geq";
  std::string plane_text;
  double tol = kDefaultQuadratureTol;
  bool use_mc = false;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;

  auto* total = app.add_subcommand("total", "closed-form volume C0");

  auto* volume = app.add_subcommand("volume", "volume cut off by a hyperplane");
  volume->add_option("--a", a, "slope");
  volume->add_option("--c", c, "offset");
  volume->add_option("--side", side_text, "geq or leq")->check(CLI::IsMember({"geq", "leq"}));
  volume->add_option("--tol", tol, "absolute quadrature tolerance");
  volume->add_option("--plane", plane_text, "a1,...,an,g1,...,gm,b");
  volume->add_flag("--mc", use_mc, "Monte Carlo (tube sampler) instead of quadrature");
  volume->add_option("--samples", samples, "Monte Carlo samples");
  volume->add_option("--seed", seed, "Monte Carlo seed");

  auto* cls = app.add_subcommand("classify", "domain of a hyperplane");
  cls->add_option("--a", a, "slope");
  cls->add_option("--c", c, "offset");
  cls->add_option("--plane", plane_text, "a1,...,an,g1,...,gm,b");

  std::string domain_text;
  std::string grid_text = "30x30";
  std::string a_range_text = "0:1";
  std::string c_range_text;
  std::string out_path;
  auto* sample = app.add_subcommand("sample", "quadrature volumes on a grid inside one domain");
  sample->add_option("--domain", domain_text, "1, 2l, 2r, 3 or 4")
      ->required()
      ->check(CLI::IsMember({"1", "2l", "2r", "3", "4"}));
  sample->add_option("--grid", grid_text, "NxM: N slopes by M offsets");
  sample->add_option("--a-range", a_range_text, "lo:hi");
  sample->add_option("--c-range", c_range_text,
                     "lo:hi; points outside the domain are skipped (default: the domain's own "
                     "offset interval)");
  sample->add_option("--side", side_text, "geq or leq")->check(CLI::IsMember({"geq", "leq"}));
  sample->add_option("--tol", tol, "absolute quadrature tolerance");
  sample->add_option("--out", out_path, "CSV file");

  std::string input_path;
  std::string target_text;
  std::string s_model_path;
  int deg_a = -1;
  int deg_c = -1;
  bool unrestricted = false;
  auto* fit = app.add_subcommand("fit", "weighted-polynomial fit of S or P");
  fit->add_option("--input", input_path, "CSV samples")->required();
  fit->add_option("--target", target_text, "S or P")->required()->check(CLI::IsMember({"S", "P"}));
  fit->add_option("--deg-a", deg_a, "numerator degree in a")->required();
  fit->add_option("--deg-c", deg_c, "numerator degree in c")->required();
  fit->add_option("--s-model", s_model_path, "S model JSON (needed for --target P)");
  fit->add_flag("--odd", unrestricted, "allow odd powers of a");
  fit->add_option("--out", out_path, "model JSON");

  std::string models_text;
  auto* predict = app.add_subcommand("predict", "candidate volumes from fitted S and P");
  predict->add_option("--models", models_text, "sModel.json,pModel.json")->required();
  predict->add_option("--a", a, "slope");
  predict->add_option("--c", c, "offset");

  std::string config_path;
  std::string report_path;
  auto* certify = app.add_subcommand("certify", "full verification pipeline");
  certify->add_option("--config", config_path, "suite config JSON (default: built-in)");
  certify->add_option("--report", report_path, "report JSON");

  std::string loop_text;
  std::string leaf_text;
  bool have_leaf = false;
  auto* mono = app.add_subcommand("monodromy", "permutation of thimble labels along a loop");
  mono->add_option("--loop", loop_text, "lk3,lk4")->required();
  mono->add_option("--leaf", leaf_text, "labels, e.g. L-,R-");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  BodySpec spec{n, m, eps};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*total) {
      emit({{"C0", total_volume(spec)}});
    } else if (*volume || *cls) {
      NormalForm nf{a, c, false};
      const bool by_plane = !plane_text.empty();
      Hyperplane h;
      if (by_plane) {
        h = parse_plane(plane_text, spec);
        nf = reduce_to_normal_form(h);
      }
      const Domain dom = classify(nf, spec);
      if (*cls) {
        emit({{"domain", domain_tag(dom)}});
        return 0;
      }
      const Side side = parse_side(side_text);
      json out;
      if (by_plane) out["degenerate"] = nf.degenerate;
      out["a"] = nf.a;
      out["c"] = nf.c;
      out["side"] = to_string(side);
      out["domain"] = domain_tag(dom);
      if (use_mc) {
        if (samples < 1) throw UsageError("--samples must be at least 1");
        MonteCarloOptions mco;
        mco.threads = threads;
        const auto r = by_plane ? mc_cut_volume(spec, h, side, samples, seed, mco)
                                : mc_cut_volume(spec, nf, side, samples, seed, mco);
        out["volume"] = r.volume.value;
        out["stderr"] = r.volume.error_estimate;
        out["method"] = to_string(r.volume.method);
        out["samples"] = r.samples;
        out["hits"] = r.hits;
        out["seed"] = seed;
      } else {
        if (dom == Domain::NearDiscriminant)
          throw std::runtime_error("plane is on the discriminant (tangent to a slice circle)");
        const auto r = by_plane ? cut_volume_hyperplane(spec, h, side, tol)
                                : cut_volume(spec, nf, side, tol);
        out["volume"] = r.value;
        out["stderr"] = r.error_estimate;
        out["method"] = to_string(r.method);
        out["tol"] = tol;
      }
      emit(out);
    } else if (*sample) {
      const Domain dom = parse_domain_tag(domain_text);
      const auto [na, nc] = parse_grid(grid_text);
      const auto [alo, ahi] = parse_range(a_range_text, "--a-range");
      const Side side = parse_side(side_text);
      std::vector<GridPoint> pts;
      std::size_t skipped = 0;
      if (!c_range_text.empty()) {
        const auto [clo, chi] = parse_range(c_range_text, "--c-range");
        for (int i = 0; i < na; ++i)
          for (int j = 0; j < nc; ++j) {
            const double ai = na == 1 ? 0.5 * (alo + ahi) : alo + (ahi - alo) * i / (na - 1);
            const double cj = nc == 1 ? 0.5 * (clo + chi) : clo + (chi - clo) * j / (nc - 1);
            if (classify(ai, cj, spec) == dom)
              pts.push_back({ai, cj});
            else
              ++skipped;
          }
      } else {
        if (dom == Domain::Outside1) throw UsageError("--domain 1 needs --c-range");
        pts = domain_grid(spec, dom, GridSpec{na, nc, alo, ahi, 0.02, 0.98, false});
        skipped = static_cast<std::size_t>(na) * nc - pts.size();
      }
      std::vector<SampleRecord> records;
      for (const auto& p : pts) {
        const auto r = cut_volume(spec, p.a, p.c, side, tol);
        SampleRecord rec;
        rec.a = p.a;
        rec.c = p.c;
        rec.side = side;
        rec.domain = dom;
        rec.volume = r.value;
        rec.std_error = r.error_estimate;
        rec.method = r.method;
        rec.n = spec.n;
        rec.m = spec.m;
        rec.eps = spec.eps;
        rec.tol = tol;
        rec.seed = 0;
        records.push_back(rec);
      }
      if (!out_path.empty()) {
        write_samples(out_path, records);
        emit({{"out", out_path}, {"samples", records.size()}, {"skipped", skipped}});
      } else {
        for (const auto& r : records)
          emit({{"a", r.a}, {"c", r.c}, {"side", to_string(r.side)}, {"domain", domain_tag(r.domain)},
                {"volume", r.volume}, {"stderr", r.std_error}});
      }
    } else if (*fit) {
      const auto records = read_samples(input_path);
      if (records.empty()) throw std::runtime_error("no samples in " + input_path);
      // the samples carry their body
      spec = BodySpec::make(records.front().n, records.front().m, records.front().eps);
      for (const auto& r : records)
        if (r.n != spec.n || r.m != spec.m || r.eps != spec.eps)
          throw std::runtime_error("samples mix different bodies");
      const auto vs = to_volume_samples(records);
      FitOptions fo;
      fo.even_in_a = !unrestricted;
      PolynomialModel model;
      if (parse_target(target_text) == Target::S) {
        model = fit_S(spec, vs, deg_a, deg_c, fo);
      } else {
        if (s_model_path.empty()) throw UsageError("--target P needs --s-model");
        const auto s_model = read_model(s_model_path);
        model = fit_P(spec, derive_P_samples(spec, vs, s_model), deg_a, deg_c, fo);
      }
      if (!out_path.empty()) {
        write_model(out_path, model);
        emit({{"target", to_string(model.target)},
              {"degree_a", model.degree_a},
              {"degree_c", model.degree_c},
              {"residual_rms", model.residual_rms},
              {"samples", vs.size()},
              {"out", out_path}});
      } else {
        emit(model_to_json(model));
      }
    } else if (*predict) {
      const auto paths = split(models_text, ',');
      if (paths.size() != 2) throw UsageError("--models: expected sModel.json,pModel.json");
      PhiModel phi;
      phi.s_model = read_model(paths[0]);
      phi.p_model = read_model(paths[1]);
      if (phi.s_model.target != Target::S || phi.p_model.target != Target::P)
        throw UsageError("--models: first must be an S model, second a P model");
      spec = phi.s_model.spec;
      phi.c0 = total_volume(spec);
      const Domain dom = classify(a, c, spec);
      const auto [r1, r2] = phi_roots(phi, a, c);
      json out{{"a", a},
               {"c", c},
               {"domain", domain_tag(dom)},
               {"S", phi.s_model.evaluate(a, c)},
               {"P", phi.p_model.evaluate(a, c)},
               {"roots", json::array({complex_json(r1), complex_json(r2)})}};
      if (dom == Domain::Outside1 || dom == Domain::NearDiscriminant) {
        out["candidates"] = json::array();
      } else {
        const Candidates cand = predict_candidates(phi, a, c, dom);
        out["candidates"] = cand.values;
        out["discarded_complex"] = cand.discarded_complex;
        if (!cand.warnings.empty()) out["warnings"] = cand.warnings;
      }
      emit(out);
    } else if (*certify) {
      SuiteConfig cfg;
      if (!config_path.empty()) {
        const json raw = read_json(config_path);
        try {
          cfg = SuiteConfig::from_json(raw);
        } catch (const std::exception& e) {
          throw UsageError(std::string("--config: ") + e.what());
        }
      } else {
        cfg.spec = spec;
      }
      if (threads != 0) cfg.threads = threads;
      const Report rep = run_suite(cfg);
      if (!report_path.empty()) write_report(rep, report_path);
      for (const auto& ch : rep.checks) {
        json row{{"name", ch.name},
                 {"status", to_string(ch.status)},
                 {"measured", ch.measured},
                 {"target", ch.target},
                 {"tolerance", ch.tolerance}};
        if (!ch.note.empty()) row["note"] = ch.note;
        emit(row);
      }
      const bool ok = rep.exact_claims_hold();
      emit({{"checks", rep.checks.size()}, {"exact_claims", ok ? "pass" : "fail"}});
      return ok ? 0 : 1;
    } else if (*mono) {
      const auto parts = split(loop_text, ',');
      if (parts.size() != 2) throw UsageError("--loop: expected lk3,lk4");
      LoopSpec loop;
      try {
        std::size_t u1 = 0;
        std::size_t u2 = 0;
        loop.lk3 = std::stoll(parts[0], &u1);
        loop.lk4 = std::stoll(parts[1], &u2);
        if (u1 != parts[0].size() || u2 != parts[1].size()) throw std::invalid_argument("x");
      } catch (const std::exception&) {
        throw UsageError("--loop: expected two integers, got '" + loop_text + "'");
      }
      const Perm4 g = loop_to_perm(loop);
      json out{{"perm", g.to_string()}};
      have_leaf = mono->count("--leaf") > 0;
      if (have_leaf) {
        LeafSet leaf;
        try {
          leaf = parse_leaf(leaf_text);
        } catch (const std::invalid_argument& e) {
          throw UsageError(std::string("--leaf: ") + e.what());
        }
        json labels = json::array();
        for (Label l : apply(g, leaf).labels()) labels.push_back(to_string(l));
        out["leaf"] = labels;
      }
      emit(out);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
