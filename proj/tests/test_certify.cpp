#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tubevol/certify.hpp"
#include "tubevol/io.hpp"

using namespace tubevol;

namespace {

const BodySpec k32 = BodySpec::make(3, 2, 0.5);

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("tubevol_test_" + name);
}

SuiteConfig only(const std::string& section, const BodySpec& spec = k32) {
  return SuiteConfig::from_json(json{{"n", spec.n}, {"m", spec.m}, {"eps", spec.eps},
                                     {"sections", {{section, true}}}});
}

std::string without_timing(const Report& r) {
  auto j = r.to_json();
  j.erase("timing");
  return j.dump();
}

}  // namespace

TEST_CASE("CSV round-trip is lossless") {
  std::vector<SampleRecord> recs;
  recs.push_back({0.1, 1.0 / 3.0, Side::geq, Domain::Separating3, 3.4543361538012757, 1e-9,
                  Method::quadrature, 3, 2, 0.5, 1e-8, 0});
  recs.push_back({std::nextafter(2.0, 3.0), -0.123456789012345678, Side::leq, Domain::Both4,
                  1e-300, 0.00123, Method::monte_carlo, 5, 4, 0.25, 0.0, 18446744073709551615ull});
  std::stringstream ss;
  write_samples(ss, recs);
  CHECK(ss.str().rfind(std::string(kSampleHeader) + "\n", 0) == 0);
  const auto back = read_samples(ss);
  CHECK(back == recs);

  const auto path = temp_file("rt.csv");
  write_samples(path, recs);
  CHECK(read_samples(path) == recs);
  std::filesystem::remove(path);
}

TEST_CASE("columns may come in any order") {
  std::stringstream ss;
  ss << "seed,tol,eps,m,n,method,stderr,volume,domain,side,c,a\n"
     << "7,1e-08,0.5,2,3,quadrature,0,1.5,2r,geq,1,0\n";
  const auto r = read_samples(ss);
  REQUIRE(r.size() == 1);
  CHECK(r[0].a == 0.0);
  CHECK(r[0].c == 1.0);
  CHECK(r[0].domain == Domain::RightOnly2r);
  CHECK(r[0].seed == 7);
}

TEST_CASE("schema errors carry line and field") {
  std::stringstream missing("a,c,side,domain,volume,stderr,method,n,m,eps,tol\n");
  try {
    read_samples(missing);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.line == 1);
    CHECK(e.field == "seed");
    CHECK(std::string(e.what()).find("missing column 'seed'") != std::string::npos);
  }

  std::stringstream bad(std::string(kSampleHeader) + "\n0,0,geq,3,1,0,quadrature,3,2,0.5,1e-8,1\n" +
                        "0,zero,geq,3,1,0,quadrature,3,2,0.5,1e-8,1\n");
  try {
    read_samples(bad);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.line == 3);
    CHECK(e.field == "c");
  }

  std::stringstream side(std::string(kSampleHeader) + "\n0,0,up,3,1,0,quadrature,3,2,0.5,1e-8,1\n");
  CHECK_THROWS_AS(read_samples(side), SchemaError);
  std::stringstream shortrow(std::string(kSampleHeader) + "\n0,0,geq\n");
  CHECK_THROWS_AS(read_samples(shortrow), SchemaError);
  std::stringstream empty("");
  CHECK_THROWS_AS(read_samples(empty), SchemaError);
}

TEST_CASE("leq samples are converted to V_geq") {
  std::vector<SampleRecord> recs{{0, 1, Side::leq, Domain::RightOnly2r, 6.0, 0, Method::quadrature,
                                  3, 2, 0.5, 1e-8, 0}};
  const auto v = to_volume_samples(recs);
  CHECK(v[0].value == doctest::Approx(total_volume(k32) - 6.0));
}

TEST_CASE("model JSON round-trip") {
  std::vector<VolumeSample> s;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) s.push_back({0.1 * i, -0.3 + 0.06 * j, std::cos(0.1 * i + j)});
  const auto m = fit_weighted_polynomial(k32, s, Target::S, 4, 3);
  const auto j = model_to_json(m);
  for (const char* key : {"n", "m", "eps", "target", "k", "degree_a", "degree_c", "basis", "coeffs",
                          "residual_rms", "fit_window"})
    CHECK(j.contains(key));
  const auto back = model_from_json(json::parse(j.dump()));
  CHECK(back.basis == m.basis);
  CHECK(back.coeffs == m.coeffs);
  CHECK(back.evaluate(0.33, 0.1) == m.evaluate(0.33, 0.1));

  auto broken = j;
  broken.erase("coeffs");
  CHECK_THROWS_AS(model_from_json(broken), SchemaError);
  broken = j;
  broken["coeffs"].push_back(1.0);
  CHECK_THROWS_AS(model_from_json(broken), SchemaError);
}

TEST_CASE("config parsing") {
  const auto c = SuiteConfig::from_json(json::parse(R"({"n":5,"m":2,"eps":0.3,"degrees":[4,6],
      "tolerances":{"quadrature":1e-9},"seeds":{"mc":5}})"));
  CHECK(c.spec.n == 5);
  CHECK(c.degrees == std::vector<int>{4, 6});
  CHECK(c.quad_tol == 1e-9);
  CHECK(c.mc_seed == 5);
  CHECK(c.sections.oracle);
  CHECK_THROWS(SuiteConfig::from_json(json::parse(R"({"n":3,"bogus":1})")));
  CHECK_THROWS(SuiteConfig::from_json(json::parse(R"({"n":4})")));
  const auto round = SuiteConfig::from_json(c.to_json());
  CHECK(round.to_json() == c.to_json());
}

TEST_CASE("empty run gives a valid report") {
  auto cfg = SuiteConfig::from_json(json{{"sections", json::object()}});
  const auto r = run_suite(cfg);
  CHECK(r.checks.empty());
  CHECK(r.exact_claims_hold());
  const auto path = temp_file("empty.json");
  write_report(r, path);
  std::ifstream in(path);
  const auto j = json::parse(in);
  CHECK(j.at("checks").empty());
  CHECK(j.at("spec").at("C0").get<double>() == doctest::Approx(total_volume(k32)));
  std::filesystem::remove(path);
}

TEST_CASE("monodromy-only report holds exact set-algebra results only") {
  const auto r = run_suite(only("monodromy"));
  REQUIRE_FALSE(r.checks.empty());
  for (const auto& c : r.checks) {
    CHECK(c.name.rfind("monodromy.", 0) == 0);
    CHECK(c.status == CheckStatus::pass);
  }
  CHECK(r.find("monodromy.group_order_4") != nullptr);
  CHECK(r.models.empty());
}

TEST_CASE("every check carries its tolerance") {
  const auto j = run_suite(only("symmetry")).to_json();
  for (const auto& c : j.at("checks")) {
    CHECK(c.contains("tolerance"));
    CHECK(c.contains("target"));
    CHECK(c.contains("measured"));
    CHECK(c.at("status").get<std::string>() == "pass");
  }
}

TEST_CASE("reports are deterministic apart from timing") {
  auto cfg = SuiteConfig::from_json(json{{"sections", {{"oracle", true}, {"boundaries", true}}},
                                         {"mc", {{"box_samples", 200000}, {"tube_samples", 100000}}}});
  cfg.battery_planes = 5;
  const auto a = run_suite(cfg);
  cfg.threads = 3;
  const auto b = run_suite(cfg);
  CHECK(without_timing(a) == without_timing(b));
  CHECK(a.exact_claims_hold());
}

TEST_CASE("domain 4 unreachable for thin tubes") {
  auto cfg = only("cross_domain", BodySpec::make(3, 2, 0.2));
  cfg.degrees = {4, 6};
  cfg.s_degrees = {4};
  cfg.a_excess = {0, 1};
  const auto r = run_suite(cfg);
  const auto* c = r.find("cross_domain.domain_4");
  REQUIRE(c != nullptr);
  CHECK(c->status == CheckStatus::unreachable);
  CHECK(c->note.find("domain 4 unreachable") != std::string::npos);
  CHECK(c->note.find("4.89897") != std::string::npos);
}

TEST_CASE("grids stay inside their domain") {
  for (Domain d : {Domain::Separating3, Domain::RightOnly2r, Domain::LeftOnly2l, Domain::Both4}) {
    const auto pts = domain_grid(k32, d, {10, 10, 0.0, 4.0, 0.02, 0.98, false});
    CHECK_FALSE(pts.empty());
    for (const auto& p : pts) CHECK(classify(p.a, p.c, k32) == d);
  }
  CHECK(domain_grid(k32, Domain::Both4, {10, 10, 0.0, 1.5, 0.1, 0.9, true}).empty());
}

TEST_CASE("plane battery cycles through the domains") {
  const auto planes = plane_battery(k32, 10, 3);
  CHECK(planes.size() == 10);
  const std::vector<Domain> order{Domain::Outside1, Domain::LeftOnly2l, Domain::RightOnly2r,
                                  Domain::Separating3, Domain::Both4};
  for (std::size_t i = 0; i < planes.size(); ++i) {
    CHECK(planes[i].domain == order[i % 5]);
    CHECK(classify_hyperplane(planes[i].plane, k32) == planes[i].domain);
  }
}

TEST_CASE("transition errors") {
  for (double a : {0.0, 0.7, 2.5})
    for (double e : transition_errors(k32, a)) CHECK(e <= 1e-9);
}
