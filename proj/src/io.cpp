#include "tubevol/io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace tubevol {
namespace {

constexpr std::array<const char*, 12> kColumns = {"a",      "c",      "side", "domain",
                                                  "volume", "stderr", "method", "n",
                                                  "m",      "eps",    "tol",  "seed"};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double_field(const std::string& text, std::size_t line, const std::string& field) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty())
    throw SchemaError("line " + std::to_string(line) + ": field '" + field + "': not a number: '" +
                          text + "'",
                      line, field);
  return v;
}

template <class Int>
Int parse_int_field(const std::string& text, std::size_t line, const std::string& field) {
  Int v = 0;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, v);
  if (ec != std::errc() || ptr != last || text.empty())
    throw SchemaError("line " + std::to_string(line) + ": field '" + field +
                          "': not an integer: '" + text + "'",
                      line, field);
  return v;
}

template <class Fn>
auto parse_enum_field(const std::string& text, std::size_t line, const std::string& field, Fn fn) {
  try {
    return fn(text);
  } catch (const std::exception& e) {
    throw SchemaError("line " + std::to_string(line) + ": field '" + field + "': " + e.what(), line,
                      field);
  }
}

}  // namespace

SchemaError::SchemaError(const std::string& what, std::size_t line_, std::string field_)
    : std::runtime_error(what), line(line_), field(std::move(field_)) {}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_samples(std::ostream& out, const std::vector<SampleRecord>& samples) {
  out << kSampleHeader << '\n';
  for (const auto& s : samples) {
    out << format_double(s.a) << ',' << format_double(s.c) << ',' << to_string(s.side) << ','
        << domain_tag(s.domain) << ',' << format_double(s.volume) << ','
        << format_double(s.std_error) << ',' << to_string(s.method) << ',' << s.n << ',' << s.m
        << ',' << format_double(s.eps) << ',' << format_double(s.tol) << ',' << s.seed << '\n';
  }
}

void write_samples(const std::filesystem::path& path, const std::vector<SampleRecord>& samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_samples(out, samples);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<SampleRecord> read_samples(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw SchemaError("empty sample file: missing header", 1, "");
  ++lineno;
  const auto header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[trim(header[i])] = i;
  for (const char* name : kColumns)
    if (!col.count(name))
      throw SchemaError(std::string("line 1: missing column '") + name + "'", 1, name);

  std::vector<SampleRecord> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size())
      throw SchemaError("line " + std::to_string(lineno) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()),
                        lineno, "");
    auto get = [&](const char* name) { return trim(fields[col.at(name)]); };
    SampleRecord r;
    r.a = parse_double_field(get("a"), lineno, "a");
    r.c = parse_double_field(get("c"), lineno, "c");
    r.side = parse_enum_field(get("side"), lineno, "side", [](const std::string& t) { return parse_side(t); });
    r.domain = parse_enum_field(get("domain"), lineno, "domain",
                                [](const std::string& t) { return parse_domain_tag(t); });
    r.volume = parse_double_field(get("volume"), lineno, "volume");
    r.std_error = parse_double_field(get("stderr"), lineno, "stderr");
    r.method = parse_enum_field(get("method"), lineno, "method",
                                [](const std::string& t) { return parse_method(t); });
    r.n = parse_int_field<int>(get("n"), lineno, "n");
    r.m = parse_int_field<int>(get("m"), lineno, "m");
    r.eps = parse_double_field(get("eps"), lineno, "eps");
    r.tol = parse_double_field(get("tol"), lineno, "tol");
    r.seed = parse_int_field<std::uint64_t>(get("seed"), lineno, "seed");
    out.push_back(r);
  }
  return out;
}

std::vector<SampleRecord> read_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_samples(in);
}

std::vector<VolumeSample> to_volume_samples(const std::vector<SampleRecord>& records) {
  std::vector<VolumeSample> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    // fits are anchored to V_geq
    const double v = r.side == Side::geq
                         ? r.volume
                         : total_volume(BodySpec::make(r.n, r.m, r.eps)) - r.volume;
    out.push_back({r.a, r.c, v});
  }
  return out;
}

json model_to_json(const PolynomialModel& model) {
  json basis = json::array();
  for (const auto& mono : model.basis) basis.push_back({mono.i, mono.j});
  json j{{"n", model.spec.n},
              {"m", model.spec.m},
              {"eps", model.spec.eps},
              {"target", std::string(to_string(model.target))},
              {"k", model.k},
              {"degree_a", model.degree_a},
              {"degree_c", model.degree_c},
              {"basis", basis},
              {"coeffs", model.coeffs},
              {"residual_rms", model.residual_rms},
              {"fit_window",
               {{"a_lo", model.fit_window.a_lo},
                {"a_hi", model.fit_window.a_hi},
                {"c_lo", model.fit_window.c_lo},
                {"c_hi", model.fit_window.c_hi}}}};
  if (model.chebyshev) {
    const auto& f = *model.chebyshev;
    j["chebyshev"] = {{"variable", f.in_s ? "s" : "a"},
                      {"a_mid", f.a_mid},
                      {"a_half", f.a_half},
                      {"c_mid", f.c_mid},
                      {"c_half", f.c_half},
                      {"coeffs", f.coeffs}};
  }
  return j;
}

PolynomialModel model_from_json(const json& j) {
  auto need = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw SchemaError(std::string("model: missing field '") + key + "'", 0, key);
    return j.at(key);
  };
  try {
    PolynomialModel m;
    m.spec = BodySpec::make(need("n").get<int>(), need("m").get<int>(), need("eps").get<double>());
    m.target = parse_target(need("target").get<std::string>());
    m.k = need("k").get<int>();
    m.degree_a = need("degree_a").get<int>();
    m.degree_c = need("degree_c").get<int>();
    for (const auto& b : need("basis")) {
      if (!b.is_array() || b.size() != 2) throw SchemaError("model: basis entries are [i,j] pairs", 0, "basis");
      m.basis.push_back({b[0].get<int>(), b[1].get<int>()});
    }
    m.coeffs = need("coeffs").get<std::vector<double>>();
    if (m.coeffs.size() != m.basis.size())
      throw SchemaError("model: coeffs and basis differ in length", 0, "coeffs");
    m.residual_rms = need("residual_rms").get<double>();
    const auto& w = need("fit_window");
    m.fit_window = {w.at("a_lo").get<double>(), w.at("a_hi").get<double>(),
                    w.at("c_lo").get<double>(), w.at("c_hi").get<double>()};
    if (j.contains("chebyshev")) {
      const auto& f = j.at("chebyshev");
      ChebyshevForm form;
      const auto var = f.at("variable").get<std::string>();
      if (var != "s" && var != "a") throw SchemaError("model: chebyshev.variable must be s or a", 0, "chebyshev");
      form.in_s = var == "s";
      form.a_mid = f.at("a_mid").get<double>();
      form.a_half = f.at("a_half").get<double>();
      form.c_mid = f.at("c_mid").get<double>();
      form.c_half = f.at("c_half").get<double>();
      form.coeffs = f.at("coeffs").get<std::vector<double>>();
      if (form.coeffs.size() != m.basis.size())
        throw SchemaError("model: chebyshev.coeffs and basis differ in length", 0, "chebyshev");
      m.chebyshev = form;
    }
    return m;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("model: ") + e.what(), 0, "");
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what(), 0, "");
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_model(const std::filesystem::path& path, const PolynomialModel& model) {
  write_json(path, model_to_json(model));
}

PolynomialModel read_model(const std::filesystem::path& path) {
  return model_from_json(read_json(path));
}

}  // namespace tubevol
