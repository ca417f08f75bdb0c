#pragma once

// CSV samples and JSON models.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tubevol/algebra.hpp"
#include "tubevol/body.hpp"
#include "tubevol/classify.hpp"

namespace tubevol {

using json = nlohmann::json;

/// Malformed input; line is 1-based (0 when not tied to a line).
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& what, std::size_t line, std::string field);
  std::size_t line;
  std::string field;
};

inline constexpr const char* kSampleHeader = "a,c,side,domain,volume,stderr,method,n,m,eps,tol,seed";

struct SampleRecord {
  double a = 0.0;
  double c = 0.0;
  Side side = Side::geq;
  Domain domain = Domain::Separating3;
  double volume = 0.0;
  double std_error = 0.0;
  Method method = Method::quadrature;
  int n = 3;
  int m = 2;
  double eps = 0.5;
  double tol = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const SampleRecord&) const = default;
};

/// %.17g, so a parse gives back the same double.
std::string format_double(double v);

void write_samples(std::ostream& out, const std::vector<SampleRecord>& samples);
void write_samples(const std::filesystem::path& path, const std::vector<SampleRecord>& samples);
/// Columns are matched by header name; all twelve are required.
std::vector<SampleRecord> read_samples(std::istream& in);
std::vector<SampleRecord> read_samples(const std::filesystem::path& path);

std::vector<VolumeSample> to_volume_samples(const std::vector<SampleRecord>& records);

json model_to_json(const PolynomialModel& model);
PolynomialModel model_from_json(const json& j);
void write_model(const std::filesystem::path& path, const PolynomialModel& model);
PolynomialModel read_model(const std::filesystem::path& path);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace tubevol
