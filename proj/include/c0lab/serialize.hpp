#pragma once

#include <string>

#include <json.hpp>

#include "c0lab/blaschke.hpp"
#include "c0lab/diagnostics.hpp"
#include "c0lab/interpolation.hpp"
#include "c0lab/similarity.hpp"
#include "c0lab/types.hpp"

namespace c0lab {

using Json = nlohmann::ordered_json;

namespace schema {
inline constexpr const char* zeroset = "c0lab.zeroset/1";
inline constexpr const char* sequence = "c0lab.sequence/1";
inline constexpr const char* scenario = "c0lab.scenario/1";
inline constexpr const char* report = "c0lab.report/1";
inline constexpr const char* certificate = "c0lab.certificate/1";
}  // namespace schema

/// Schema errors carry a JSON path such as "$.zeros[3].re".
Error schema_error(const std::string& path, const std::string& message);

/// Typed field access with path-precise errors.
class JsonReader {
 public:
  JsonReader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const Json& node() const noexcept { return node_; }
  const std::string& path() const noexcept { return path_; }

  bool has(const std::string& key) const;
  JsonReader at(const std::string& key) const;
  JsonReader at(std::size_t index) const;
  std::size_t size() const;

  double number() const;
  long long integer() const;
  std::uint64_t unsigned_integer() const;
  std::string string() const;
  bool boolean() const;
  void expect_object() const;
  void expect_array() const;
  /// Rejects keys outside `allowed`.
  void only_keys(std::initializer_list<const char*> allowed) const;

 private:
  const Json& node_;
  std::string path_;
};

Json complex_to_json(Complex z);
Complex complex_from_json(const JsonReader& r);

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const JsonReader& r);

/// {"schema": ..., "zeros": [{"re", "im", "mult"}]}. A bare array of entries is
/// also accepted on input.
Json zeroset_to_json(const ZeroSet& zeros);
ZeroSet zeroset_from_json(const JsonReader& r);

Json sequence_to_json(const SequenceSpec& spec);
SequenceSpec sequence_from_json(const JsonReader& r);

Json certificate_to_json(const SimilarityCertificate& c, bool with_matrices);
Json margin_report_to_json(const MarginReport& r, bool with_entries);
Json interpolant_to_json(const Interpolant& f);
Json interpolation_constant_to_json(const InterpolationConstant& c);
Json adversarial_to_json(const AdversarialResult& r);
Json inequality_to_json(const InequalityRecord& rec);
InequalityRecord inequality_from_json(const JsonReader& r);
Json jordan_result_to_json(const JordanModelResult& r, bool with_matrices, bool with_timings);

Json read_json_file(const std::string& path);
/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace c0lab
