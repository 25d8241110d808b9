#include "c0lab/serialize.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace c0lab {

namespace fs = std::filesystem;

namespace {

// JSON has no infinities; they are written as strings.
Json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json int_list(const std::vector<int>& v) { return Json(v); }

Json complex_list(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (const Complex z : v) out.push_back(complex_to_json(z));
  return out;
}

const char* type_name(const Json& j) {
  if (j.is_number_integer() || j.is_number_unsigned()) return "integer";
  return j.type_name();
}

}  // namespace

Error schema_error(const std::string& path, const std::string& message) {
  return Error(ErrorKind::InvalidArgument, path + ": " + message);
}

bool JsonReader::has(const std::string& key) const { return node_.is_object() && node_.contains(key); }

JsonReader JsonReader::at(const std::string& key) const {
  expect_object();
  if (!node_.contains(key)) throw schema_error(path_, "missing field '" + key + "'");
  return JsonReader(node_.at(key), path_ + "." + key);
}

JsonReader JsonReader::at(std::size_t index) const {
  expect_array();
  if (index >= node_.size()) throw schema_error(path_, "index " + std::to_string(index) + " out of range");
  return JsonReader(node_.at(index), path_ + "[" + std::to_string(index) + "]");
}

std::size_t JsonReader::size() const {
  expect_array();
  return node_.size();
}

double JsonReader::number() const {
  if (node_.is_number()) return node_.get<double>();
  if (node_.is_string()) {
    const auto s = node_.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw schema_error(path_, std::string("expected number, got ") + type_name(node_));
}

long long JsonReader::integer() const {
  if (!(node_.is_number_integer() || node_.is_number_unsigned()))
    throw schema_error(path_, std::string("expected integer, got ") + type_name(node_));
  return node_.get<long long>();
}

std::uint64_t JsonReader::unsigned_integer() const {
  if (node_.is_number_unsigned()) return node_.get<std::uint64_t>();
  if (node_.is_number_integer() && node_.get<long long>() >= 0) return node_.get<std::uint64_t>();
  throw schema_error(path_, "expected non-negative integer");
}

std::string JsonReader::string() const {
  if (!node_.is_string()) throw schema_error(path_, std::string("expected string, got ") + type_name(node_));
  return node_.get<std::string>();
}

bool JsonReader::boolean() const {
  if (!node_.is_boolean()) throw schema_error(path_, std::string("expected boolean, got ") + type_name(node_));
  return node_.get<bool>();
}

void JsonReader::expect_object() const {
  if (!node_.is_object()) throw schema_error(path_, std::string("expected object, got ") + type_name(node_));
}

void JsonReader::expect_array() const {
  if (!node_.is_array()) throw schema_error(path_, std::string("expected array, got ") + type_name(node_));
}

void JsonReader::only_keys(std::initializer_list<const char*> allowed) const {
  expect_object();
  for (const auto& [key, value] : node_.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw schema_error(path_, "unknown field '" + key + "'");
  }
}

Json complex_to_json(Complex z) { return Json{{"re", num(z.real())}, {"im", num(z.imag())}}; }

Complex complex_from_json(const JsonReader& r) {
  r.only_keys({"re", "im"});
  return {r.at("re").number(), r.has("im") ? r.at("im").number() : 0.0};
}

Json matrix_to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

CMatrix matrix_from_json(const JsonReader& r) {
  r.only_keys({"rows", "cols", "data"});
  const auto rows = r.at("rows").integer();
  const auto cols = r.at("cols").integer();
  if (rows < 0 || cols < 0) throw schema_error(r.path(), "negative dimension");
  const auto data = r.at("data");
  if (data.size() != std::size_t(rows * cols))
    throw schema_error(data.path(), "expected " + std::to_string(rows * cols) + " entries, got " +
                                        std::to_string(data.size()));
  CMatrix m(rows, cols);
  for (long long i = 0; i < rows; ++i)
    for (long long j = 0; j < cols; ++j) m(i, j) = complex_from_json(data.at(std::size_t(i * cols + j)));
  return m;
}

Json zeroset_to_json(const ZeroSet& zeros) {
  Json arr = Json::array();
  for (const auto& e : zeros.entries())
    arr.push_back({{"re", num(e.point.value().real())}, {"im", num(e.point.value().imag())}, {"mult", e.multiplicity}});
  return Json{{"schema", schema::zeroset}, {"zeros", arr}};
}

ZeroSet zeroset_from_json(const JsonReader& r) {
  if (r.node().is_object()) {
    r.only_keys({"schema", "zeros", "sequence"});
    if (r.has("schema") && r.at("schema").string() != schema::zeroset)
      throw schema_error(r.path() + ".schema", "expected '" + std::string(schema::zeroset) + "'");
    return zeroset_from_json(r.at("zeros"));
  }
  const JsonReader& arr = r;
  std::vector<ZeroEntry> entries;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto e = arr.at(i);
    e.only_keys({"re", "im", "mult"});
    const Complex z(e.at("re").number(), e.has("im") ? e.at("im").number() : 0.0);
    const long long m = e.has("mult") ? e.at("mult").integer() : 1;
    if (m < 1) throw schema_error(e.path() + ".mult", "multiplicity must be >= 1");
    try {
      entries.push_back({DiskPoint(z), int(m)});
    } catch (const Error& err) {
      throw schema_error(e.path(), err.what());
    }
  }
  try {
    return ZeroSet(std::move(entries));
  } catch (const Error& err) {
    throw schema_error(arr.path(), err.what());
  }
}

Json sequence_to_json(const SequenceSpec& spec) {
  Json j{{"kind", to_string(spec.kind)}, {"count", spec.count}, {"param", num(spec.param)}, {"seed", spec.seed}};
  if (!spec.multiplicity_pattern.empty()) j["multiplicity_pattern"] = int_list(spec.multiplicity_pattern);
  return j;
}

SequenceSpec sequence_from_json(const JsonReader& r) {
  r.only_keys({"schema", "kind", "count", "param", "seed", "multiplicity_pattern"});
  SequenceSpec s;
  try {
    s.kind = sequence_kind_from_string(r.at("kind").string());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidArgument) throw;
    throw schema_error(r.path() + ".kind", e.what());
  }
  const long long count = r.at("count").integer();
  if (count < 1 || count > 4096) throw schema_error(r.path() + ".count", "count must lie in [1, 4096]");
  s.count = int(count);
  if (r.has("param")) s.param = r.at("param").number();
  if (r.has("seed")) s.seed = r.at("seed").unsigned_integer();
  if (r.has("multiplicity_pattern")) {
    const auto p = r.at("multiplicity_pattern");
    for (std::size_t i = 0; i < p.size(); ++i) {
      const long long m = p.at(i).integer();
      if (m < 1 || m > max_derivative_order) throw schema_error(p.at(i).path(), "multiplicity must lie in [1, 12]");
      s.multiplicity_pattern.push_back(int(m));
    }
  }
  return s;
}

Json certificate_to_json(const SimilarityCertificate& c, bool with_matrices) {
  Json j{{"schema", schema::certificate},
         {"stage", c.stage},
         {"residual", num(c.residual)},
         {"tolerance", num(c.tolerance)},
         {"norm_x", num(c.norm_x)},
         {"norm_x_inv", num(c.norm_x_inv)},
         {"inverse_defect", num(c.inverse_defect())},
         {"inverse_tolerance", num(c.inverse_tolerance())},
         {"predicted_bound", c.predicted_bound ? num(*c.predicted_bound) : Json()},
         {"bound_formula", c.bound_formula},
         {"valid", c.valid()}};
  if (with_matrices) {
    j["x"] = matrix_to_json(c.x);
    j["x_inv"] = matrix_to_json(c.x_inv);
    if (c.target) j["target"] = matrix_to_json(*c.target);
  }
  return j;
}

Json margin_report_to_json(const MarginReport& r, bool with_entries) {
  Json j{{"margin", num(r.margin)},
         {"method", to_string(r.method)},
         {"witness", r.witness},
         {"witness_exponents", int_list(r.witness_exponents)}};
  if (r.witness_index) j["witness_index"] = *r.witness_index;
  if (r.witness_point) j["witness_point"] = complex_to_json(*r.witness_point);
  if (with_entries) {
    Json entries = Json::array();
    for (const auto& e : r.entries) entries.push_back({{"exponents", int_list(e.exponents)}, {"value", num(e.value)}});
    j["entries"] = entries;
  }
  return j;
}

Json interpolant_to_json(const Interpolant& f) {
  Json j{{"numerator", complex_list(f.numerator)},
         {"denominator", complex_list(f.denominator)},
         {"certified_norm", num(f.certified_norm)},
         {"grid_size", f.grid_size},
         {"slack", num(f.slack)},
         {"pick_value", f.pick_value ? num(*f.pick_value) : Json()},
         {"nodes", complex_list(f.nodes)},
         {"achieved_values", complex_list(f.achieved_values)}};
  if (f.newton) j["newton"] = {{"nodes", complex_list(f.newton->nodes)}, {"coeffs", complex_list(f.newton->coeffs)}};
  return j;
}

Json interpolation_constant_to_json(const InterpolationConstant& c) {
  return Json{{"value", num(c.value)},
              {"argmax", int_list(c.argmax)},
              {"subsets_tested", c.subsets_tested},
              {"degenerate", c.degenerate},
              {"sampled", c.sampled}};
}

Json inequality_to_json(const InequalityRecord& rec) {
  Json j{{"stage", rec.stage}, {"kind", rec.kind}, {"relation", rec.relation}};
  if (rec.kind == "product") {
    j["removed"] = int_list(rec.removed);
    j["point"] = rec.point;
    j["truncation"] = rec.truncation;
  } else {
    j["a"] = rec.a;
    j["b"] = rec.b;
  }
  j["lhs"] = num(rec.lhs);
  j["rhs"] = num(rec.rhs);
  j["pass"] = rec.pass;
  return j;
}

InequalityRecord inequality_from_json(const JsonReader& r) {
  r.only_keys({"stage", "kind", "relation", "removed", "point", "truncation", "a", "b", "lhs", "rhs", "pass"});
  InequalityRecord rec;
  rec.stage = int(r.at("stage").integer());
  rec.kind = r.at("kind").string();
  rec.relation = r.at("relation").string();
  if (rec.kind == "product") {
    const auto removed = r.at("removed");
    for (std::size_t i = 0; i < removed.size(); ++i) rec.removed.push_back(int(removed.at(i).integer()));
    rec.point = int(r.at("point").integer());
    rec.truncation = int(r.at("truncation").integer());
  } else if (rec.kind == "separation") {
    rec.a = int(r.at("a").integer());
    rec.b = int(r.at("b").integer());
  } else {
    throw schema_error(r.path() + ".kind", "expected 'product' or 'separation'");
  }
  rec.lhs = r.at("lhs").number();
  rec.rhs = r.at("rhs").number();
  rec.pass = r.at("pass").boolean();
  return rec;
}

Json adversarial_to_json(const AdversarialResult& r) {
  Json log = Json::array();
  for (const auto& rec : r.log) log.push_back(inequality_to_json(rec));
  return Json{{"divisor_indices", int_list(r.divisor_indices)},
              {"chosen", int_list(r.chosen)},
              {"truncations", int_list(r.truncations)},
              {"stages_completed", r.stages_completed},
              {"stage_exhausted", r.stage_exhausted},
              {"exhausted_stage", r.exhausted_stage},
              {"candidates_rejected", r.candidates_rejected},
              {"alpha_product", num(r.alpha_product)},
              {"min_nonzero_value", num(r.min_nonzero_value)},
              {"log", log}};
}

Json jordan_result_to_json(const JordanModelResult& r, bool with_matrices, bool with_timings) {
  Json blocks = Json::array();
  for (const auto& b : r.blocks) {
    blocks.push_back({{"lambda", complex_to_json(b.lambda)},
                      {"multiplicity", b.multiplicity},
                      {"scale", num(b.scale)},
                      {"epsilon", num(b.epsilon)},
                      {"crown_distance", num(b.crown_distance)},
                      {"certificate", certificate_to_json(b.certificate, false)}});
  }
  Json stages = Json::array();
  for (const auto& s : r.stages) {
    Json st{{"name", s.name}, {"residual", num(s.residual)}, {"condition", num(s.condition)}};
    if (with_timings) st["seconds"] = s.seconds;
    stages.push_back(st);
  }
  const auto& d = r.decomposition;
  Json j{{"to_model", certificate_to_json(r.to_model, with_matrices)},
         {"to_compressed_shift",
          r.to_compressed_shift ? certificate_to_json(*r.to_compressed_shift, with_matrices) : Json()},
         {"decomposition",
          {{"certificate", certificate_to_json(d.certificate, false)},
           {"sizes", int_list(d.sizes)},
           {"off_block", num(d.off_block)},
           {"min_principal_angle", num(d.min_principal_angle)},
           {"dixmier_unitarity", num(d.dixmier.max_unitarity_residual)},
           {"dixmier_selfadjoint", num(d.dixmier.max_selfadjoint_residual)}}},
         {"blocks", blocks},
         {"sup_block_norm", num(r.sup_block_norm)},
         {"composition_bound", num(r.composition_bound)},
         {"model_sweep_margin", r.model_sweep_margin ? num(*r.model_sweep_margin) : Json()},
         {"operator_sweep_margin", r.operator_sweep_margin ? num(*r.operator_sweep_margin) : Json()},
         {"warnings", r.warnings},
         {"stages", stages}};
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidArgument, path + ": " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error(ErrorKind::InvalidArgument, "write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace c0lab
