#include "c0lab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "c0lab/diagnostics.hpp"
#include "c0lab/interpolation.hpp"
#include "c0lab/linalg.hpp"
#include "c0lab/model_space.hpp"
#include "c0lab/similarity.hpp"

#ifndef C0LAB_VERSION
#define C0LAB_VERSION "0.0.0"
#endif

namespace c0lab::cli {

namespace {

std::mutex log_mutex;

std::string exponents_string(const std::vector<int>& k) {
  std::string s;
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? " " : "") + std::to_string(k[i]);
  return s;
}

std::string list_string(const std::vector<int>& k) { return "[" + exponents_string(k) + "]"; }

Json error_json(const Error& e) {
  return Json{{"kind", to_string(e.kind())}, {"stage", e.stage()}, {"message", e.what()}, {"measured", e.measured()}};
}

}  // namespace

LogLevel log_level() {
  const char* env = std::getenv("C0LAB_LOG");
  if (!env) return LogLevel::Quiet;
  const std::string v(env);
  if (v == "debug" || v == "2") return LogLevel::Debug;
  if (v == "info" || v == "1") return LogLevel::Info;
  return LogLevel::Quiet;
}

void log(LogLevel level, const std::string& message) {
  if (level == LogLevel::Quiet || int(level) > int(log_level())) return;
  std::lock_guard<std::mutex> lock(log_mutex);
  std::cerr << "[c0lab] " << message << '\n';
}

void Tolerances::set(const std::string& name, double value) {
  double* slot = nullptr;
  if (name == "annihilation") slot = &annihilation;
  if (name == "residual") slot = &residual;
  if (!slot) throw Error(ErrorKind::InvalidArgument, "unknown tolerance '" + name + "' (annihilation, residual)");
  if (!(value > 0) || value > *slot)
    throw Error(ErrorKind::InvalidArgument,
                "tolerance '" + name + "' may only be tightened (current " + format_number(*slot) + ")", value);
  *slot = value;
}

Json Tolerances::to_json() const {
  return Json{{"annihilation", annihilation}, {"residual", residual}};
}

std::pair<std::string, double> parse_tolerance(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::InvalidArgument, "--tol expects name=value: " + arg);
  const std::string value = arg.substr(eq + 1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw Error(ErrorKind::InvalidArgument, "--tol value is not a number: " + arg);
  return {arg.substr(0, eq), v};
}

ZeroSet Scenario::zero_set() const {
  if (zeros) {
    if (multiplicities.empty()) return *zeros;
    std::vector<ZeroEntry> e;
    for (std::size_t j = 0; j < zeros->size(); ++j)
      e.push_back({DiskPoint(zeros->point(j)), multiplicities[j % multiplicities.size()]});
    return ZeroSet(std::move(e));
  }
  SequenceSpec s = *sequence;
  if (!multiplicities.empty()) s.multiplicity_pattern = multiplicities;
  return generate(s);
}

Json Scenario::to_json() const {
  Json j{{"schema", schema::scenario}, {"name", name}};
  if (sequence) j["sequence"] = sequence_to_json(*sequence);
  if (zeros) j["zeros"] = zeroset_to_json(*zeros)["zeros"];
  if (!multiplicities.empty()) j["multiplicities"] = multiplicities;
  if (perturbation)
    j["perturbation"] = {{"condition", perturbation->condition},
                         {"seed", perturbation->seed},
                         {"kind", c0lab::to_string(perturbation->kind)}};
  j["pipeline"] = pipeline;
  j["tolerances"] = tolerances.to_json();
  if (adversarial_budget) j["adversarial_budget"] = *adversarial_budget;
  j["exhaustive_limit"] = exhaustive_limit;
  return j;
}

Scenario scenario_from_json(const JsonReader& r) {
  r.only_keys({"schema", "name", "sequence", "zeros", "multiplicities", "perturbation", "pipeline", "tolerances",
               "adversarial_budget", "exhaustive_limit"});
  if (r.has("schema") && r.at("schema").string() != schema::scenario)
    throw schema_error(r.path() + ".schema", "expected '" + std::string(schema::scenario) + "'");
  Scenario s;
  if (r.has("name")) s.name = r.at("name").string();
  if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos)
    throw schema_error(r.path() + ".name", "name must be a non-empty file stem");
  if (r.has("sequence") == r.has("zeros")) throw schema_error(r.path(), "exactly one of 'sequence' or 'zeros' required");
  if (r.has("sequence")) s.sequence = sequence_from_json(r.at("sequence"));
  if (r.has("zeros")) s.zeros = zeroset_from_json(r.at("zeros"));
  if (r.has("multiplicities")) {
    const auto m = r.at("multiplicities");
    for (std::size_t i = 0; i < m.size(); ++i) {
      const long long v = m.at(i).integer();
      if (v < 1 || v > max_derivative_order) throw schema_error(m.at(i).path(), "multiplicity must lie in [1, 12]");
      s.multiplicities.push_back(int(v));
    }
  }
  if (r.has("perturbation")) {
    const auto p = r.at("perturbation");
    p.only_keys({"condition", "seed", "kind"});
    Perturbation pert;
    pert.condition = p.at("condition").number();
    if (!(pert.condition >= 1)) throw schema_error(p.path() + ".condition", "condition number must be >= 1");
    if (p.has("seed")) pert.seed = p.at("seed").unsigned_integer();
    if (p.has("kind")) {
      try {
        pert.kind = conjugator_kind_from_string(p.at("kind").string());
      } catch (const Error& e) {
        throw schema_error(p.path() + ".kind", e.what());
      }
    }
    s.perturbation = pert;
  }
  if (r.has("pipeline")) {
    const auto p = r.at("pipeline");
    s.pipeline.clear();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const std::string name = p.at(i).string();
      if (std::find(known_stages.begin(), known_stages.end(), name) == known_stages.end())
        throw schema_error(p.at(i).path(), "unknown stage '" + name + "'");
      s.pipeline.push_back(name);
    }
  }
  if (r.has("tolerances")) {
    const auto t = r.at("tolerances");
    t.expect_object();
    for (const auto& [key, value] : t.node().items()) {
      try {
        s.tolerances.set(key, t.at(key).number());
      } catch (const Error& e) {
        throw schema_error(t.path() + "." + key, e.what());
      }
    }
  }
  if (r.has("adversarial_budget")) {
    const long long b = r.at("adversarial_budget").integer();
    if (b < 0) throw schema_error(r.path() + ".adversarial_budget", "budget must be >= 0");
    s.adversarial_budget = int(b);
  }
  if (r.has("exhaustive_limit")) {
    const long long e = r.at("exhaustive_limit").integer();
    if (e < 0 || e > 12) throw schema_error(r.path() + ".exhaustive_limit", "limit must lie in [0, 12]");
    s.exhaustive_limit = int(e);
  }
  return s;
}

std::vector<Scenario> load_scenarios(const std::string& path) {
  const Json j = read_json_file(path);
  const JsonReader root(j, "$");
  std::vector<Scenario> out;
  if (root.has("scenarios")) {
    root.only_keys({"schema", "scenarios"});
    const auto list = root.at("scenarios");
    for (std::size_t i = 0; i < list.size(); ++i) out.push_back(scenario_from_json(list.at(i)));
  } else {
    out.push_back(scenario_from_json(root));
  }
  return out;
}

std::string Table::to_csv() const {
  std::vector<std::size_t> width(columns.size(), 0);
  for (std::size_t c = 0; c < columns.size(); ++c) width[c] = columns[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << cells[c];
      if (c + 1 < cells.size()) out << ',' << std::string(width[c] - cells[c].size() + 1, ' ');
    }
    out << '\n';
  };
  line(columns);
  for (const auto& row : rows) line(row);
  return out.str();
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

StageOutput analyze(const ZeroSet& zeros, int exhaustive_limit) {
  StageOutput out;
  const auto pts = zeros.points();
  const double delta = carleson_constant(ZeroSet::simple(pts));
  Table pairs{{"i", "j", "pseudo_distance"}, {}};
  double min_sep = 1;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = pseudo_distance(pts[i], pts[j]);
      min_sep = std::min(min_sep, d);
      pairs.rows.push_back({std::to_string(i), std::to_string(j), format_number(d)});
    }
  const InterpolationConstant c = empirical_interpolation_constant(zeros, exhaustive_limit);
  if (c.sampled)
    out.warnings.push_back("sampled-subsets: n = " + std::to_string(zeros.size()) + " exceeds the exhaustive limit " +
                           std::to_string(exhaustive_limit));
  out.json = Json{{"zeros", zeroset_to_json(zeros)["zeros"]},
                  {"carleson_constant", delta},
                  {"min_pseudo_distance", min_sep},
                  {"interpolation_constant", interpolation_constant_to_json(c)}};
  out.tables["pairwise"] = std::move(pairs);
  out.tables["summary"] = Table{{"n", "delta", "interpolation_constant", "subsets_tested", "sampled"},
                                {{std::to_string(zeros.size()), format_number(delta), format_number(c.value),
                                  std::to_string(c.subsets_tested), c.sampled ? "1" : "0"}}};
  return out;
}

StageOutput similar(const ZeroSet& zeros, const std::optional<Perturbation>& perturbation,
                    const Tolerances& tolerances) {
  StageOutput out;
  const BlaschkeProduct theta(zeros);
  const CMatrix model = jordan_model(theta);
  CMatrix t = model;
  Json pert_json;
  if (perturbation) {
    Rng rng(perturbation->seed);
    const Conjugator v = random_conjugator(rng, int(model.rows()), perturbation->condition, perturbation->kind);
    t = v.v * model * v.v_inv;
    pert_json = {{"condition", perturbation->condition},
                 {"seed", perturbation->seed},
                 {"kind", c0lab::to_string(perturbation->kind)},
                 {"measured_condition", linalg::condition_number(v.v)}};
  }
  JordanOptions opt;
  opt.annihilation = tolerances.annihilation;
  opt.residual_tolerance = tolerances.residual;
  const JordanModelResult r = jordan_model_similarity(t, theta, opt);
  out.json = jordan_result_to_json(r, false, false);
  out.json["dimension"] = model.rows();
  out.json["perturbation"] = pert_json;
  out.warnings = r.warnings;

  auto tagged = [&](const SimilarityCertificate& c) {
    Json j = certificate_to_json(c, true);
    j["warnings"] = r.warnings;
    if (r.model_sweep_margin) j["sweep_margin"] = *r.model_sweep_margin;
    return j;
  };
  out.certificates["jordan_model"] = tagged(r.to_model);
  if (r.to_compressed_shift) out.certificates["compressed_shift"] = tagged(*r.to_compressed_shift);
  for (std::size_t j = 0; j < r.blocks.size(); ++j)
    out.certificates["block" + std::to_string(j)] = tagged(r.blocks[j].certificate);

  Table stages{{"stage", "residual", "condition"}, {}};
  for (const auto& s : r.stages) stages.rows.push_back({s.name, format_number(s.residual), format_number(s.condition)});
  out.tables["stages"] = std::move(stages);
  Table blocks{{"block", "lambda_re", "lambda_im", "multiplicity", "epsilon", "norm_x", "norm_x_inv", "residual"}, {}};
  for (std::size_t j = 0; j < r.blocks.size(); ++j) {
    const auto& b = r.blocks[j];
    blocks.rows.push_back({std::to_string(j), format_number(b.lambda.real()), format_number(b.lambda.imag()),
                           std::to_string(b.multiplicity), format_number(b.epsilon),
                           format_number(b.certificate.norm_x), format_number(b.certificate.norm_x_inv),
                           format_number(b.certificate.residual)});
  }
  out.tables["blocks"] = std::move(blocks);
  return out;
}

StageOutput sweep(const ZeroSet& zeros, std::optional<int> budget) {
  StageOutput out;
  const BlaschkeProduct theta(zeros);
  out.json = Json::object();
  Table entries{{"exponents", "margin"}, {}};
  try {
    const MarginReport m = divisor_sweep(theta);
    out.json["divisor_sweep"] = margin_report_to_json(m, true);
    for (const auto& e : m.entries) entries.rows.push_back({exponents_string(e.exponents), format_number(e.value)});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::CombinatorialLimit) throw;
    out.json["divisor_sweep"] = Json{{"skipped", e.what()}};
    out.warnings.push_back(std::string("sweep-skipped: ") + e.what());
  }
  // Separation and the construction use the distinct points in sequence order.
  const ZeroSet seq = ZeroSet::simple(zeros.points());
  out.json["carleson_constant"] = carleson_constant(seq);
  const int b = budget.value_or(int(seq.size()));
  const AdversarialResult adv = adversarial_divisor(seq, std::min(b, int(seq.size())));
  out.json["adversarial"] = adversarial_to_json(adv);
  Table log{{"stage", "kind", "relation", "point", "truncation", "a", "b", "lhs", "rhs", "pass"}, {}};
  for (const auto& rec : adv.log)
    log.rows.push_back({std::to_string(rec.stage), rec.kind, rec.relation, std::to_string(rec.point),
                        std::to_string(rec.truncation), std::to_string(rec.a), std::to_string(rec.b),
                        format_number(rec.lhs), format_number(rec.rhs), rec.pass ? "1" : "0"});
  out.tables["divisors"] = std::move(entries);
  out.tables["adversarial"] = std::move(log);
  out.tables["adversarial_summary"] =
      Table{{"stages_completed", "stage_exhausted", "exhausted_stage", "candidates_rejected", "chosen", "truncations"},
            {{std::to_string(adv.stages_completed), adv.stage_exhausted ? "1" : "0",
              std::to_string(adv.exhausted_stage), std::to_string(adv.candidates_rejected), list_string(adv.chosen),
              list_string(adv.truncations)}}};
  return out;
}

RunOutcome run_scenario(Scenario scenario, const RunOptions& options) {
  using Clock = std::chrono::steady_clock;
  RunOutcome outcome;
  if (options.seed) {
    if (scenario.sequence) scenario.sequence->seed = *options.seed;
    if (scenario.perturbation) scenario.perturbation->seed = *options.seed;
  }
  for (const auto& [name, value] : options.tolerance_overrides) scenario.tolerances.set(name, value);

  Json report{{"schema", schema::report}, {"version", version()}, {"scenario", scenario.to_json()}};
  Json stages = Json::object();
  Json timings = Json::object();
  std::vector<std::string> warnings;
  const std::string base = options.out_dir + "/" + scenario.name;
  auto write = [&](const std::string& path, const std::string& content) {
    write_file_atomic(path, content);
    outcome.files.push_back(path);
  };

  log(LogLevel::Info, scenario.name + ": start");
  std::optional<ZeroSet> zeros;
  try {
    zeros = scenario.zero_set();
    report["zeros"] = zeroset_to_json(*zeros)["zeros"];
  } catch (const Error& e) {
    report["error"] = error_json(e);
    outcome.exit_code = StageError;
  }
  for (const std::string& stage : scenario.pipeline) {
    if (!zeros) break;
    const auto t0 = Clock::now();
    try {
      StageOutput out;
      if (stage == "analyze") out = analyze(*zeros, scenario.exhaustive_limit);
      if (stage == "similar") out = similar(*zeros, scenario.perturbation, scenario.tolerances);
      if (stage == "sweep") out = sweep(*zeros, scenario.adversarial_budget);
      stages[stage] = out.json;
      for (const auto& w : out.warnings) warnings.push_back(stage + ": " + w);
      for (const auto& [name, cert] : out.certificates)
        write(base + ".cert." + name + ".json", cert.dump(2) + "\n");
      if (options.format == "csv")
        for (const auto& [name, table] : out.tables) write(base + "." + stage + "." + name + ".csv", table.to_csv());
    } catch (const Error& e) {
      stages[stage] = Json{{"error", error_json(e)}};
      outcome.exit_code = StageError;
      log(LogLevel::Info, scenario.name + ": stage " + stage + " failed: " + e.what());
    }
    timings[stage] = std::chrono::duration<double>(Clock::now() - t0).count();
    log(LogLevel::Debug, scenario.name + ": " + stage + " done");
  }
  report["stages"] = stages;
  report["warnings"] = warnings;
  if (options.timings) report["timings"] = timings;
  if (outcome.exit_code == Success) {
    for (const auto& w : warnings)
      if (w.find("hypothesis-violated") != std::string::npos) outcome.exit_code = Warnings;
  }
  report["exit_code"] = outcome.exit_code;
  if (options.format == "json") write(base + ".report.json", report.dump(2) + "\n");
  outcome.report = std::move(report);
  return outcome;
}

std::vector<RunOutcome> run_batch(const std::vector<Scenario>& scenarios, const RunOptions& options, int jobs) {
  std::vector<RunOutcome> outcomes(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      try {
        outcomes[i] = run_scenario(scenarios[i], options);
      } catch (const Error& e) {
        outcomes[i].exit_code = StageError;
        outcomes[i].report = Json{{"scenario", scenarios[i].name}, {"error", error_json(e)}};
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, int(scenarios.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return outcomes;
}

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  Table t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto a = cell.find_first_not_of(' ');
      const auto b = cell.find_last_not_of(' ');
      cells.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
    }
    return cells;
  };
  if (std::getline(in, line)) t.columns = split(line);
  while (std::getline(in, line))
    if (!line.empty()) t.rows.push_back(split(line));
  return t;
}

std::string gnuplot_script(const std::string& table_path, const Table& header_source, const std::string& x,
                           const std::string& y, bool log_y) {
  auto column = [&](const std::string& name) {
    const auto it = std::find(header_source.columns.begin(), header_source.columns.end(), name);
    if (it == header_source.columns.end())
      throw Error(ErrorKind::InvalidArgument, "column '" + name + "' not in " + table_path);
    return int(it - header_source.columns.begin()) + 1;
  };
  const int cx = column(x), cy = column(y);
  std::ostringstream s;
  s << "set datafile separator ','\n"
    << "set key off\n"
    << "set xlabel '" << x << "'\n"
    << "set ylabel '" << y << "'\n";
  if (log_y) s << "set logscale y\n";
  s << "plot '" << table_path << "' every ::1 using " << cx << ":" << cy << " with linespoints\n";
  return s.str();
}

std::string version() { return std::string("c0lab ") + C0LAB_VERSION; }

}  // namespace c0lab::cli
