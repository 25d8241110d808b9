#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "c0lab/random.hpp"
#include "c0lab/serialize.hpp"

namespace c0lab::cli {

enum ExitCode : int { Success = 0, Usage = 1, Warnings = 2, StageError = 3 };

/// C0LAB_LOG: "quiet" (default), "info" or "debug".
enum class LogLevel { Quiet, Info, Debug };
LogLevel log_level();
void log(LogLevel level, const std::string& message);

struct Perturbation {
  double condition = 1;
  std::uint64_t seed = 0;
  ConjugatorKind kind = ConjugatorKind::Scaled;
};

/// Overridable tolerances. Overrides may only tighten the defaults.
struct Tolerances {
  double annihilation = tol::annihilation;
  double residual = 1e-8;

  void set(const std::string& name, double value);
  Json to_json() const;
};
/// Parses "name=value".
std::pair<std::string, double> parse_tolerance(const std::string& arg);

inline const std::vector<std::string> known_stages = {"analyze", "similar", "sweep"};

struct Scenario {
  std::string name = "scenario";
  std::optional<SequenceSpec> sequence;
  std::optional<ZeroSet> zeros;                 // explicit zeros instead of a sequence
  std::vector<int> multiplicities;              // cycled pattern, overrides the sequence's
  std::optional<Perturbation> perturbation;
  std::vector<std::string> pipeline = known_stages;
  Tolerances tolerances;
  std::optional<int> adversarial_budget;        // defaults to the number of zeros
  int exhaustive_limit = 12;

  ZeroSet zero_set() const;
  Json to_json() const;
};

Scenario scenario_from_json(const JsonReader& r);
/// A scenario file holds one scenario object or {"scenarios": [...]}.
std::vector<Scenario> load_scenarios(const std::string& path);

/// Aligned-column CSV.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
};

/// Shortest round-trip decimal form.
std::string format_number(double x);

struct StageOutput {
  Json json;
  std::map<std::string, Table> tables;
  std::map<std::string, Json> certificates;  // stage-tagged certificate files
  std::vector<std::string> warnings;
};

StageOutput analyze(const ZeroSet& zeros, int exhaustive_limit = 12);
StageOutput similar(const ZeroSet& zeros, const std::optional<Perturbation>& perturbation,
                    const Tolerances& tolerances);
StageOutput sweep(const ZeroSet& zeros, std::optional<int> budget);

struct RunOptions {
  std::string out_dir = ".";
  std::string format = "json";  // json or csv
  bool timings = false;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, double>> tolerance_overrides;
};

struct RunOutcome {
  int exit_code = Success;
  Json report;
  std::vector<std::string> files;
};

/// Runs the scenario's pipeline and writes its report, tables and
/// certificates under out_dir. Stage errors are captured in the report.
RunOutcome run_scenario(Scenario scenario, const RunOptions& options);

/// Independent scenarios on `jobs` workers; outcomes in input order.
std::vector<RunOutcome> run_batch(const std::vector<Scenario>& scenarios, const RunOptions& options, int jobs);

/// Gnuplot script plotting column y against column x of an emitted table.
std::string gnuplot_script(const std::string& table_path, const Table& header_source, const std::string& x,
                           const std::string& y, bool log_y);
Table read_table(const std::string& path);

std::string version();

}  // namespace c0lab::cli
