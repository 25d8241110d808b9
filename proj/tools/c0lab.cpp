#include <filesystem>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "c0lab/cli.hpp"

namespace fs = std::filesystem;
using namespace c0lab;

namespace {

struct Common {
  std::string out = ".";
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tolerances;
  bool timings = false;

  cli::RunOptions options() const {
    cli::RunOptions o;
    o.out_dir = out;
    o.format = format;
    o.timings = timings;
    o.seed = seed;
    cli::Tolerances check;
    for (const auto& t : tolerances) {
      o.tolerance_overrides.push_back(cli::parse_tolerance(t));
      check.set(o.tolerance_overrides.back().first, o.tolerance_overrides.back().second);
    }
    return o;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", c.seed, "Override every seed in the scenario");
  cmd->add_option("--tol", c.tolerances, "Tighten a tolerance: name=value")->take_all();
  cmd->add_flag("--timings", c.timings, "Include wall-clock times in reports");
}

ZeroSet load_zeros(const std::string& path) {
  const Json j = read_json_file(path);
  return zeroset_from_json(JsonReader(j, "$"));
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

int finish(const std::vector<cli::RunOutcome>& outcomes) {
  int code = cli::Success;
  for (const auto& o : outcomes) {
    for (const auto& f : o.files) std::cout << f << '\n';
    if (o.report.contains("error")) std::cerr << "error: " << o.report["error"]["message"].get<std::string>() << '\n';
    if (o.report.contains("stages"))
      for (const auto& [stage, value] : o.report["stages"].items())
        if (value.contains("error")) std::cerr << stage << ": " << value["error"]["message"].get<std::string>() << '\n';
    code = std::max(code, o.exit_code);
  }
  return code;
}

int single_stage(const std::string& stage, const std::string& zeros_path, Common& common,
                 const std::function<void(cli::Scenario&)>& configure) {
  cli::Scenario s;
  s.name = stem(zeros_path);
  s.zeros = load_zeros(zeros_path);
  s.pipeline = {stage};
  configure(s);
  return finish({cli::run_scenario(s, common.options())});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments with Blaschke products, model spaces and similarity certificates", "c0lab"};
  app.set_version_flag("--version", cli::version());
  app.require_subcommand(1);

  std::string spec_path, out_path, zeros_path;
  std::optional<std::uint64_t> gen_seed;
  auto* gen = app.add_subcommand("generate", "Write a zero set from a sequence spec");
  gen->add_option("--scenario", spec_path, "Sequence spec or scenario JSON")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", out_path, "Zero set file")->required();
  gen->add_option("--seed", gen_seed, "Override the sequence seed");

  Common analyze_opts;
  int exhaustive_limit = 12;
  auto* analyze = app.add_subcommand("analyze", "Separation constant, pseudo-distances, interpolation constant");
  analyze->add_option("zeros", zeros_path, "Zero set file")->required()->check(CLI::ExistingFile);
  analyze->add_option("--exhaustive-limit", exhaustive_limit, "Largest n for the exhaustive subset sweep")
      ->check(CLI::Range(0, 12));
  add_common(analyze, analyze_opts);

  Common similar_opts;
  std::vector<int> multiplicities;
  double condition = 1;
  std::string conjugator = "scaled";
  auto* similar = app.add_subcommand("similar", "Certified similarity to the Jordan model");
  similar->add_option("zeros", zeros_path, "Zero set file")->required()->check(CLI::ExistingFile);
  similar->add_option("--multiplicities", multiplicities, "Multiplicity pattern, cycled over the zeros")
      ->delimiter(',');
  similar->add_option("--condition", condition, "Condition number of the random conjugation")
      ->check(CLI::Range(1.0, 1e12));
  similar->add_option("--conjugator", conjugator, "Conjugator kind")->check(CLI::IsMember({"scaled", "rotated"}));
  add_common(similar, similar_opts);

  Common sweep_opts;
  std::optional<int> budget;
  auto* sweep = app.add_subcommand("sweep", "Divisor sweep and adversarial construction");
  sweep->add_option("zeros", zeros_path, "Zero set file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--budget", budget, "Stage budget of the adversarial construction")->check(CLI::NonNegativeNumber);
  add_common(sweep, sweep_opts);

  Common run_opts;
  std::vector<std::string> scenario_paths;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "Run scenario files");
  run->add_option("--scenario", scenario_paths, "Scenario file (repeatable)")->required()->check(CLI::ExistingFile);
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  add_common(run, run_opts);

  std::string table_path, x_col, y_col, script_out;
  bool log_y = false;
  auto* plot = app.add_subcommand("emit-gnuplot-script", "Write a gnuplot script for an emitted CSV table");
  plot->add_option("--table", table_path, "CSV table")->required()->check(CLI::ExistingFile);
  plot->add_option("--x", x_col, "Column for the x axis")->required();
  plot->add_option("--y", y_col, "Column for the y axis")->required();
  plot->add_option("--out", script_out, "Script file (stdout when omitted)");
  plot->add_flag("--log-y", log_y, "Logarithmic y axis");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const Json j = read_json_file(spec_path);
      const JsonReader r(j, "$");
      SequenceSpec spec;
      if (r.has("sequence")) {
        const auto s = cli::scenario_from_json(r);
        spec = *s.sequence;
        if (!s.multiplicities.empty()) spec.multiplicity_pattern = s.multiplicities;
      } else {
        if (r.has("schema") && r.at("schema").string() != schema::sequence)
          throw schema_error("$.schema", "expected '" + std::string(schema::sequence) + "'");
        spec = sequence_from_json(r);
      }
      if (gen_seed) spec.seed = *gen_seed;
      Json out = zeroset_to_json(generate(spec));
      out["sequence"] = sequence_to_json(spec);
      write_file_atomic(out_path, out.dump(2) + "\n");
      std::cout << out_path << '\n';
      return cli::Success;
    }
    if (*analyze)
      return single_stage("analyze", zeros_path, analyze_opts, [&](cli::Scenario& s) { s.exhaustive_limit = exhaustive_limit; });
    if (*similar)
      return single_stage("similar", zeros_path, similar_opts, [&](cli::Scenario& s) {
        s.multiplicities = multiplicities;
        if (condition > 1) s.perturbation = cli::Perturbation{condition, similar_opts.seed.value_or(0),
                                                              conjugator_kind_from_string(conjugator)};
      });
    if (*sweep)
      return single_stage("sweep", zeros_path, sweep_opts, [&](cli::Scenario& s) { s.adversarial_budget = budget; });
    if (*run) {
      std::vector<cli::Scenario> scenarios;
      for (const auto& p : scenario_paths)
        for (auto& s : cli::load_scenarios(p)) scenarios.push_back(std::move(s));
      return finish(cli::run_batch(scenarios, run_opts.options(), jobs));
    }
    if (*plot) {
      const std::string script = cli::gnuplot_script(table_path, cli::read_table(table_path), x_col, y_col, log_y);
      if (script_out.empty())
        std::cout << script;
      else
        write_file_atomic(script_out, script);
      return cli::Success;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidArgument ? cli::Usage : cli::StageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::StageError;
  }
  return cli::Success;
}
