// popsize: experiment runner for the adaptive population-sizing GAs.
//
//   popsize run    --config table1.cfg --out summary.csv
//   popsize trace  --algorithm apga --problem multimodal --min-lt 100 --max-lt 100
//   popsize sweep  --config base.cfg --grid problem.peaks=1,50,100
//   popsize verify
//
// Exit codes: 0 ok, 1 property violation, 2 usage/configuration/I-O error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "popsize/config.hpp"
#include "popsize/experiment.hpp"
#include "popsize/output.hpp"
#include "popsize/verify.hpp"

namespace {

using namespace popsize;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kConfigError = 2;

struct CommonFlags {
  std::string config;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;  // config key -> value
  std::optional<std::string> p0;
  std::string out;
  std::string trace_out;
  std::string rollup_out;
};

void add_common(CLI::App& cmd, CommonFlags& f) {
  cmd.add_option("-c,--config", f.config, "Experiment configuration file")->check(CLI::ExistingFile);
  cmd.add_option("--set", f.sets, "Override a configuration key: section.key=value")->take_all();
  struct Mirror {
    const char* flag;
    const char* key;
    const char* help;
  };
  static const Mirror mirrors[] = {
      {"--algorithm", "experiment.algorithm", "apga | gavaps | tga | parameterless"},
      {"--problem", "problem.family", "onemax | multimodal | trap"},
      {"--peaks", "problem.peaks", "Number of peaks (multimodal)"},
      {"--length", "problem.length", "Genome length (onemax, multimodal)"},
      {"--scheme", "problem.scheme", "Peak heights: equal | linear:<h_min>"},
      {"--instance-file", "problem.instance_file", "Frozen multimodal instance"},
      {"--instance-seed", "problem.instance_seed", "Seed of the generated multimodal instance"},
      {"--trap-m", "problem.m", "Number of trap blocks"},
      {"--trap-k", "problem.k", "Bits per trap block"},
      {"--trap-d", "problem.d", "Trap fitness signal"},
      {"--min-lt", "lifetime.min_lt", "Minimum lifetime (apga, gavaps)"},
      {"--max-lt", "lifetime.max_lt", "Maximum lifetime (apga, gavaps)"},
      {"--max-evals", "experiment.max_evals", "Evaluation budget per run"},
      {"--runs", "experiment.runs", "Independent runs"},
      {"--seed", "experiment.seed", "Master seed"},
      {"--threads", "experiment.threads", "Worker threads (0 = all cores)"},
      {"--mode", "parameterless.mode", "steady_state | generational"},
      {"--n0", "parameterless.n0", "Smallest population (parameterless)"},
      {"--preference", "parameterless.m", "Preference m (parameterless)"},
      {"--rho", "gavaps.rho", "Reproduction ratio (gavaps)"},
      {"--tga-n", "tga.n", "Population size (tga)"},
  };
  for (const auto& m : mirrors) {
    cmd.add_option_function<std::string>(
        m.flag, [&f, key = std::string(m.key)](const std::string& v) { f.flags[key] = v; }, m.help);
  }
  cmd.add_option_function<std::string>(
      "--p0", [&f](const std::string& v) { f.p0 = v; }, "Initial population size (apga, gavaps)");
  cmd.add_option("-o,--out", f.out, "Summary CSV path");
  cmd.add_option("--trace-out", f.trace_out, "Trace CSV path");
  cmd.add_option("--rollup-out", f.rollup_out, "Per-population rollup CSV path (parameterless)");
}

std::string output_dir() {
  const char* dir = std::getenv("POPSIZE_OUTPUT_DIR");
  return dir && *dir ? dir : ".";
}

std::string default_path(const std::string& name) {
  const std::filesystem::path dir(output_dir());
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);  // a failure surfaces when the file is opened
  return (dir / name).string();
}

ConfigSource build_source(const CommonFlags& f) {
  ConfigSource src = f.config.empty() ? ConfigSource{} : ConfigSource::load(f.config);
  for (const auto& [key, value] : f.flags) src.set(key, value);
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + s + "'");
    src.set(s.substr(0, eq), s.substr(eq + 1));
  }
  if (f.p0) {
    auto it = src.values().find("experiment.algorithm");
    const std::string alg = it == src.values().end() ? "" : it->second;
    if (alg == "apga" || alg == "gavaps") {
      src.set(alg + ".p0", *f.p0);
    } else {
      throw ConfigError("--p0 needs experiment.algorithm set to apga or gavaps");
    }
  }
  if (!f.out.empty()) src.set("output.csv", f.out);
  if (!f.trace_out.empty()) src.set("output.trace", f.trace_out);
  if (!f.rollup_out.empty()) src.set("output.rollup", f.rollup_out);
  return src;
}

std::string indexed(const std::string& path, std::size_t i, std::size_t n) {
  if (n == 1) return path;
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + "." + std::to_string(i) + p.extension().string())).string();
}

int execute(const std::vector<ExperimentConfig>& points) {
  std::vector<MetricsSummary> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& cfg = points[i];
    TraceSink trace;
    const bool tracing = !cfg.trace_path.empty();
    rows.push_back(run_experiment(cfg, tracing ? &trace : nullptr));
    if (tracing) {
      const bool multi = cfg.algorithm == Algorithm::parameterless;
      emit_trace(trace, multi, cfg.config_hash, indexed(cfg.trace_path, i, points.size()));
      if (multi && !cfg.rollup_path.empty()) {
        emit_rollups(trace, cfg.config_hash, indexed(cfg.rollup_path, i, points.size()));
      }
    }
  }
  const std::string csv = points.front().csv_path.empty() ? default_path("summary.csv") : points.front().csv_path;
  emit_csv(rows, csv);
  emit_metadata(points, csv + ".meta");
  write_summary_csv(std::cout, rows);
  std::cerr << "wrote " << csv << " and " << csv << ".meta\n";
  return kOk;
}

int cmd_trace(const CommonFlags& f, std::size_t run_index) {
  ExperimentConfig cfg = build_source(f).resolve_single();
  if (cfg.trace_path.empty()) cfg.trace_path = default_path("trace.csv");
  const AnyProblem problem = make_problem(cfg.problem);
  TraceSink trace;
  const RunRecord rec = run_single(cfg, problem, run_index, &trace);
  const bool multi = cfg.algorithm == Algorithm::parameterless;
  emit_trace(trace, multi, cfg.config_hash, cfg.trace_path);
  std::string rollup = cfg.rollup_path;
  if (multi) {
    if (rollup.empty()) {
      std::filesystem::path p(cfg.trace_path);
      rollup = (p.parent_path() / (p.stem().string() + ".rollup.csv")).string();
    }
    emit_rollups(trace, cfg.config_hash, rollup);
  }
  emit_metadata({cfg}, cfg.trace_path + ".meta");
  std::cout << "algorithm=" << to_string(cfg.algorithm) << " problem=" << problem_name(problem)
            << " run=" << run_index << " outcome=" << to_string(rec.outcome) << " evaluations=" << rec.evaluations
            << " best=" << rec.best_fitness << " final_size=" << rec.final_size << '\n';
  std::cerr << "wrote " << cfg.trace_path << (multi ? " and " + rollup : "") << '\n';
  return kOk;
}

int cmd_verify(std::size_t seeds, const std::string& config, const std::string& check_csv) {
  VerifyOptions opt;
  opt.seeds = seeds;
  bool ok = true;
  for (const auto& r : run_builtin_checks(opt)) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.detail.empty()) std::cout << " (" << r.detail << ')';
    std::cout << '\n';
    ok = ok && r.passed;
  }
  if (!check_csv.empty()) {
    if (config.empty()) throw ConfigError("verify --check requires --config");
    const auto points = ConfigSource::load(config).expand();
    std::ifstream in(check_csv);
    if (!in) throw ConfigError("cannot open " + check_csv);
    std::string line;
    std::getline(in, line);
    std::size_t row = 0;
    bool match = true;
    while (std::getline(in, line)) {
      const auto pos = line.rfind(',');
      const std::string hash = pos == std::string::npos ? "" : line.substr(pos + 1);
      if (row >= points.size() || hash != points[row].config_hash) match = false;
      ++row;
    }
    if (row != points.size()) match = false;
    std::cout << (match ? "[PASS] " : "[FAIL] ") << "config_hash " << check_csv << '\n';
    ok = ok && match;
  }
  return ok ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive population-size GA experiments"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "Run an experiment configuration");
  add_common(*run, run_flags);

  CommonFlags trace_flags;
  std::size_t run_index = 0;
  auto* trace = app.add_subcommand("trace", "Run one seeded run and write its trace");
  add_common(*trace, trace_flags);
  trace->add_option("--run-index", run_index, "Which run's derived seed to use");

  CommonFlags sweep_flags;
  std::vector<std::string> grid;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid");
  add_common(*sweep, sweep_flags);
  sweep->add_option("--grid", grid, "Grid axis: section.key=v1,v2,...")->take_all();

  std::size_t seeds = 3;
  std::string verify_config;
  std::string verify_csv;
  auto* verify = app.add_subcommand("verify", "Run the built-in property checks");
  verify->add_option("--seeds", seeds, "Seeds per configuration");
  verify->add_option("-c,--config", verify_config, "Configuration whose hashes to check");
  verify->add_option("--check", verify_csv, "Summary CSV to check against --config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return execute(build_source(run_flags).expand());
    if (*trace) return cmd_trace(trace_flags, run_index);
    if (*sweep) {
      ConfigSource src = build_source(sweep_flags);
      for (const auto& axis : grid) {
        const auto eq = axis.find('=');
        if (eq == std::string::npos) throw ConfigError("--grid expects section.key=v1,v2, got '" + axis + "'");
        src.add_sweep(axis.substr(0, eq), detail::split_list(axis.substr(eq + 1)));
      }
      return execute(src.expand());
    }
    if (*verify) return cmd_verify(seeds, verify_config, verify_csv);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
