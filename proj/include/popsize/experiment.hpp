#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "popsize/apga.hpp"
#include "popsize/config.hpp"
#include "popsize/gavaps.hpp"
#include "popsize/parameterless.hpp"
#include "popsize/problems.hpp"
#include "popsize/run.hpp"
#include "popsize/tga.hpp"

namespace popsize {

using AnyProblem = std::variant<OneMax, MultimodalLandscape, TrapConcat>;

inline AnyProblem make_problem(const ProblemSpec& spec) {
  switch (spec.family) {
    case ProblemFamily::onemax:
      return OneMax(spec.length);
    case ProblemFamily::multimodal: {
      if (!spec.instance_file.empty()) return read_instance(spec.instance_file);
      Rng rng(spec.instance_seed);
      return generate_multimodal(spec.peaks, spec.length, spec.scheme, rng);
    }
    case ProblemFamily::trap:
      return TrapConcat(spec.trap_m, spec.trap_k, spec.trap_d);
  }
  throw ConfigError("unknown problem family");
}

inline std::string problem_name(const AnyProblem& p) {
  return std::visit([](const auto& q) { return q.name(); }, p);
}

template <FitnessFunction P>
RunRecord run_seeded(const ExperimentConfig& cfg, const P& problem, std::uint64_t seed, TraceSink* trace) {
  StopCondition stop;
  stop.max_evals = cfg.max_evals;
  switch (cfg.algorithm) {
    case Algorithm::apga: {
      Apga<P> engine(problem, cfg.apga, seed);
      return engine.run(stop, trace);
    }
    case Algorithm::gavaps: {
      Gavaps<P> engine(problem, cfg.gavaps, seed);
      return engine.run(stop, trace);
    }
    case Algorithm::tga: {
      Tga<P> engine(problem, cfg.tga, seed);
      return engine.run(stop, trace);
    }
    case Algorithm::parameterless: {
      ParameterlessGa<P> engine(problem, cfg.parameterless, seed);
      return engine.run(stop, trace);
    }
  }
  throw ConfigError("unknown algorithm");
}

/// Executes run `run_index` of the experiment with its derived seed.
inline RunRecord run_single(const ExperimentConfig& cfg, const AnyProblem& problem, std::size_t run_index,
                            TraceSink* trace = nullptr) {
  const std::uint64_t seed = derive_seed(cfg.master_seed, run_index);
  return std::visit([&](const auto& p) { return run_seeded(cfg, p, seed, trace); }, problem);
}

struct MetricsSummary {
  std::string algorithm;
  std::string problem;
  std::size_t runs = 0;
  std::size_t successes = 0;
  double sr = 0.0;
  double mbf = 0.0;
  std::optional<double> aes;
  std::optional<double> aps;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<RunRecord> records;
};

/// Deterministic fold of per-run records in run-index order.
inline MetricsSummary summarize(const std::vector<RunRecord>& records) {
  MetricsSummary s;
  s.runs = records.size();
  s.records = records;
  double best_sum = 0.0;
  double evals_sum = 0.0;
  double size_sum = 0.0;
  for (const auto& r : records) {
    best_sum += r.best_fitness;
    if (r.success) {
      ++s.successes;
      evals_sum += static_cast<double>(r.evaluations);
      size_sum += static_cast<double>(r.success_size);
    }
  }
  if (s.runs > 0) {
    s.sr = static_cast<double>(s.successes) / static_cast<double>(s.runs);
    s.mbf = best_sum / static_cast<double>(s.runs);
  }
  if (s.successes > 0) {
    s.aes = evals_sum / static_cast<double>(s.successes);
    s.aps = size_sum / static_cast<double>(s.successes);
  }
  return s;
}

/// Runs the experiment, optionally in parallel. Run `i` always uses
/// derive_seed(master_seed, i), and aggregation is in index order, so the
/// thread count never changes the result. `trace` (if given) records run 0.
inline MetricsSummary run_experiment(const ExperimentConfig& cfg, TraceSink* trace = nullptr) {
  const AnyProblem problem = make_problem(cfg.problem);
  std::vector<RunRecord> records(cfg.runs);
  unsigned threads = cfg.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : cfg.threads;
  if (threads > cfg.runs) threads = static_cast<unsigned>(cfg.runs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < cfg.runs; i = next++) {
        records[i] = run_single(cfg, problem, i, i == 0 ? trace : nullptr);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = cfg.runs;
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  MetricsSummary s = summarize(records);
  s.algorithm = to_string(cfg.algorithm);
  s.problem = problem_name(problem);
  s.seed = cfg.master_seed;
  s.config_hash = cfg.config_hash;
  return s;
}

}  // namespace popsize
