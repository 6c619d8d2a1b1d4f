#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace popsize {

/// Stop when the problem optimum has been produced or the evaluation budget
/// is spent, whichever comes first. Budgets are checked at step boundaries,
/// so a step that starts under budget completes.
struct StopCondition {
  bool stop_at_optimum = true;
  std::uint64_t max_evals = 1'000'000;
  /// Extra cap on engine steps (generations, schedule actions). 0 = none.
  std::uint64_t max_steps = 0;
};

enum class Outcome { success, budget, extinction, explosion };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::success: return "success";
    case Outcome::budget: return "budget";
    case Outcome::extinction: return "extinction";
    case Outcome::explosion: return "explosion";
  }
  return "?";
}

struct TraceSample {
  std::uint64_t evaluations = 0;
  std::uint64_t generation = 0;
  std::size_t population_size = 0;
  std::size_t min_size = 0;  ///< parameter-less GA only
  std::size_t max_size = 0;  ///< parameter-less GA only
};

struct TraceEvent {
  enum class Kind { death, spawn, elimination };
  Kind kind = Kind::death;
  std::uint64_t evaluations = 0;
  std::uint64_t generation = 0;
  std::size_t count = 0;  ///< individuals that died, or the size spawned/eliminated
};

/// Per-population-size totals of one parameter-less run.
struct PopulationRollup {
  std::size_t size = 0;
  std::uint64_t evaluations = 0;
  double max_fitness = 0.0;
};

/// Collects one sample per engine step plus notable events.
struct TraceSink {
  std::vector<TraceSample> samples;
  std::vector<TraceEvent> events;
  std::vector<PopulationRollup> rollups;
  bool record_events = true;
};

struct RunRecord {
  Outcome outcome = Outcome::budget;
  bool success = false;
  /// Evaluation index of the first optimal individual on success; total spent otherwise.
  std::uint64_t evaluations = 0;
  std::uint64_t total_evaluations = 0;
  double best_fitness = 0.0;
  std::uint64_t steps = 0;
  std::size_t final_size = 0;
  /// Population size at the moment of success (0 without success).
  std::size_t success_size = 0;
};

}  // namespace popsize
