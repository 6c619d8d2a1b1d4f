#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "popsize/core.hpp"
#include "popsize/operators.hpp"
#include "popsize/run.hpp"
#include "popsize/tga.hpp"

namespace popsize {

enum class PlgaMode { generational, steady_state };

inline const char* to_string(PlgaMode mode) {
  return mode == PlgaMode::generational ? "generational" : "steady_state";
}

/// m-ary preference schedule over population levels (level i has size
/// N0 * 2^i).
///
/// The run order is the recursive expansion S_0 = [0], S_i = S_{i-1} repeated
/// m times followed by i; with m = 2 this starts 0 0 1 0 0 1 2 0 0 1 0 0 1 2 3.
/// It is driven by one digit per level counting runs of that level since the
/// last run of the next level up. A digit equal to m means the next level is
/// due; otherwise level 0 is due.
///
/// Eliminated levels stay in the counter and are stepped over as no-op runs,
/// so surviving levels keep exactly the share they would have had.
class GenerationSchedule {
 public:
  struct Target {
    std::size_t level = 0;
    bool spawn = false;  ///< the due level has never existed
  };

  explicit GenerationSchedule(unsigned preference) : m_(preference) {
    if (preference < 2) throw ConfigError("parameterless.m must be >= 2");
    digits_.assign(1, 0);
  }

  unsigned preference() const noexcept { return m_; }
  std::size_t spawned() const noexcept { return live_.size(); }
  bool live(std::size_t level) const noexcept { return level < live_.size() && live_[level]; }
  std::uint64_t runs(std::size_t level) const noexcept { return level < runs_.size() ? runs_[level] : 0; }

  Target peek() const {
    auto digits = digits_;
    const std::size_t level = resolve(digits);
    return {level, level >= live_.size()};
  }

  void record_spawn() {
    if (peek().level != live_.size()) throw std::logic_error("schedule: spawn requested before it is due");
    live_.push_back(1);
    runs_.push_back(0);
    digits_.push_back(0);
  }

  void record_run(std::size_t level) {
    const std::size_t due = resolve(digits_);
    if (due != level || !live(level)) throw std::logic_error("schedule: run of level " + std::to_string(level) +
                                                             " but level " + std::to_string(due) + " is due");
    advance(digits_, level);
    ++runs_[level];
  }

  void retire(std::size_t level) {
    if (!live(level)) throw std::logic_error("schedule: retiring a level that is not live");
    live_[level] = 0;
  }

 private:
  std::size_t due(const std::vector<unsigned>& digits) const noexcept {
    for (std::size_t j = 0; j < live_.size(); ++j) {
      if (digits[j] == m_) return j + 1;
    }
    return 0;
  }

  static void advance(std::vector<unsigned>& digits, std::size_t level) {
    ++digits[level];
    if (level > 0) digits[level - 1] = 0;
  }

  /// Steps over eliminated levels and returns the first live or new level due.
  std::size_t resolve(std::vector<unsigned>& digits) const {
    while (true) {
      const std::size_t t = due(digits);
      if (t >= live_.size() || live_[t]) return t;
      if (t > 0) {
        advance(digits, t);
        continue;
      }
      // Levels [0, k) are all dead: the whole no-op stretch ends with
      // level k-1's digit full and every digit below it reset.
      std::size_t k = 1;
      while (k < live_.size() && !live_[k]) ++k;
      std::fill(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(k - 1), 0U);
      digits[k - 1] = m_;
    }
  }

  unsigned m_;
  std::vector<unsigned> digits_;
  std::vector<char> live_;
  std::vector<std::uint64_t> runs_;
};

/// Consistency of per-level generation counts: for live levels a < b,
/// m^(b-a) * g_b <= g_a <= m^(b-a) * (g_b + 1).
inline bool schedule_consistent(const GenerationSchedule& s) {
  const std::size_t n = s.spawned();
  for (std::size_t a = 0; a < n; ++a) {
    if (!s.live(a)) continue;
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!s.live(b)) continue;
      unsigned __int128 factor = 1;
      for (std::size_t r = a; r < b && factor < (static_cast<unsigned __int128>(1) << 64); ++r) factor *= s.preference();
      const unsigned __int128 ga = s.runs(a);
      const unsigned __int128 gb = s.runs(b);
      if (ga < factor * gb || ga > factor * (gb + 1)) return false;
    }
  }
  return true;
}

/// For average fitnesses listed in increasing population size, flags every
/// entry that some strictly larger entry beats on average fitness.
inline std::vector<char> dominated_mask(std::span<const double> avg_by_size) {
  std::vector<char> doomed(avg_by_size.size(), 0);
  double best_larger = -std::numeric_limits<double>::infinity();
  for (std::size_t i = avg_by_size.size(); i-- > 0;) {
    if (best_larger > avg_by_size[i]) doomed[i] = 1;
    best_larger = std::max(best_larger, avg_by_size[i]);
  }
  return doomed;
}

struct ParameterlessConfig {
  OperatorConfig ops{0.9, -1.0, 4};
  std::size_t base_size = 4;
  unsigned preference = 4;
  PlgaMode mode = PlgaMode::steady_state;

  void validate() const {
    ops.validate();
    if (base_size < 2) throw ConfigError("parameterless.n0 must be >= 2");
    if (preference < 2) throw ConfigError("parameterless.m must be >= 2");
  }
};

struct LedgerEntry {
  Population pop;
  std::size_t size = 0;
  std::size_t level = 0;
  std::uint64_t generations = 0;
  double avg_fitness = 0.0;
  double max_fitness = 0.0;
  std::uint64_t evaluations = 0;
};

struct ScheduleAction {
  enum class Kind { run_generation, spawn_new };
  Kind kind = Kind::spawn_new;
  std::size_t index = 0;  ///< ledger position (run) or position the new entry will take (spawn)
  std::size_t level = 0;
  std::size_t size = 0;
};

/// Parameter-less GA: an unbounded, size-ordered collection of populations
/// with doubling sizes. Smaller populations get m generations for each
/// generation of the next larger one; a population is dropped once a larger
/// one has a higher average fitness, or (without mutation) once it has
/// converged to copies of one individual.
template <FitnessFunction P>
class ParameterlessGa {
 public:
  ParameterlessGa(const P& problem, const ParameterlessConfig& cfg, std::uint64_t seed)
      : cfg_(cfg), ctx_(problem, seed), schedule_(cfg.preference) {
    cfg_.validate();
  }

  ScheduleAction next_action() const {
    const auto target = schedule_.peek();
    ScheduleAction a;
    a.level = target.level;
    a.size = size_of(target.level);
    if (target.spawn) {
      a.kind = ScheduleAction::Kind::spawn_new;
      a.index = entries_.size();
    } else {
      a.kind = ScheduleAction::Kind::run_generation;
      a.index = index_of(target.level);
    }
    return a;
  }

  /// Appends the next, doubled population (size N0 for an empty history).
  void spawn_population() {
    schedule_.record_spawn();
    LedgerEntry e;
    e.level = schedule_.spawned() - 1;
    e.size = size_of(e.level);
    const std::uint64_t before = ctx_.evaluations();
    e.pop.reserve(e.size + 2);
    for (std::size_t i = 0; i < e.size; ++i) e.pop.push_back(ctx_.make_random());
    e.evaluations = ctx_.evaluations() - before;
    refresh(e);
    note_rollup(e, e.evaluations);
    entries_.push_back(std::move(e));
  }

  /// One schedule generation of entry `index`. Steady-state mode performs
  /// ceil(N/2) two-offspring iterations, the equivalent of one generation.
  /// Returns early if `stop` is met part-way (steady-state mode only).
  void run_one_generation(std::size_t index, const StopCondition* stop = nullptr) {
    if (index >= entries_.size()) throw std::logic_error("run_one_generation: ledger index out of range");
    LedgerEntry& e = entries_[index];
    const std::uint64_t before = ctx_.evaluations();
    if (cfg_.mode == PlgaMode::steady_state) {
      const std::size_t iterations = (e.size + 1) / 2;
      for (std::size_t i = 0; i < iterations; ++i) {
        steady_state_iteration(e.pop, ctx_, cfg_.ops);
        if (stop && should_stop(*stop)) break;
      }
    } else {
      Rng& rng = ctx_.rng();
      Population next;
      next.reserve(e.size + 1);
      while (next.size() < e.size) {
        const std::size_t a = tournament_index(e.pop, cfg_.ops.tournament_k, rng);
        const std::size_t b = tournament_index(e.pop, cfg_.ops.tournament_k, rng);
        auto kids = breed(e.pop[a].genome, e.pop[b].genome, cfg_.ops, rng);
        next.push_back(ctx_.make(std::move(kids.first)));
        if (next.size() < e.size) next.push_back(ctx_.make(std::move(kids.second)));
      }
      e.pop = std::move(next);
    }
    ++e.generations;
    const std::uint64_t spent = ctx_.evaluations() - before;
    e.evaluations += spent;
    refresh(e);
    note_rollup(e, spent);
  }

  /// Drops every population beaten on average fitness by a strictly larger
  /// one and, when pm = 0, every converged population. Returns the sizes
  /// removed, smallest first.
  std::vector<std::size_t> eliminate_sweep() {
    const bool drop_converged = cfg_.ops.mutation_rate(ctx_.problem().length()) == 0.0;
    std::vector<double> avg(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) avg[i] = entries_[i].avg_fitness;
    std::vector<char> doomed = dominated_mask(avg);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (drop_converged && converged(entries_[i].pop)) doomed[i] = 1;
    }
    std::vector<std::size_t> removed;
    std::size_t out = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (doomed[i]) {
        removed.push_back(entries_[i].size);
        schedule_.retire(entries_[i].level);
        continue;
      }
      if (out != i) entries_[out] = std::move(entries_[i]);
      ++out;
    }
    entries_.resize(out);
    return removed;
  }

  /// Performs `a`, which must be the action currently due, without an
  /// elimination sweep.
  void apply(const ScheduleAction& a, const StopCondition* stop = nullptr) {
    if (a.kind == ScheduleAction::Kind::spawn_new) {
      spawn_population();
    } else {
      schedule_.record_run(a.level);
      run_one_generation(a.index, stop);
    }
  }

  /// Removes ledger entry `index` and retires its level from the schedule.
  void eliminate(std::size_t index) {
    if (index >= entries_.size()) throw std::logic_error("eliminate: ledger index out of range");
    schedule_.retire(entries_[index].level);
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(index));
  }

  /// Executes the next scheduled action followed by an elimination sweep.
  ScheduleAction step(const StopCondition* stop = nullptr, std::vector<std::size_t>* eliminated = nullptr) {
    const ScheduleAction a = next_action();
    apply(a, stop);
    ++steps_;
    if (ctx_.first_hit() != 0 && success_size_ == 0) success_size_ = a.size;
    auto removed = eliminate_sweep();
    if (eliminated) *eliminated = std::move(removed);
    return a;
  }

  RunRecord run(const StopCondition& stop, TraceSink* trace = nullptr) {
    std::vector<std::size_t> removed;
    auto sample = [&] {
      if (!trace) return;
      TraceSample s;
      s.evaluations = ctx_.evaluations();
      s.generation = steps_;
      s.population_size = live_individuals();
      s.min_size = entries_.empty() ? 0 : entries_.front().size;
      s.max_size = entries_.empty() ? 0 : entries_.back().size;
      trace->samples.push_back(s);
    };
    sample();
    while (!should_stop(stop) && (stop.max_steps == 0 || steps_ < stop.max_steps)) {
      const ScheduleAction a = step(&stop, &removed);
      if (trace && trace->record_events) {
        if (a.kind == ScheduleAction::Kind::spawn_new) {
          trace->events.push_back({TraceEvent::Kind::spawn, ctx_.evaluations(), steps_, a.size});
        }
        for (auto size : removed) {
          trace->events.push_back({TraceEvent::Kind::elimination, ctx_.evaluations(), steps_, size});
        }
      }
      sample();
    }
    RunRecord rec;
    rec.success = ctx_.first_hit() != 0 && ctx_.first_hit() <= stop.max_evals;
    rec.outcome = rec.success ? Outcome::success : Outcome::budget;
    rec.success_size = rec.success ? success_size_ : 0;
    rec.total_evaluations = ctx_.evaluations();
    rec.evaluations = rec.success ? ctx_.first_hit() : ctx_.evaluations();
    rec.best_fitness = ctx_.best_seen();
    if (!entries_.empty()) {
      rec.best_fitness = entries_.front().max_fitness;
      for (const auto& e : entries_) rec.best_fitness = std::max(rec.best_fitness, e.max_fitness);
    }
    rec.steps = steps_;
    rec.final_size = entries_.empty() ? 0 : entries_.back().size;
    if (trace) trace->rollups = rollups_;
    return rec;
  }

  const std::vector<LedgerEntry>& entries() const noexcept { return entries_; }
  const GenerationSchedule& schedule() const noexcept { return schedule_; }
  const std::vector<PopulationRollup>& rollups() const noexcept { return rollups_; }
  std::uint64_t evaluations() const noexcept { return ctx_.evaluations(); }
  std::uint64_t steps() const noexcept { return steps_; }
  const ParameterlessConfig& config() const noexcept { return cfg_; }

  std::size_t live_individuals() const noexcept {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.pop.size();
    return n;
  }

 private:
  std::size_t size_of(std::size_t level) const noexcept { return cfg_.base_size << level; }

  std::size_t index_of(std::size_t level) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].level == level) return i;
    }
    throw std::logic_error("parameterless: scheduled level is not in the ledger");
  }

  bool should_stop(const StopCondition& stop) const noexcept {
    return (stop.stop_at_optimum && ctx_.first_hit() != 0) || ctx_.evaluations() >= stop.max_evals;
  }

  static void refresh(LedgerEntry& e) {
    double sum = 0.0;
    double mx = e.pop.empty() ? 0.0 : e.pop.front().fitness;
    for (const auto& ind : e.pop) {
      sum += ind.fitness;
      mx = std::max(mx, ind.fitness);
    }
    e.avg_fitness = e.pop.empty() ? 0.0 : sum / static_cast<double>(e.pop.size());
    e.max_fitness = mx;
  }

  static bool converged(const Population& pop) {
    for (std::size_t i = 1; i < pop.size(); ++i) {
      if (!(pop[i].genome == pop[0].genome)) return false;
    }
    return true;
  }

  void note_rollup(const LedgerEntry& e, std::uint64_t spent) {
    if (rollups_.size() <= e.level) rollups_.resize(e.level + 1);
    auto& r = rollups_[e.level];
    if (r.size == 0) r.max_fitness = e.max_fitness;
    r.size = e.size;
    r.evaluations += spent;
    r.max_fitness = std::max(r.max_fitness, e.max_fitness);
  }

  ParameterlessConfig cfg_;
  RunContext<P> ctx_;
  GenerationSchedule schedule_;
  std::vector<LedgerEntry> entries_;
  std::vector<PopulationRollup> rollups_;
  std::uint64_t steps_ = 0;
  std::size_t success_size_ = 0;
};

}  // namespace popsize
