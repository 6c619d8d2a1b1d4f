#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "popsize/core.hpp"
#include "popsize/lifetime.hpp"
#include "popsize/operators.hpp"
#include "popsize/run.hpp"

namespace popsize {

struct GavapsConfig {
  OperatorConfig ops{};
  LifetimeConfig lifetime{1, 7};
  std::size_t initial_size = 60;
  double rho = 0.4;
  std::size_t size_cap = 100'000;

  void validate() const {
    ops.validate();
    lifetime.validate();
    if (initial_size < 1) throw ConfigError("gavaps.p0 must be >= 1");
    if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("gavaps.rho must lie in (0, 1]");
    if (size_cap < initial_size) throw ConfigError("gavaps.size_cap must be >= gavaps.p0");
  }
};

/// Offspring per generation: round(rho * size), at least 2, rounded up to even.
inline std::size_t gavaps_offspring_count(double rho, std::size_t size) {
  auto n = static_cast<std::size_t>(std::llround(rho * static_cast<double>(size)));
  if (n < 2) n = 2;
  if (n % 2 != 0) ++n;
  return n;
}

/// Generational GA with varying population size. Parents are drawn
/// uniformly; selection pressure comes only from fitness-dependent lifetimes.
template <FitnessFunction P>
class Gavaps {
 public:
  Gavaps(const P& problem, const GavapsConfig& cfg, std::uint64_t seed) : cfg_(cfg), ctx_(problem, seed) {
    cfg_.validate();
    for (std::size_t i = 0; i < cfg_.initial_size; ++i) pop_.push_back(ctx_.make_random());
    const FitStats stats = compute_stats(pop_);
    for (auto& ind : pop_) ind.lifetime = bilinear_lifetime(ind.fitness, stats, cfg_.lifetime);
  }

  StepReport step() {
    ++generation_;
    StepReport report;
    report.before = pop_.size();
    for (auto& ind : pop_) ++ind.age;

    Rng& rng = ctx_.rng();
    const std::size_t n_off = gavaps_offspring_count(cfg_.rho, pop_.size());
    const std::size_t parents = pop_.size();
    for (std::size_t i = 0; i < n_off; i += 2) {
      const std::size_t a = rng.below(parents);
      const std::size_t b = rng.below(parents);
      auto kids = breed(pop_[a].genome, pop_[b].genome, cfg_.ops, rng);
      pop_.push_back(ctx_.make(std::move(kids.first)));
      pop_.push_back(ctx_.make(std::move(kids.second)));
    }
    report.born = n_off;

    const FitStats stats = compute_stats(pop_);
    for (std::size_t i = parents; i < pop_.size(); ++i) {
      pop_[i].lifetime = bilinear_lifetime(pop_[i].fitness, stats, cfg_.lifetime);
    }

    std::size_t out = 0;
    for (std::size_t i = 0; i < pop_.size(); ++i) {
      if (pop_[i].age > pop_[i].lifetime) continue;
      if (out != i) pop_[out] = std::move(pop_[i]);
      ++out;
    }
    report.died = pop_.size() - out;
    pop_.resize(out);
    report.after = out;
    return report;
  }

  RunRecord run(const StopCondition& stop, TraceSink* trace = nullptr) {
    RunRecord rec;
    auto sample = [&] {
      if (trace) trace->samples.push_back({ctx_.evaluations(), generation_, pop_.size(), 0, 0});
    };
    auto note_success = [&] {
      if (ctx_.first_hit() != 0 && rec.success_size == 0) rec.success_size = pop_.size();
    };
    sample();
    note_success();
    Outcome stopped = Outcome::budget;
    while (!(stop.stop_at_optimum && ctx_.first_hit() != 0) && ctx_.evaluations() < stop.max_evals &&
           (stop.max_steps == 0 || generation_ < stop.max_steps)) {
      const StepReport r = step();
      sample();
      if (trace && trace->record_events && r.died > 0) {
        trace->events.push_back({TraceEvent::Kind::death, ctx_.evaluations(), generation_, r.died});
      }
      note_success();
      if (pop_.empty()) {
        stopped = Outcome::extinction;
        break;
      }
      if (pop_.size() > cfg_.size_cap) {
        stopped = Outcome::explosion;
        break;
      }
    }
    rec.success = ctx_.first_hit() != 0 && ctx_.first_hit() <= stop.max_evals;
    rec.outcome = rec.success ? Outcome::success : stopped;
    if (!rec.success) rec.success_size = 0;
    rec.total_evaluations = ctx_.evaluations();
    rec.evaluations = rec.success ? ctx_.first_hit() : ctx_.evaluations();
    rec.best_fitness = pop_.empty() ? ctx_.best_seen() : best_of(pop_).fitness;
    rec.steps = generation_;
    rec.final_size = pop_.size();
    return rec;
  }

  const Population& population() const noexcept { return pop_; }
  std::uint64_t generation() const noexcept { return generation_; }
  std::uint64_t evaluations() const noexcept { return ctx_.evaluations(); }

 private:
  GavapsConfig cfg_;
  RunContext<P> ctx_;
  Population pop_;
  std::uint64_t generation_ = 0;
};

}  // namespace popsize
