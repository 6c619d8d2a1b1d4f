#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "popsize/core.hpp"
#include "popsize/lifetime.hpp"
#include "popsize/operators.hpp"
#include "popsize/run.hpp"

namespace popsize {

struct ApgaConfig {
  OperatorConfig ops{};
  LifetimeConfig lifetime{};
  std::size_t initial_size = 60;

  void validate() const {
    ops.validate();
    lifetime.validate();
    if (initial_size < 2) throw ConfigError("apga.p0 must be >= 2");
  }
};

/// Bookkeeping of one generation: after == before + born - died.
struct StepReport {
  std::size_t before = 0;
  std::size_t born = 0;
  std::size_t died = 0;
  std::size_t after = 0;
};

/// Steady-state GA with adaptive population size. Each generation every
/// member except the current best loses one unit of remaining lifetime, two
/// tournament-selected parents produce two offspring, members whose lifetime
/// ran out are removed, and the offspring receive a bi-linear lifetime.
template <FitnessFunction P>
class Apga {
 public:
  Apga(const P& problem, const ApgaConfig& cfg, std::uint64_t seed) : cfg_(cfg), ctx_(problem, seed) {
    cfg_.validate();
    pop_.reserve(cfg_.initial_size + 2);
    for (std::size_t i = 0; i < cfg_.initial_size; ++i) pop_.push_back(ctx_.make_random());
    const FitStats stats = compute_stats(pop_);
    for (auto& ind : pop_) ind.rlt = bilinear_lifetime(ind.fitness, stats, cfg_.lifetime);
  }

  StepReport step() {
    ++generation_;
    StepReport report;
    report.before = pop_.size();

    const std::size_t best = best_index(pop_);
    for (std::size_t i = 0; i < pop_.size(); ++i) {
      ++pop_[i].age;
      if (i != best) --pop_[i].rlt;
    }

    Rng& rng = ctx_.rng();
    const std::size_t a = tournament_index(pop_, cfg_.ops.tournament_k, rng);
    const std::size_t b = tournament_index(pop_, cfg_.ops.tournament_k, rng);
    auto kids = breed(pop_[a].genome, pop_[b].genome, cfg_.ops, rng);
    pop_.push_back(ctx_.make(std::move(kids.first)));
    pop_.push_back(ctx_.make(std::move(kids.second)));
    report.born = 2;

    // Offspring sit at the tail and have no lifetime yet; only the older
    // members are candidates for removal.
    std::size_t out = 0;
    for (std::size_t i = 0; i < pop_.size(); ++i) {
      if (i < report.before && pop_[i].rlt <= 0) continue;
      if (out != i) pop_[out] = std::move(pop_[i]);
      ++out;
    }
    report.died = pop_.size() - out;
    pop_.resize(out);

    const FitStats stats = compute_stats(pop_);
    for (std::size_t i = pop_.size() - 2; i < pop_.size(); ++i) {
      pop_[i].rlt = bilinear_lifetime(pop_[i].fitness, stats, cfg_.lifetime);
    }
    report.after = pop_.size();
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
    while (!(stop.stop_at_optimum && ctx_.first_hit() != 0) && ctx_.evaluations() < stop.max_evals &&
           (stop.max_steps == 0 || generation_ < stop.max_steps)) {
      const StepReport r = step();
      sample();
      if (trace && trace->record_events && r.died > 0) {
        trace->events.push_back({TraceEvent::Kind::death, ctx_.evaluations(), generation_, r.died});
      }
      note_success();
    }
    rec.success = ctx_.first_hit() != 0 && ctx_.first_hit() <= stop.max_evals;
    rec.outcome = rec.success ? Outcome::success : Outcome::budget;
    if (!rec.success) rec.success_size = 0;
    rec.total_evaluations = ctx_.evaluations();
    rec.evaluations = rec.success ? ctx_.first_hit() : ctx_.evaluations();
    rec.best_fitness = best_of(pop_).fitness;
    rec.steps = generation_;
    rec.final_size = pop_.size();
    return rec;
  }

  const Population& population() const noexcept { return pop_; }
  std::uint64_t generation() const noexcept { return generation_; }
  std::uint64_t evaluations() const noexcept { return ctx_.evaluations(); }
  const ApgaConfig& config() const noexcept { return cfg_; }

 private:
  ApgaConfig cfg_;
  RunContext<P> ctx_;
  Population pop_;
  std::uint64_t generation_ = 0;
};

}  // namespace popsize
