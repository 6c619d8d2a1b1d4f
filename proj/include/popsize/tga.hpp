#pragma once

#include <cstddef>
#include <cstdint>

#include "popsize/core.hpp"
#include "popsize/operators.hpp"
#include "popsize/run.hpp"

namespace popsize {

/// One steady-state iteration: two tournament winners breed, both offspring
/// are inserted, then the two worst members are deleted.
template <FitnessFunction P>
void steady_state_iteration(Population& pop, RunContext<P>& ctx, const OperatorConfig& ops) {
  Rng& rng = ctx.rng();
  const std::size_t a = tournament_index(pop, ops.tournament_k, rng);
  const std::size_t b = tournament_index(pop, ops.tournament_k, rng);
  auto kids = breed(pop[a].genome, pop[b].genome, ops, rng);
  pop.push_back(ctx.make(std::move(kids.first)));
  pop.push_back(ctx.make(std::move(kids.second)));
  remove_worst(pop, 2);
}

struct TgaConfig {
  OperatorConfig ops{};
  std::size_t size = 100;

  void validate() const {
    ops.validate();
    if (size < 2) throw ConfigError("tga.n must be >= 2");
  }
};

/// Fixed-size steady-state GA with delete-worst-2 replacement.
template <FitnessFunction P>
class Tga {
 public:
  Tga(const P& problem, const TgaConfig& cfg, std::uint64_t seed) : cfg_(cfg), ctx_(problem, seed) {
    cfg_.validate();
    pop_.reserve(cfg_.size + 2);
    for (std::size_t i = 0; i < cfg_.size; ++i) pop_.push_back(ctx_.make_random());
  }

  void step() {
    ++generation_;
    steady_state_iteration(pop_, ctx_, cfg_.ops);
  }

  RunRecord run(const StopCondition& stop, TraceSink* trace = nullptr) {
    RunRecord rec;
    auto sample = [&] {
      if (trace) trace->samples.push_back({ctx_.evaluations(), generation_, pop_.size(), 0, 0});
    };
    sample();
    while (!(stop.stop_at_optimum && ctx_.first_hit() != 0) && ctx_.evaluations() < stop.max_evals &&
           (stop.max_steps == 0 || generation_ < stop.max_steps)) {
      step();
      sample();
    }
    rec.success = ctx_.first_hit() != 0 && ctx_.first_hit() <= stop.max_evals;
    rec.outcome = rec.success ? Outcome::success : Outcome::budget;
    rec.success_size = rec.success ? cfg_.size : 0;
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

 private:
  TgaConfig cfg_;
  RunContext<P> ctx_;
  Population pop_;
  std::uint64_t generation_ = 0;
};

}  // namespace popsize
