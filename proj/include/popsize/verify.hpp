#pragma once

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "popsize/apga.hpp"
#include "popsize/parameterless.hpp"
#include "popsize/problems.hpp"
#include "popsize/random.hpp"

namespace popsize {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct VerifyOptions {
  std::size_t seeds = 3;
  std::uint64_t master_seed = 2006;
};

namespace detail {

/// Steps an APGA run and checks the size bound for every t >= MaxLT and the
/// per-step recurrence P(t) = P(t-1) + 2 - D(t), with D(t) counted from
/// birth orders that disappeared.
template <FitnessFunction P>
void audit_apga(const P& problem, const ApgaConfig& cfg, std::uint64_t seed, std::uint64_t generations,
                CheckResult& bound, CheckResult& recurrence) {
  Apga<P> engine(problem, cfg, seed);
  const std::size_t cap = 2 * static_cast<std::size_t>(cfg.lifetime.max_lt) + 1;
  std::unordered_set<std::uint64_t> alive;
  for (const auto& ind : engine.population()) alive.insert(ind.birth_order);
  for (std::uint64_t t = 1; t <= generations; ++t) {
    const std::size_t before = engine.population().size();
    engine.step();
    std::unordered_set<std::uint64_t> now;
    for (const auto& ind : engine.population()) now.insert(ind.birth_order);
    std::size_t died = 0;
    for (auto b : alive) died += now.count(b) ? 0 : 1;
    const std::size_t after = engine.population().size();
    if (after != before + 2 - died && recurrence.passed) {
      recurrence.passed = false;
      std::ostringstream os;
      os << "seed " << seed << " t=" << t << ": P(t-1)=" << before << " D=" << died << " P(t)=" << after;
      recurrence.detail = os.str();
    }
    if (t >= static_cast<std::uint64_t>(cfg.lifetime.max_lt) && after > cap && bound.passed) {
      bound.passed = false;
      std::ostringstream os;
      os << problem.name() << " p0=" << cfg.initial_size << " lt=(" << cfg.lifetime.min_lt << ","
         << cfg.lifetime.max_lt << ") seed " << seed << " t=" << t << ": size " << after << " > " << cap;
      bound.detail = os.str();
    }
    alive = std::move(now);
  }
}

}  // namespace detail

/// Fast property suite behind `popsize verify`: APGA size bounds and
/// recurrence, the MinLT = MaxLT trajectory, schedule order and counts, and
/// the elimination ordering.
inline std::vector<CheckResult> run_builtin_checks(const VerifyOptions& opt = {}) {
  std::vector<CheckResult> results;

  CheckResult bound{"apga_size_bound", true, ""};
  CheckResult recurrence{"apga_recurrence", true, ""};
  {
    Rng instance_rng(opt.master_seed);
    const OneMax onemax(100);
    const auto peaks = generate_multimodal(50, 100, HeightScheme::equal(), instance_rng);
    const TrapConcat trap(5, 4, 0.25);
    const std::size_t p0s[] = {4, 20, 60, 1000};
    const std::pair<int, int> lts[] = {{1, 7}, {1, 11}, {1, 1000}, {100, 100}};
    std::uint64_t run = 0;
    for (auto p0 : p0s) {
      for (auto [lo, hi] : lts) {
        ApgaConfig cfg;
        cfg.initial_size = p0;
        cfg.lifetime = {lo, hi};
        const std::uint64_t gens = static_cast<std::uint64_t>(hi) + 50;
        for (std::size_t s = 0; s < opt.seeds; ++s) {
          detail::audit_apga(onemax, cfg, derive_seed(opt.master_seed, run++), gens, bound, recurrence);
          detail::audit_apga(peaks, cfg, derive_seed(opt.master_seed, run++), gens, bound, recurrence);
          detail::audit_apga(trap, cfg, derive_seed(opt.master_seed, run++), gens, bound, recurrence);
        }
      }
    }
  }
  results.push_back(bound);
  results.push_back(recurrence);

  CheckResult drop{"apga_equal_lifetimes_trajectory", true, ""};
  {
    Rng instance_rng(opt.master_seed + 1);
    const auto peaks = generate_multimodal(50, 100, HeightScheme::equal(), instance_rng);
    ApgaConfig cfg;
    cfg.initial_size = 60;
    cfg.lifetime = {100, 100};
    for (std::size_t s = 0; s < opt.seeds && drop.passed; ++s) {
      Apga<MultimodalLandscape> engine(peaks, cfg, derive_seed(opt.master_seed + 1, s));
      for (int t = 1; t <= 100; ++t) {
        engine.step();
        const std::size_t size = engine.population().size();
        const bool ok = t < 100 ? size == static_cast<std::size_t>(60 + 2 * t) : (size == 200 || size == 201);
        if (!ok) {
          drop.passed = false;
          drop.detail = "seed " + std::to_string(s) + " t=" + std::to_string(t) + " size " + std::to_string(size);
          break;
        }
      }
    }
  }
  results.push_back(drop);

  CheckResult order{"plga_schedule_order", true, ""};
  {
    GenerationSchedule sched(2);
    const std::size_t expected[] = {0, 0, 1, 0, 0, 1, 2, 0, 0, 1, 0, 0, 1, 2};
    std::size_t runs = 0;
    std::ostringstream seen;
    while (runs < 14) {
      const auto t = sched.peek();
      if (t.spawn) {
        sched.record_spawn();
        continue;
      }
      seen << t.level << ' ';
      if (t.level != expected[runs]) order.passed = false;
      sched.record_run(t.level);
      ++runs;
    }
    const auto fifteenth = sched.peek();
    if (!fifteenth.spawn || fifteenth.level != 3 || (std::size_t{4} << fifteenth.level) != 32) order.passed = false;
    if (!order.passed) order.detail = "observed " + seen.str();
  }
  results.push_back(order);

  CheckResult counts{"plga_schedule_counts", true, ""};
  for (unsigned m : {2U, 4U}) {
    Rng rng(opt.master_seed + m);
    GenerationSchedule sched(m);
    for (int action = 0; action < 10'000 && counts.passed; ++action) {
      const auto t = sched.peek();
      if (t.spawn) {
        sched.record_spawn();
      } else {
        sched.record_run(t.level);
      }
      // Occasionally eliminate a random live level, never the largest.
      if (rng.below(50) == 0 && sched.spawned() > 1) {
        const std::size_t level = rng.below(sched.spawned() - 1);
        if (sched.live(level)) sched.retire(level);
      }
      if (!schedule_consistent(sched)) {
        counts.passed = false;
        counts.detail = "m=" + std::to_string(m) + " action " + std::to_string(action);
      }
    }
  }
  results.push_back(counts);

  CheckResult elim{"plga_elimination_ordering", true, ""};
  {
    Rng rng(opt.master_seed + 7);
    for (int scenario = 0; scenario < 10'000 && elim.passed; ++scenario) {
      const std::size_t n = 1 + rng.below(8);
      std::vector<double> avg(n);
      for (auto& a : avg) a = static_cast<double>(rng.below(6)) / 5.0;
      const auto doomed = dominated_mask(avg);
      std::vector<double> kept;
      for (std::size_t i = 0; i < n; ++i) {
        if (!doomed[i]) kept.push_back(avg[i]);
      }
      if (kept.empty()) elim.passed = false;
      for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
        for (std::size_t j = i + 1; j < kept.size(); ++j) {
          if (kept[j] > kept[i]) elim.passed = false;
        }
      }
      if (!elim.passed) elim.detail = "scenario " + std::to_string(scenario);
    }
  }
  results.push_back(elim);

  return results;
}

}  // namespace popsize
