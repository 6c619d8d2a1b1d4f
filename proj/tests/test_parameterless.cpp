#include <gtest/gtest.h>

#include <vector>

#include "popsize/parameterless.hpp"
#include "popsize/problems.hpp"

using namespace popsize;

namespace {

// Expands the recursive run order S_0 = [0], S_i = m copies of S_{i-1} then i.
std::vector<std::size_t> recursive_order(unsigned m, std::size_t depth) {
  std::vector<std::size_t> s{0};
  for (std::size_t i = 1; i <= depth; ++i) {
    std::vector<std::size_t> next;
    for (unsigned r = 0; r < m; ++r) next.insert(next.end(), s.begin(), s.end());
    next.push_back(i);
    s = std::move(next);
  }
  return s;
}

std::vector<std::size_t> run_levels(GenerationSchedule& sched, std::size_t count) {
  std::vector<std::size_t> out;
  while (out.size() < count) {
    const auto t = sched.peek();
    if (t.spawn) {
      sched.record_spawn();
      continue;
    }
    out.push_back(t.level);
    sched.record_run(t.level);
  }
  return out;
}

ParameterlessConfig config(PlgaMode mode, unsigned m = 4) {
  ParameterlessConfig cfg;
  cfg.mode = mode;
  cfg.preference = m;
  return cfg;
}

}  // namespace

TEST(Schedule, BinaryOrder) {
  GenerationSchedule sched(2);
  const std::vector<std::size_t> expected{0, 0, 1, 0, 0, 1, 2, 0, 0, 1, 0, 0, 1, 2};
  EXPECT_EQ(run_levels(sched, 14), expected);
  const auto next = sched.peek();
  EXPECT_TRUE(next.spawn);
  EXPECT_EQ(next.level, 3u);
}

TEST(Schedule, MatchesRecursiveExpansion) {
  for (unsigned m : {2u, 3u, 4u}) {
    const auto ref = recursive_order(m, 5);
    GenerationSchedule sched(m);
    EXPECT_EQ(run_levels(sched, ref.size()), ref) << "m=" << m;
  }
}

TEST(Schedule, CountsWithoutEliminations) {
  GenerationSchedule sched(4);
  for (int i = 0; i < 5000; ++i) {
    const auto t = sched.peek();
    if (t.spawn) {
      sched.record_spawn();
    } else {
      sched.record_run(t.level);
    }
    ASSERT_TRUE(schedule_consistent(sched));
    for (std::size_t j = 0; j + 1 < sched.spawned(); ++j) {
      ASSERT_LE(4 * sched.runs(j + 1), sched.runs(j));
      ASSERT_LE(sched.runs(j), 4 * (sched.runs(j + 1) + 1));
    }
  }
}

TEST(Schedule, SkipsRetiredLevels) {
  GenerationSchedule sched(2);
  run_levels(sched, 14);
  sched.record_spawn();  // level 3
  sched.retire(0);
  sched.retire(1);
  for (int i = 0; i < 200; ++i) {
    const auto t = sched.peek();
    if (t.spawn) {
      sched.record_spawn();
    } else {
      ASSERT_GE(t.level, 2u);
      sched.record_run(t.level);
    }
    ASSERT_TRUE(schedule_consistent(sched));
  }
  EXPECT_THROW(sched.record_run(0), std::logic_error);
  EXPECT_THROW(sched.retire(0), std::logic_error);
}

TEST(Schedule, RejectsSmallPreference) { EXPECT_THROW(GenerationSchedule(1), ConfigError); }

TEST(Elimination, Mask) {
  EXPECT_EQ(dominated_mask(std::vector<double>{0.5, 0.7}), (std::vector<char>{1, 0}));
  EXPECT_EQ(dominated_mask(std::vector<double>{0.9, 0.7}), (std::vector<char>{0, 0}));
  EXPECT_EQ(dominated_mask(std::vector<double>{0.7, 0.7}), (std::vector<char>{0, 0}));
  EXPECT_EQ(dominated_mask(std::vector<double>{0.3, 0.9, 0.5, 0.6}), (std::vector<char>{1, 0, 1, 0}));
}

TEST(Parameterless, FirstSpawnIsBaseSize) {
  const OneMax p(40);
  ParameterlessGa<OneMax> ga(p, ParameterlessConfig{}, 1);
  const auto a = ga.next_action();
  EXPECT_EQ(a.kind, ScheduleAction::Kind::spawn_new);
  EXPECT_EQ(a.size, 4u);
  ga.spawn_population();
  ASSERT_EQ(ga.entries().size(), 1u);
  EXPECT_EQ(ga.entries()[0].pop.size(), 4u);
  EXPECT_EQ(ga.evaluations(), 4u);
}

TEST(Parameterless, SizesDouble) {
  const OneMax p(40);
  ParameterlessGa<OneMax> ga(p, config(PlgaMode::steady_state, 2), 2);
  std::vector<std::size_t> spawned;
  while (spawned.size() < 3) {
    const auto a = ga.next_action();
    if (a.kind == ScheduleAction::Kind::spawn_new) spawned.push_back(a.size);
    ga.step();
  }
  EXPECT_EQ(spawned, (std::vector<std::size_t>{4, 8, 16}));
}

TEST(Parameterless, SpawnTracksLargestEverSpawned) {
  const OneMax p(40);
  ParameterlessGa<OneMax> ga(p, config(PlgaMode::steady_state, 2), 3);
  while (ga.schedule().spawned() < 3) ga.apply(ga.next_action());
  std::vector<std::size_t> sizes;
  for (const auto& e : ga.entries()) sizes.push_back(e.size);
  ASSERT_EQ(sizes, (std::vector<std::size_t>{4, 8, 16}));
  ga.eliminate(0);
  bool spawned = false;
  for (int i = 0; i < 1000 && !spawned; ++i) {
    const auto a = ga.next_action();
    if (a.kind == ScheduleAction::Kind::spawn_new) {
      EXPECT_EQ(a.size, 32u);
      spawned = true;
    } else {
      EXPECT_NE(a.level, 0u);
    }
    ga.apply(a);
  }
  EXPECT_TRUE(spawned);
  EXPECT_EQ(ga.entries().back().size, 32u);
}

TEST(Parameterless, SteadyStateGenerationCost) {
  const OneMax p(60);
  ParameterlessConfig cfg = config(PlgaMode::steady_state);
  cfg.base_size = 8;
  ParameterlessGa<OneMax> ga(p, cfg, 4);
  ga.spawn_population();
  const auto before = ga.evaluations();
  ga.run_one_generation(0);
  EXPECT_EQ(ga.evaluations() - before, 8u);
  EXPECT_EQ(ga.entries()[0].generations, 1u);
  EXPECT_EQ(ga.entries()[0].pop.size(), 8u);
}

TEST(Parameterless, GenerationalGenerationCost) {
  const OneMax p(60);
  ParameterlessGa<OneMax> ga(p, config(PlgaMode::generational), 5);
  ga.spawn_population();
  const auto before = ga.evaluations();
  ga.run_one_generation(0);
  EXPECT_EQ(ga.evaluations() - before, 4u);
  EXPECT_EQ(ga.entries()[0].generations, 1u);
  EXPECT_EQ(ga.entries()[0].pop.size(), 4u);
  EXPECT_THROW(ga.run_one_generation(3), std::logic_error);
}

TEST(Parameterless, ConvergedPopulationDroppedWithoutMutation) {
  // A 2-bit problem with pm = 0: copies of a single string quickly fill a
  // population of 4.
  const OneMax p(2);
  ParameterlessConfig cfg = config(PlgaMode::generational);
  cfg.ops.pm = 0.0;
  ParameterlessGa<OneMax> ga(p, cfg, 6);
  ga.spawn_population();
  bool dropped = false;
  for (int i = 0; i < 50 && !dropped; ++i) {
    bool same = true;
    for (const auto& ind : ga.entries()[0].pop) same = same && ind.genome == ga.entries()[0].pop[0].genome;
    if (same) {
      const auto removed = ga.eliminate_sweep();
      EXPECT_EQ(removed, (std::vector<std::size_t>{4}));
      dropped = true;
      break;
    }
    ga.apply(ga.next_action());
  }
  EXPECT_TRUE(dropped);
}

TEST(Parameterless, TraceMinSizeNeverShrinks) {
  Rng rng(7);
  const auto land = generate_multimodal(50, 100, HeightScheme::linear(0.5), rng);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    ParameterlessGa<MultimodalLandscape> ga(land, ParameterlessConfig{}, seed);
    TraceSink trace;
    StopCondition stop;
    stop.max_evals = 100000;
    ga.run(stop, &trace);
    std::size_t prev = 0;
    for (const auto& s : trace.samples) {
      if (s.min_size == 0) continue;
      ASSERT_GE(s.min_size, prev);
      ASSERT_LE(s.min_size, s.max_size);
      prev = s.min_size;
    }
  }
}

TEST(Parameterless, AveragesDecreaseWithSizeAfterEverySweep) {
  const TrapConcat p(5, 4, 0.25);
  ParameterlessGa<TrapConcat> ga(p, ParameterlessConfig{}, 8);
  for (int i = 0; i < 2000; ++i) {
    ga.step();
    const auto& es = ga.entries();
    for (std::size_t a = 0; a < es.size(); ++a) {
      for (std::size_t b = a + 1; b < es.size(); ++b) ASSERT_LE(es[b].avg_fitness, es[a].avg_fitness);
    }
  }
}

TEST(Parameterless, SmallOneMaxSolvedBySmallPopulations) {
  const OneMax p(16);
  int small = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    ParameterlessGa<OneMax> ga(p, ParameterlessConfig{}, derive_seed(3, s));
    const auto r = ga.run(StopCondition{});
    ASSERT_TRUE(r.success);
    small += r.success_size <= 16;
  }
  EXPECT_GE(small, 25);
}

TEST(Parameterless, Deterministic) {
  const TrapConcat p(6, 4, 0.25);
  ParameterlessGa<TrapConcat> a(p, ParameterlessConfig{}, 42);
  ParameterlessGa<TrapConcat> b(p, ParameterlessConfig{}, 42);
  StopCondition stop;
  stop.max_evals = 200000;
  const auto ra = a.run(stop);
  const auto rb = b.run(stop);
  EXPECT_EQ(ra.evaluations, rb.evaluations);
  EXPECT_EQ(ra.success_size, rb.success_size);
  EXPECT_EQ(ra.steps, rb.steps);
}
