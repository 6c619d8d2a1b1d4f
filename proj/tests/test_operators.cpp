#include <gtest/gtest.h>

#include <vector>

#include "popsize/operators.hpp"

using namespace popsize;

namespace {

Individual member(double fitness, std::uint64_t birth) {
  Individual ind;
  ind.fitness = fitness;
  ind.birth_order = birth;
  return ind;
}

}  // namespace

TEST(Crossover, SegmentSwapExample) {
  auto a = Genome::from_string("000000");
  auto b = Genome::from_string("111111");
  exchange_segment(a, b, 2, 4);
  EXPECT_EQ(a.to_string(), "001100");
  EXPECT_EQ(b.to_string(), "110011");
}

TEST(Crossover, IdenticalParents) {
  Rng rng(1);
  const auto a = Genome::random(50, rng);
  for (int i = 0; i < 100; ++i) {
    auto [x, y] = two_point_crossover(a, a, rng);
    EXPECT_EQ(x, a);
    EXPECT_EQ(y, a);
  }
}

TEST(Crossover, ShortGenomesRejected) {
  Rng rng(1);
  EXPECT_THROW(two_point_crossover(Genome(1), Genome(1), rng), ConfigError);
  EXPECT_THROW(two_point_crossover(Genome(4), Genome(5), rng), ConfigError);
  auto [x, y] = two_point_crossover(Genome::from_string("01"), Genome::from_string("10"), rng);
  EXPECT_EQ(x.count() + y.count(), 2u);
}

TEST(Crossover, CutPointsUniformOverPairs) {
  Rng rng(3);
  const std::size_t L = 5;
  std::vector<int> hits((L + 1) * (L + 1), 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    auto [c1, c2] = draw_cut_points(L, rng);
    ASSERT_GE(c1, 1u);
    ASSERT_LT(c1, c2);
    ASSERT_LE(c2, L);
    ++hits[c1 * (L + 1) + c2];
  }
  const double expected = draws / 10.0;  // C(5, 2) pairs
  for (std::size_t c1 = 1; c1 <= L; ++c1) {
    for (std::size_t c2 = c1 + 1; c2 <= L; ++c2) EXPECT_NEAR(hits[c1 * (L + 1) + c2], expected, 0.05 * expected);
  }
}

TEST(Crossover, ColumnMultisetsPreserved) {
  Rng rng(5);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t L = 2 + rng.below(150);
    const auto a = Genome::random(L, rng);
    const auto b = Genome::random(L, rng);
    auto [x, y] = two_point_crossover(a, b, rng);
    ASSERT_EQ(x.size(), L);
    for (std::size_t i = 0; i < L; ++i) {
      ASSERT_EQ(int(x[i]) + int(y[i]), int(a[i]) + int(b[i]));
      ASSERT_TRUE((x[i] == a[i] && y[i] == b[i]) || (x[i] == b[i] && y[i] == a[i]));
    }
  }
}

TEST(Crossover, WordBoundarySegments) {
  auto a = Genome(130);
  auto b = Genome(130);
  b.complement();
  exchange_segment(a, b, 60, 129);
  for (std::size_t i = 0; i < 130; ++i) EXPECT_EQ(a[i], i >= 60 && i < 129);
  EXPECT_EQ(b.count(), 130u - 69u);
}

TEST(Mutation, ZeroAndOne) {
  Rng rng(7);
  const auto g = Genome::random(77, rng);
  EXPECT_EQ(bitflip_mutation(g, 0.0, rng), g);
  auto c = g;
  c.complement();
  EXPECT_EQ(bitflip_mutation(g, 1.0, rng), c);
}

TEST(Mutation, MeanFlipsOnePerGenome) {
  Rng rng(9);
  const Genome g(100);
  double total = 0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) total += static_cast<double>(bitflip_mutation(g, 0.01, rng).count());
  EXPECT_NEAR(total / trials, 1.0, 0.05);
}

TEST(Mutation, PerPositionRate) {
  Rng rng(10);
  const std::size_t L = 20;
  std::vector<int> flips(L, 0);
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) {
    const auto m = bitflip_mutation(Genome(L), 0.1, rng);
    for (std::size_t i = 0; i < L; ++i) flips[i] += m[i];
  }
  for (std::size_t i = 0; i < L; ++i) EXPECT_NEAR(flips[i] / double(trials), 0.1, 0.004);
}

TEST(Mutation, DefaultRateIsOneOverL) {
  const OperatorConfig ops;
  EXPECT_DOUBLE_EQ(ops.mutation_rate(100), 0.01);
  OperatorConfig fixed;
  fixed.pm = 0.2;
  EXPECT_DOUBLE_EQ(fixed.mutation_rate(100), 0.2);
}

TEST(Tournament, BinaryPicksBetterThreeQuarters) {
  Rng rng(11);
  const Population pop{member(0.1, 0), member(0.9, 1)};
  int better = 0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) better += tournament_index(pop, 2, rng) == 1;
  EXPECT_NEAR(better / double(trials), 0.75, 0.01);
}

TEST(Tournament, SizeOneIsUniform) {
  Rng rng(12);
  const Population pop{member(0.1, 0), member(0.9, 1), member(0.5, 2), member(0.2, 3)};
  std::vector<int> hits(4, 0);
  for (int t = 0; t < 40000; ++t) ++hits[tournament_index(pop, 1, rng)];
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
}

TEST(Tournament, SingleMemberAndEmpty) {
  Rng rng(13);
  const Population one{member(0.4, 9)};
  for (std::size_t k : {1u, 2u, 7u}) EXPECT_EQ(tournament_select(one, k, rng).birth_order, 9u);
  const Population none;
  EXPECT_THROW(tournament_index(none, 2, rng), std::logic_error);
}

TEST(RemoveWorst, LowestGoes) {
  Population pop{member(0.2, 0), member(0.8, 1), member(0.5, 2)};
  remove_worst(pop, 1);
  ASSERT_EQ(pop.size(), 2u);
  EXPECT_EQ(pop[0].birth_order, 1u);
  EXPECT_EQ(pop[1].birth_order, 2u);
}

TEST(RemoveWorst, AllAndTooMany) {
  Population pop{member(0.2, 0), member(0.8, 1)};
  EXPECT_THROW(remove_worst(pop, 3), std::logic_error);
  remove_worst(pop, 2);
  EXPECT_TRUE(pop.empty());
}

TEST(RemoveWorst, TieRemovesYoungest) {
  Population pop{member(0.5, 1), member(0.5, 2), member(0.9, 3)};
  remove_worst(pop, 1);
  ASSERT_EQ(pop.size(), 2u);
  EXPECT_EQ(pop[0].birth_order, 1u);
  EXPECT_EQ(pop[1].birth_order, 3u);
}

TEST(RemoveWorst, LargeBatchAgreesWithRepeatedSingle) {
  Rng rng(14);
  for (int t = 0; t < 200; ++t) {
    Population pop;
    const std::size_t n = 10 + rng.below(40);
    for (std::size_t i = 0; i < n; ++i) pop.push_back(member(static_cast<double>(rng.below(5)), rng.below(1000)));
    auto batch = pop;
    auto single = pop;
    const std::size_t r = 5 + rng.below(n - 5);
    remove_worst(batch, r);
    for (std::size_t i = 0; i < r; ++i) remove_worst(single, 1);
    ASSERT_EQ(batch.size(), single.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
      EXPECT_EQ(batch[i].birth_order, single[i].birth_order);
      EXPECT_EQ(batch[i].fitness, single[i].fitness);
    }
  }
}

TEST(Breed, NoCrossoverNoMutationClones) {
  Rng rng(15);
  const auto a = Genome::random(40, rng);
  const auto b = Genome::random(40, rng);
  const OperatorConfig ops{0.0, 0.0, 2};
  auto [x, y] = breed(a, b, ops, rng);
  EXPECT_EQ(x, a);
  EXPECT_EQ(y, b);
}
