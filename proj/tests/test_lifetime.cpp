#include <gtest/gtest.h>

#include <cmath>

#include "popsize/lifetime.hpp"

using namespace popsize;

namespace {

Population with_fitness(std::initializer_list<double> fs) {
  Population pop;
  std::uint64_t b = 0;
  for (double f : fs) {
    Individual ind;
    ind.fitness = f;
    ind.birth_order = b++;
    pop.push_back(ind);
  }
  return pop;
}

// Straight substitution into the bi-linear formula.
double formula(double fit, double mn, double av, double mx, double lo, double hi) {
  const double eta = (hi - lo) / 2;
  if (av >= fit) return av == mn ? (lo + hi) / 2 : lo + eta * (fit - mn) / (av - mn);
  return (lo + hi) / 2 + eta * (fit - av) / (mx - av);
}

}  // namespace

TEST(Stats, Examples) {
  auto s = compute_stats(with_fitness({1, 2, 3}));
  EXPECT_EQ(s.min_fit, 1);
  EXPECT_EQ(s.avg_fit, 2);
  EXPECT_EQ(s.max_fit, 3);
  s = compute_stats(with_fitness({0.7, 0.7, 0.7}));
  EXPECT_EQ(s.min_fit, 0.7);
  EXPECT_EQ(s.avg_fit, 0.7);
  EXPECT_EQ(s.max_fit, 0.7);
  s = compute_stats(with_fitness({0.2, 0.8}));
  EXPECT_DOUBLE_EQ(s.avg_fit, 0.5);
  EXPECT_THROW(compute_stats(Population{}), std::logic_error);
}

TEST(Lifetime, Endpoints) {
  const LifetimeConfig cfg{1, 11};
  const FitStats s{0.2, 0.5, 0.9};
  EXPECT_EQ(bilinear_lifetime(0.2, s, cfg), 1);
  EXPECT_EQ(bilinear_lifetime(0.9, s, cfg), 11);
  EXPECT_EQ(bilinear_lifetime(0.5, s, cfg), 6);
}

TEST(Lifetime, EqualBoundsConstant) {
  const LifetimeConfig cfg{100, 100};
  const FitStats s{0.0, 0.3, 1.0};
  for (double f : {0.0, 0.1, 0.3, 0.7, 1.0}) EXPECT_EQ(bilinear_lifetime(f, s, cfg), 100);
}

TEST(Lifetime, DegenerateStats) {
  EXPECT_EQ(bilinear_lifetime(0.4, FitStats{0.4, 0.4, 0.4}, LifetimeConfig{1, 11}), 6);
  // Midpoint 4.5 rounds half away from zero.
  EXPECT_EQ(bilinear_lifetime(0.4, FitStats{0.4, 0.4, 0.4}, LifetimeConfig{1, 8}), 5);
}

TEST(Lifetime, StaleStatsRejected) {
  const FitStats s{0.2, 0.5, 0.9};
  EXPECT_THROW(bilinear_lifetime(0.95, s, LifetimeConfig{}), std::logic_error);
  EXPECT_THROW(bilinear_lifetime(0.1, s, LifetimeConfig{}), std::logic_error);
}

TEST(Lifetime, ConfigValidation) {
  try {
    LifetimeConfig{12, 11}.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("min_lt"), std::string::npos);
    EXPECT_NE(msg.find("max_lt"), std::string::npos);
  }
  EXPECT_THROW(LifetimeConfig({0, 3}).validate(), ConfigError);
}

TEST(Lifetime, MatchesFormulaMonotoneAndInRange) {
  Rng rng(21);
  for (int t = 0; t < 2000; ++t) {
    const int lo = 1 + static_cast<int>(rng.below(10));
    const int hi = lo + static_cast<int>(rng.below(30));
    const LifetimeConfig cfg{lo, hi};
    double mn = rng.uniform01();
    double mx = mn + rng.uniform01();
    double av = mn + (mx - mn) * rng.uniform01();
    const FitStats s{mn, av, mx};
    int prev = lo;
    for (int i = 0; i <= 50; ++i) {
      const double f = i == 50 ? mx : mn + (mx - mn) * i / 50.0;
      const int lt = bilinear_lifetime(f, s, cfg);
      ASSERT_GE(lt, lo);
      ASSERT_LE(lt, hi);
      ASSERT_GE(lt, prev);
      const double ref = formula(f, mn, av, mx, lo, hi);
      ASSERT_LE(std::abs(lt - ref), 0.5 + 1e-9);
      prev = lt;
    }
  }
}

TEST(Lifetime, ContinuousAtAverage) {
  const LifetimeConfig cfg{1, 101};
  const FitStats s{0.0, 0.4, 1.0};
  EXPECT_EQ(bilinear_lifetime(0.4, s, cfg), 51);
  EXPECT_EQ(bilinear_lifetime(std::nextafter(0.4, 1.0), s, cfg), 51);
  EXPECT_EQ(bilinear_lifetime(std::nextafter(0.4, 0.0), s, cfg), 51);
}
