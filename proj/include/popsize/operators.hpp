#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>

#include "popsize/core.hpp"
#include "popsize/random.hpp"

namespace popsize {

struct OperatorConfig {
  double pc = 0.9;
  double pm = -1.0;  ///< negative means 1/L, resolved against the problem length
  std::size_t tournament_k = 2;

  double mutation_rate(std::size_t length) const noexcept {
    return pm < 0.0 ? 1.0 / static_cast<double>(length) : pm;
  }

  void validate() const {
    if (!(pc >= 0.0 && pc <= 1.0)) throw ConfigError("operators.pc must lie in [0, 1]");
    if (!(pm < 0.0 || pm <= 1.0)) throw ConfigError("operators.pm must lie in [0, 1]");
    if (tournament_k < 1) throw ConfigError("operators.tournament_k must be >= 1");
  }
};

/// Swaps bits [c1, c2) between `a` and `b` in place.
inline void exchange_segment(Genome& a, Genome& b, std::size_t c1, std::size_t c2) {
  if (a.size() != b.size()) throw ConfigError("crossover: parents differ in length");
  if (c1 > c2 || c2 > a.size()) throw std::logic_error("crossover: invalid cut points");
  auto wa = a.mutable_words();
  auto wb = b.mutable_words();
  for (std::size_t w = c1 >> 6; w < wa.size() && (w << 6) < c2; ++w) {
    const std::size_t lo = std::max(c1, w << 6) - (w << 6);
    const std::size_t hi = std::min(c2, (w + 1) << 6) - (w << 6);
    const std::uint64_t upper = hi == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << hi) - 1;
    const std::uint64_t mask = upper & ~((std::uint64_t{1} << lo) - 1);
    const std::uint64_t diff = (wa[w] ^ wb[w]) & mask;
    wa[w] ^= diff;
    wb[w] ^= diff;
  }
}

/// Draws cut points 1 <= c1 < c2 <= L uniformly over all such pairs.
inline std::pair<std::size_t, std::size_t> draw_cut_points(std::size_t length, Rng& rng) {
  if (length < 2) throw ConfigError("crossover: genome length must be >= 2");
  auto i = rng.below(length);
  auto j = rng.below(length - 1);
  if (j >= i) ++j;
  if (i > j) std::swap(i, j);
  return {static_cast<std::size_t>(i) + 1, static_cast<std::size_t>(j) + 1};
}

inline std::pair<Genome, Genome> two_point_crossover(const Genome& a, const Genome& b, Rng& rng) {
  if (a.size() != b.size()) throw ConfigError("crossover: parents differ in length");
  const auto [c1, c2] = draw_cut_points(a.size(), rng);
  std::pair<Genome, Genome> kids{a, b};
  exchange_segment(kids.first, kids.second, c1, c2);
  return kids;
}

/// Flips each bit independently with probability `pm`. Gaps between flips are
/// drawn from the geometric distribution, which gives the same law as one
/// Bernoulli trial per bit.
inline void mutate_in_place(Genome& g, double pm, Rng& rng) {
  if (pm <= 0.0) return;
  if (pm >= 1.0) {
    g.complement();
    return;
  }
  const double log_q = std::log1p(-pm);
  const std::size_t n = g.size();
  std::size_t pos = 0;
  while (true) {
    const double u = 1.0 - rng.uniform01();  // (0, 1]
    const double gap = std::floor(std::log(u) / log_q);
    if (gap >= static_cast<double>(n - pos)) break;
    pos += static_cast<std::size_t>(gap);
    g.flip(pos);
    if (++pos >= n) break;
  }
}

inline Genome bitflip_mutation(Genome g, double pm, Rng& rng) {
  if (!(pm >= 0.0 && pm <= 1.0)) throw ConfigError("mutation: pm must lie in [0, 1]");
  mutate_in_place(g, pm, rng);
  return g;
}

/// k uniform draws with replacement; the fittest wins (older on equal fitness).
inline std::size_t tournament_index(std::span<const Individual> pop, std::size_t k, Rng& rng) {
  if (pop.empty()) throw std::logic_error("tournament_select: empty population");
  std::size_t best = rng.below(pop.size());
  for (std::size_t i = 1; i < k; ++i) {
    const std::size_t c = rng.below(pop.size());
    if (fitter(pop[c], pop[best])) best = c;
  }
  return best;
}

inline const Individual& tournament_select(std::span<const Individual> pop, std::size_t k, Rng& rng) {
  return pop[tournament_index(pop, k, rng)];
}

inline std::size_t uniform_index(std::span<const Individual> pop, Rng& rng) {
  if (pop.empty()) throw std::logic_error("uniform parent choice: empty population");
  return rng.below(pop.size());
}

/// Removes the `n` least fit members. On equal fitness the youngest (largest
/// birth_order) goes first. Survivors keep their relative order.
inline void remove_worst(Population& pop, std::size_t n) {
  if (n > pop.size()) throw std::logic_error("remove_worst: n exceeds population size");
  if (n == 0) return;
  if (n == pop.size()) {
    pop.clear();
    return;
  }
  std::vector<char> doomed(pop.size(), 0);
  if (n <= 4) {
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t worst = pop.size();
      for (std::size_t i = 0; i < pop.size(); ++i) {
        if (doomed[i]) continue;
        if (worst == pop.size() || fitter(pop[worst], pop[i])) worst = i;
      }
      doomed[worst] = 1;
    }
  } else {
    std::vector<std::size_t> idx(pop.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n - 1), idx.end(),
                     [&](std::size_t a, std::size_t b) { return fitter(pop[b], pop[a]); });
    for (std::size_t r = 0; r < n; ++r) doomed[idx[r]] = 1;
  }
  std::size_t out = 0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!doomed[i]) {
      if (out != i) pop[out] = std::move(pop[i]);
      ++out;
    }
  }
  pop.resize(out);
}

/// Two parents -> two offspring genomes: crossover with probability pc
/// (clone-through otherwise), then mutation of both.
inline std::pair<Genome, Genome> breed(const Genome& a, const Genome& b, const OperatorConfig& ops, Rng& rng) {
  std::pair<Genome, Genome> kids{a, b};
  if (rng.bernoulli(ops.pc)) {
    const auto [c1, c2] = draw_cut_points(a.size(), rng);
    exchange_segment(kids.first, kids.second, c1, c2);
  }
  const double pm = ops.mutation_rate(a.size());
  mutate_in_place(kids.first, pm, rng);
  mutate_in_place(kids.second, pm, rng);
  return kids;
}

}  // namespace popsize
