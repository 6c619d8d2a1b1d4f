#pragma once

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "popsize/random.hpp"

namespace popsize {

/// Invalid user-supplied configuration. Maps to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-length bit string packed into 64-bit words, least significant bit
/// first. Bits past `size()` in the last word are always zero.
class Genome {
 public:
  Genome() = default;
  explicit Genome(std::size_t length) : length_(length), words_(word_count(length), 0) {}

  static Genome from_string(std::string_view bits) {
    Genome g(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        g.set(i, true);
      } else if (bits[i] != '0') {
        throw ConfigError("genome string contains a symbol other than 0/1");
      }
    }
    return g;
  }

  static Genome random(std::size_t length, Rng& rng) {
    Genome g(length);
    for (auto& w : g.words_) w = rng.next();
    g.clear_tail();
    return g;
  }

  std::size_t size() const noexcept { return length_; }

  bool operator[](std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }

  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }

  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  void complement() noexcept {
    for (auto& w : words_) w = ~w;
    clear_tail();
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  /// Number of ones in [begin, begin + len).
  std::size_t count(std::size_t begin, std::size_t len) const noexcept {
    std::size_t n = 0;
    std::size_t pos = begin;
    const std::size_t end = begin + len;
    while (pos < end) {
      const std::size_t word = pos >> 6;
      const std::size_t offset = pos & 63;
      const std::size_t take = std::min<std::size_t>(64 - offset, end - pos);
      std::uint64_t w = words_[word] >> offset;
      if (take < 64) w &= (std::uint64_t{1} << take) - 1;
      n += static_cast<std::size_t>(std::popcount(w));
      pos += take;
    }
    return n;
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> mutable_words() noexcept { return words_; }

  std::string to_string() const {
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
      if ((*this)[i]) s[i] = '1';
    }
    return s;
  }

  friend bool operator==(const Genome&, const Genome&) = default;

  static constexpr std::size_t word_count(std::size_t length) noexcept { return (length + 63) / 64; }

 private:
  void clear_tail() noexcept {
    if (const std::size_t r = length_ & 63; r != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << r) - 1;
    }
  }

  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

inline std::size_t hamming(const Genome& a, const Genome& b) noexcept {
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t d = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) d += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  return d;
}

/// A genome with its cached fitness and age bookkeeping. Only `age`, `rlt` and
/// `lifetime` change after creation.
struct Individual {
  Genome genome;
  double fitness = 0.0;
  int age = 0;
  int rlt = 0;       ///< remaining lifetime (APGA)
  int lifetime = 0;  ///< assigned lifetime (GAVaPS)
  std::uint64_t birth_order = 0;
};

/// Members are kept in insertion order; removals preserve relative order.
using Population = std::vector<Individual>;

/// A landscape over fixed-length bit strings with a known optimum.
template <typename P>
concept FitnessFunction = requires(const P& p, const Genome& g) {
  { p.length() } -> std::convertible_to<std::size_t>;
  { p.fitness(g) } -> std::convertible_to<double>;
  { p.optimum() } -> std::convertible_to<double>;
  { p.name() } -> std::convertible_to<std::string>;
};

struct EvalCounter {
  std::uint64_t count = 0;
};

template <FitnessFunction P>
double evaluate(const Genome& genome, const P& problem, EvalCounter& counter) {
  if (genome.size() != problem.length()) {
    throw ConfigError("genome length " + std::to_string(genome.size()) + " does not match problem length " +
                      std::to_string(problem.length()));
  }
  ++counter.count;
  return problem.fitness(genome);
}

/// `a` ranks above `b`: higher fitness, then older (smaller birth_order).
inline bool fitter(const Individual& a, const Individual& b) noexcept {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  return a.birth_order < b.birth_order;
}

inline std::size_t best_index(std::span<const Individual> pop) {
  if (pop.empty()) throw std::logic_error("best_of: empty population");
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i) {
    if (fitter(pop[i], pop[best])) best = i;
  }
  return best;
}

inline const Individual& best_of(std::span<const Individual> pop) { return pop[best_index(pop)]; }

/// Per-run mutable state shared by every engine: the problem, the random
/// source, evaluation accounting and the birth-order clock.
template <FitnessFunction P>
class RunContext {
 public:
  RunContext(const P& problem, std::uint64_t seed) : problem_(&problem), rng_(seed), target_(problem.optimum()) {}

  const P& problem() const noexcept { return *problem_; }
  Rng& rng() noexcept { return rng_; }
  EvalCounter& counter() noexcept { return counter_; }
  std::uint64_t evaluations() const noexcept { return counter_.count; }

  /// Evaluates `genome` and wraps it as a newborn individual.
  Individual make(Genome genome) {
    Individual ind;
    ind.fitness = evaluate(genome, *problem_, counter_);
    ind.genome = std::move(genome);
    ind.birth_order = next_birth_++;
    if (ind.fitness > best_seen_) best_seen_ = ind.fitness;
    if (first_hit_ == 0 && ind.fitness >= target_) first_hit_ = counter_.count;
    return ind;
  }

  Individual make_random() { return make(Genome::random(problem_->length(), rng_)); }

  /// Evaluation index at which the optimum was first produced, 0 if never.
  std::uint64_t first_hit() const noexcept { return first_hit_; }
  double best_seen() const noexcept { return best_seen_; }

 private:
  const P* problem_;
  Rng rng_;
  EvalCounter counter_;
  std::uint64_t next_birth_ = 0;
  double target_;
  double best_seen_ = -1.0;
  std::uint64_t first_hit_ = 0;
};

}  // namespace popsize
