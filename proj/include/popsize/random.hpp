#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace popsize {

/// Seeded random source.
///
/// Backed by std::mt19937_64, whose output stream is fixed by the C++
/// standard (the 10000th draw from a default-seeded engine is
/// 9981545732273789042), so identical seeds give identical streams on every
/// conforming platform. The standard distribution classes are *not* used:
/// their algorithms are implementation-defined. Every derived quantity below
/// is computed from raw 64-bit draws with fixed arithmetic.
class Rng {
 public:
  static constexpr std::string_view kAlgorithmId = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Lemire's multiply-and-reject method.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(engine_()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for run `run_index` of an experiment with `master_seed`:
/// mix64(master_seed + (run_index + 1) * golden_gamma). Each run's seed depends
/// only on its own index, so adding runs leaves earlier runs untouched.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index) noexcept {
  return mix64(master_seed + (run_index + 1) * 0x9E3779B97F4A7C15ULL);
}

}  // namespace popsize
