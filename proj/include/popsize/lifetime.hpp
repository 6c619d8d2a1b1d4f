#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include "popsize/core.hpp"

namespace popsize {

struct LifetimeConfig {
  int min_lt = 1;
  int max_lt = 11;

  void validate() const {
    if (min_lt < 1) throw ConfigError("lifetime.min_lt must be >= 1");
    if (max_lt < min_lt) {
      throw ConfigError("lifetime.min_lt (" + std::to_string(min_lt) + ") must not exceed lifetime.max_lt (" +
                        std::to_string(max_lt) + ")");
    }
  }
};

struct FitStats {
  double min_fit = 0.0;
  double avg_fit = 0.0;
  double max_fit = 0.0;
};

inline FitStats compute_stats(std::span<const Individual> pop) {
  if (pop.empty()) throw std::logic_error("compute_stats: empty population");
  FitStats s{pop[0].fitness, 0.0, pop[0].fitness};
  double sum = 0.0;
  for (const auto& ind : pop) {
    s.min_fit = std::min(s.min_fit, ind.fitness);
    s.max_fit = std::max(s.max_fit, ind.fitness);
    sum += ind.fitness;
  }
  // Keep the mean exact for uniform populations and inside [min, max]
  // despite summation round-off.
  s.avg_fit = s.min_fit == s.max_fit ? s.min_fit
                                     : std::clamp(sum / static_cast<double>(pop.size()), s.min_fit, s.max_fit);
  return s;
}

/// Bi-linear lifetime allocation. Below-average fitness maps linearly onto
/// [MinLT, (MinLT+MaxLT)/2], above-average onto [(MinLT+MaxLT)/2, MaxLT].
/// Rounded half away from zero and clamped to [MinLT, MaxLT].
inline int bilinear_lifetime(double fit, const FitStats& stats, const LifetimeConfig& cfg) {
  if (fit < stats.min_fit || fit > stats.max_fit) {
    throw std::logic_error("bilinear_lifetime: fitness outside [min_fit, max_fit]");
  }
  const double min_lt = cfg.min_lt;
  const double max_lt = cfg.max_lt;
  const double eta = (max_lt - min_lt) / 2.0;
  const double mid = (min_lt + max_lt) / 2.0;
  double lt = mid;
  if (stats.avg_fit >= fit) {
    const double span = stats.avg_fit - stats.min_fit;
    if (span > 0.0) lt = min_lt + eta * (fit - stats.min_fit) / span;
  } else {
    lt = mid + eta * (fit - stats.avg_fit) / (stats.max_fit - stats.avg_fit);
  }
  const long rounded = std::lround(lt);
  return static_cast<int>(std::clamp<long>(rounded, cfg.min_lt, cfg.max_lt));
}

}  // namespace popsize
