#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "popsize/core.hpp"
#include "popsize/random.hpp"

namespace popsize {

/// Counts ones. Test fixture with optimum L.
class OneMax {
 public:
  explicit OneMax(std::size_t length) : length_(length) {
    if (length == 0) throw ConfigError("onemax: length must be >= 1");
  }
  std::size_t length() const noexcept { return length_; }
  double fitness(const Genome& g) const noexcept { return static_cast<double>(g.count()); }
  double optimum() const noexcept { return static_cast<double>(length_); }
  std::string name() const { return "onemax-L" + std::to_string(length_); }

 private:
  std::size_t length_;
};

// ---------------------------------------------------------------------------
// Random-peak multimodal generator

struct HeightScheme {
  enum class Kind { equal, linear };
  Kind kind = Kind::equal;
  double h_min = 1.0;  ///< lowest height under the linear scheme

  static HeightScheme equal() { return {}; }
  static HeightScheme linear(double h_min) { return {Kind::linear, h_min}; }

  std::string to_string() const {
    if (kind == Kind::equal) return "equal";
    std::ostringstream os;
    os.precision(17);
    os << "linear:" << h_min;
    return os.str();
  }

  static HeightScheme parse(const std::string& text) {
    if (text == "equal") return equal();
    if (text.rfind("linear:", 0) == 0) {
      std::size_t used = 0;
      const std::string rest = text.substr(7);
      double h = 0.0;
      try {
        h = std::stod(rest, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != rest.size() || !(h > 0.0 && h <= 1.0)) {
        throw ConfigError("height scheme: linear minimum must be a number in (0, 1], got '" + rest + "'");
      }
      return linear(h);
    }
    throw ConfigError("height scheme: expected 'equal' or 'linear:<h_min>', got '" + text + "'");
  }
};

/// Fitness is proximity to the nearest peak in Hamming space scaled by that
/// peak's height. Among equidistant peaks the tallest wins, then the lowest
/// index.
class MultimodalLandscape {
 public:
  MultimodalLandscape(std::size_t length, std::vector<Genome> peaks, std::vector<double> heights,
                      HeightScheme scheme = {})
      : length_(length), peaks_(std::move(peaks)), heights_(std::move(heights)), scheme_(scheme) {
    if (length_ == 0) throw ConfigError("multimodal: length must be >= 1");
    if (peaks_.empty()) throw ConfigError("multimodal: at least one peak is required");
    if (peaks_.size() != heights_.size()) throw ConfigError("multimodal: peak/height count mismatch");
    words_per_peak_ = Genome::word_count(length_);
    flat_.reserve(peaks_.size() * words_per_peak_);
    for (const auto& p : peaks_) {
      if (p.size() != length_) throw ConfigError("multimodal: peak length does not match L");
      flat_.insert(flat_.end(), p.words().begin(), p.words().end());
    }
    for (double h : heights_) {
      if (!(h > 0.0 && h <= 1.0)) throw ConfigError("multimodal: heights must lie in (0, 1]");
      if (h > max_height_) max_height_ = h;
    }
  }

  std::size_t length() const noexcept { return length_; }
  std::size_t num_peaks() const noexcept { return peaks_.size(); }
  const std::vector<Genome>& peaks() const noexcept { return peaks_; }
  const std::vector<double>& heights() const noexcept { return heights_; }
  const HeightScheme& scheme() const noexcept { return scheme_; }
  double optimum() const noexcept { return max_height_; }

  std::string name() const {
    return "multimodal-P" + std::to_string(peaks_.size()) + "-L" + std::to_string(length_) + "-" +
           scheme_.to_string();
  }

  /// Index of the peak that defines the fitness of `x`.
  std::size_t nearest_peak(const Genome& x) const noexcept {
    const auto xw = x.words();
    std::size_t best = 0;
    std::size_t best_d = std::numeric_limits<std::size_t>::max();
    for (std::size_t p = 0; p < peaks_.size(); ++p) {
      const std::uint64_t* pw = flat_.data() + p * words_per_peak_;
      std::size_t d = 0;
      for (std::size_t w = 0; w < words_per_peak_; ++w) d += static_cast<std::size_t>(std::popcount(xw[w] ^ pw[w]));
      if (d < best_d || (d == best_d && heights_[p] > heights_[best])) {
        best = p;
        best_d = d;
      }
    }
    return best;
  }

  double fitness(const Genome& x) const {
    if (x.size() != length_) throw ConfigError("multimodal: genome length does not match L");
    const std::size_t p = nearest_peak(x);
    const auto d = hamming(x, peaks_[p]);
    return static_cast<double>(length_ - d) / static_cast<double>(length_) * heights_[p];
  }

 private:
  std::size_t length_;
  std::vector<Genome> peaks_;
  std::vector<double> heights_;
  HeightScheme scheme_;
  std::size_t words_per_peak_ = 0;
  std::vector<std::uint64_t> flat_;
  double max_height_ = 0.0;
};

/// Draws `num_peaks` distinct uniform L-bit peaks (rejection sampling) and
/// assigns heights by `scheme`: all 1.0, or linearly spaced from h_min up to
/// 1.0 in peak-index order.
inline MultimodalLandscape generate_multimodal(std::size_t num_peaks, std::size_t length, HeightScheme scheme,
                                               Rng& rng) {
  if (num_peaks < 1) throw ConfigError("multimodal: num_peaks must be >= 1");
  if (length < 1) throw ConfigError("multimodal: length must be >= 1");
  if (length < 64 && num_peaks > (std::uint64_t{1} << length)) {
    throw ConfigError("multimodal: num_peaks exceeds 2^L distinct strings");
  }
  std::vector<Genome> peaks;
  peaks.reserve(num_peaks);
  std::set<std::vector<std::uint64_t>> seen;
  while (peaks.size() < num_peaks) {
    Genome g = Genome::random(length, rng);
    std::vector<std::uint64_t> key(g.words().begin(), g.words().end());
    if (seen.insert(std::move(key)).second) peaks.push_back(std::move(g));
  }
  std::vector<double> heights(num_peaks, 1.0);
  if (scheme.kind == HeightScheme::Kind::linear && num_peaks > 1) {
    for (std::size_t i = 0; i < num_peaks; ++i) {
      heights[i] = scheme.h_min + (1.0 - scheme.h_min) * static_cast<double>(i) / static_cast<double>(num_peaks - 1);
    }
    heights.back() = 1.0;
  }
  return MultimodalLandscape(length, std::move(peaks), std::move(heights), scheme);
}

// Instance file:
//   L=<length>
//   num_peaks=<count>
//   scheme=<equal|linear:h_min>
//   <bits> <height>        (one line per peak)
inline void write_instance(const MultimodalLandscape& land, std::ostream& out) {
  out << "L=" << land.length() << '\n';
  out << "num_peaks=" << land.num_peaks() << '\n';
  out << "scheme=" << land.scheme().to_string() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < land.num_peaks(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", land.heights()[i]);
    out << land.peaks()[i].to_string() << ' ' << buf << '\n';
  }
}

inline void write_instance(const MultimodalLandscape& land, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open instance file for writing: " + path);
  write_instance(land, out);
  if (!out) throw std::runtime_error("failed writing instance file: " + path);
}

inline MultimodalLandscape read_instance(std::istream& in, const std::string& origin = "<stream>") {
  auto header = [&](const std::string& key) {
    std::string line;
    if (!std::getline(in, line) || line.rfind(key + "=", 0) != 0) {
      throw ConfigError(origin + ": expected header '" + key + "=...'");
    }
    return line.substr(key.size() + 1);
  };
  std::size_t length = 0;
  std::size_t count = 0;
  try {
    length = std::stoul(header("L"));
    count = std::stoul(header("num_peaks"));
  } catch (const std::invalid_argument&) {
    throw ConfigError(origin + ": malformed numeric header");
  }
  const HeightScheme scheme = HeightScheme::parse(header("scheme"));
  std::vector<Genome> peaks;
  std::vector<double> heights;
  std::string bits;
  double h = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (!(in >> bits >> h)) throw ConfigError(origin + ": truncated peak list");
    if (bits.size() != length) throw ConfigError(origin + ": peak " + std::to_string(i) + " has wrong length");
    peaks.push_back(Genome::from_string(bits));
    heights.push_back(h);
  }
  return MultimodalLandscape(length, std::move(peaks), std::move(heights), scheme);
}

inline MultimodalLandscape read_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open instance file: " + path);
  return read_instance(in, path);
}

// ---------------------------------------------------------------------------
// Concatenated deceptive traps

/// Contribution of one k-bit block with `u` ones: 1 at u = k, otherwise
/// 1 - d - u(1 - d)/(k - 1).
inline double trap_block(std::size_t u, std::size_t k, double d) {
  if (k < 2) throw std::logic_error("trap_block: k must be >= 2");
  if (u > k) throw std::logic_error("trap_block: unitation exceeds block size");
  if (u == k) return 1.0;
  return 1.0 - d - static_cast<double>(u) * (1.0 - d) / static_cast<double>(k - 1);
}

class TrapConcat {
 public:
  TrapConcat(std::size_t m, std::size_t k, double d) : m_(m), k_(k), d_(d) {
    if (m < 1) throw ConfigError("trap: m must be >= 1");
    if (k < 2) throw ConfigError("trap: k must be >= 2");
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("trap: d must lie in (0, 1)");
    table_.resize(k + 1);
    for (std::size_t u = 0; u <= k; ++u) table_[u] = trap_block(u, k, d);
  }

  std::size_t blocks() const noexcept { return m_; }
  std::size_t block_size() const noexcept { return k_; }
  double signal() const noexcept { return d_; }
  std::size_t length() const noexcept { return m_ * k_; }
  double optimum() const noexcept { return static_cast<double>(m_); }

  std::string name() const {
    std::ostringstream os;
    os << "trap-m" << m_ << "-k" << k_ << "-d" << d_;
    return os.str();
  }

  double fitness(const Genome& x) const {
    if (x.size() != length()) throw ConfigError("trap: genome length does not match m*k");
    double f = 0.0;
    for (std::size_t i = 0; i < m_; ++i) f += table_[x.count(i * k_, k_)];
    return f;
  }

 private:
  std::size_t m_;
  std::size_t k_;
  double d_;
  std::vector<double> table_;
};

}  // namespace popsize
