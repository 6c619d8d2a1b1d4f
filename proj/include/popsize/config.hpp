#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <type_traits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "popsize/apga.hpp"
#include "popsize/core.hpp"
#include "popsize/gavaps.hpp"
#include "popsize/lifetime.hpp"
#include "popsize/operators.hpp"
#include "popsize/parameterless.hpp"
#include "popsize/problems.hpp"
#include "popsize/tga.hpp"

namespace popsize {

enum class Algorithm { apga, gavaps, tga, parameterless };
enum class ProblemFamily { onemax, multimodal, trap };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::apga: return "apga";
    case Algorithm::gavaps: return "gavaps";
    case Algorithm::tga: return "tga";
    case Algorithm::parameterless: return "parameterless";
  }
  return "?";
}

inline const char* to_string(ProblemFamily f) {
  switch (f) {
    case ProblemFamily::onemax: return "onemax";
    case ProblemFamily::multimodal: return "multimodal";
    case ProblemFamily::trap: return "trap";
  }
  return "?";
}

struct ProblemSpec {
  ProblemFamily family = ProblemFamily::multimodal;
  std::size_t length = 100;
  std::size_t peaks = 50;
  HeightScheme scheme{};
  std::uint64_t instance_seed = 1;
  std::string instance_file;
  std::size_t trap_m = 20;
  std::size_t trap_k = 4;
  double trap_d = 0.25;
};

/// One fully resolved experiment point.
struct ExperimentConfig {
  Algorithm algorithm = Algorithm::apga;
  ProblemSpec problem{};
  OperatorConfig ops{};
  std::size_t runs = 100;
  std::uint64_t max_evals = 1'000'000;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;
  ApgaConfig apga{};
  GavapsConfig gavaps{};
  TgaConfig tga{};
  ParameterlessConfig parameterless{};
  std::string csv_path;
  std::string trace_path;
  std::string rollup_path;
  /// Canonical `section.key=value` lines (sorted) of every parameter in effect.
  std::string canonical;
  std::string config_hash;
};

inline std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace detail {

inline std::string trim(std::string s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) out.push_back(trim(item));
  return out;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct KeyInfo {
  const char* key;
  const char* fallback;  ///< nullptr = required, "" = optional/derived
};

// Sections `apga`, `gavaps`, `tga`, `parameterless` and `lifetime` are bound
// to algorithms; the remaining sections are shared.
inline const std::vector<KeyInfo>& schema() {
  static const std::vector<KeyInfo> keys = {
      {"experiment.algorithm", nullptr},
      {"experiment.runs", "100"},
      {"experiment.max_evals", "1000000"},
      {"experiment.seed", "1"},
      {"experiment.threads", "0"},
      {"problem.family", nullptr},
      {"problem.length", "100"},
      {"problem.peaks", "50"},
      {"problem.scheme", "equal"},
      {"problem.instance_seed", ""},
      {"problem.instance_file", ""},
      {"problem.m", "20"},
      {"problem.k", "4"},
      {"problem.d", "0.25"},
      {"operators.pc", "0.9"},
      {"operators.pm", "1/L"},
      {"operators.tournament_k", ""},
      {"lifetime.min_lt", "1"},
      {"lifetime.max_lt", ""},
      {"apga.p0", "60"},
      {"gavaps.p0", "60"},
      {"gavaps.rho", "0.4"},
      {"gavaps.size_cap", "100000"},
      {"tga.n", "100"},
      {"parameterless.n0", "4"},
      {"parameterless.m", "4"},
      {"parameterless.mode", "steady_state"},
      {"output.csv", ""},
      {"output.trace", ""},
      {"output.rollup", ""},
  };
  return keys;
}

inline const KeyInfo* find_key(const std::string& key) {
  for (const auto& k : schema()) {
    if (key == k.key) return &k;
  }
  return nullptr;
}

inline bool key_applies(const std::string& key, Algorithm alg, ProblemFamily fam) {
  const std::string section = key.substr(0, key.find('.'));
  if (section == "apga") return alg == Algorithm::apga;
  if (section == "gavaps") return alg == Algorithm::gavaps;
  if (section == "tga") return alg == Algorithm::tga;
  if (section == "parameterless") return alg == Algorithm::parameterless;
  if (section == "lifetime") return alg == Algorithm::apga || alg == Algorithm::gavaps;
  if (key == "problem.length") return fam != ProblemFamily::trap;
  if (key == "problem.peaks" || key == "problem.scheme" || key == "problem.instance_seed" ||
      key == "problem.instance_file") {
    return fam == ProblemFamily::multimodal;
  }
  if (key == "problem.m" || key == "problem.k" || key == "problem.d") return fam == ProblemFamily::trap;
  return true;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T v{};
  if constexpr (std::is_unsigned_v<T>) {
    if (!text.empty() && text[0] == '-') throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  is >> v;
  if (!is || !is.eof()) {
    // Accept scientific notation for integer budgets such as 1e6.
    if constexpr (std::is_integral_v<T>) {
      std::istringstream ds(text);
      double d = 0;
      ds >> d;
      if (ds && ds.eof() && d >= 0 && d == static_cast<double>(static_cast<T>(d))) return static_cast<T>(d);
    }
    throw ConfigError(key + ": cannot parse '" + text + "'");
  }
  return v;
}

inline Algorithm parse_algorithm(const std::string& text) {
  if (text == "apga") return Algorithm::apga;
  if (text == "gavaps") return Algorithm::gavaps;
  if (text == "tga") return Algorithm::tga;
  if (text == "parameterless") return Algorithm::parameterless;
  throw ConfigError("experiment.algorithm: unknown algorithm '" + text +
                    "' (expected apga, gavaps, tga or parameterless)");
}

inline ProblemFamily parse_family(const std::string& text) {
  if (text == "onemax") return ProblemFamily::onemax;
  if (text == "multimodal") return ProblemFamily::multimodal;
  if (text == "trap") return ProblemFamily::trap;
  throw ConfigError("problem.family: unknown family '" + text + "' (expected onemax, multimodal or trap)");
}

inline PlgaMode parse_mode(const std::string& text) {
  if (text == "steady_state") return PlgaMode::steady_state;
  if (text == "generational") return PlgaMode::generational;
  throw ConfigError("parameterless.mode: expected steady_state or generational, got '" + text + "'");
}

}  // namespace detail

/// Raw configuration: `section.key -> value` plus sweep axes. Parsed from a
/// flat INI-style file:
///
///     [experiment]
///     algorithm = apga
///     [problem]
///     family = multimodal
///     peaks = 50
///     [sweep]
///     problem.peaks = 50, 100
///
/// Each sweep key lists values; the experiment is the cartesian product in
/// declaration order.
class ConfigSource {
 public:
  static ConfigSource parse(std::istream& in, const std::string& origin = "<config>") {
    ConfigSource src;
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find_first_of("#;");
      if (hash != std::string::npos) line.erase(hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const std::string where = origin + ":" + std::to_string(lineno);
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError(where + ": malformed section header");
        section = detail::trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
      const std::string key = detail::trim(line.substr(0, eq));
      const std::string value = detail::trim(line.substr(eq + 1));
      if (section.empty()) throw ConfigError(where + ": key '" + key + "' outside of a section");
      if (section == "sweep") {
        src.add_sweep(key, detail::split_list(value));
      } else {
        src.set(section + "." + key, value);
      }
    }
    return src;
  }

  static ConfigSource load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse(in, path);
  }

  void set(const std::string& key, const std::string& value) {
    if (!detail::find_key(key)) throw ConfigError("unknown configuration key '" + key + "'");
    values_[key] = value;
  }

  void add_sweep(const std::string& key, std::vector<std::string> values) {
    if (!detail::find_key(key)) throw ConfigError("unknown sweep key '" + key + "'");
    if (values.empty()) throw ConfigError("sweep key '" + key + "' has no values");
    for (auto& [k, v] : sweep_) {
      if (k == key) {
        v = std::move(values);
        return;
      }
    }
    sweep_.emplace_back(key, std::move(values));
  }

  const std::map<std::string, std::string>& values() const noexcept { return values_; }
  const std::vector<std::pair<std::string, std::vector<std::string>>>& sweep() const noexcept { return sweep_; }

  /// Expands sweep axes and resolves each point.
  std::vector<ExperimentConfig> expand() const {
    // Every explicitly given key must apply to at least one point.
    std::vector<std::map<std::string, std::string>> points{values_};
    for (const auto& [key, vals] : sweep_) {
      std::vector<std::map<std::string, std::string>> next;
      for (const auto& p : points) {
        for (const auto& v : vals) {
          auto q = p;
          q[key] = v;
          next.push_back(std::move(q));
        }
      }
      points = std::move(next);
    }
    std::vector<ExperimentConfig> out;
    std::set<std::string> used;
    for (const auto& p : points) {
      out.push_back(resolve(p, used));
    }
    for (const auto& [key, value] : values_) {
      if (!used.count(key)) {
        throw ConfigError("key '" + key + "' does not apply to the configured algorithm/problem");
      }
    }
    for (const auto& [key, vals] : sweep_) {
      if (!used.count(key)) throw ConfigError("sweep key '" + key + "' does not apply to any configured point");
    }
    return out;
  }

  ExperimentConfig resolve_single() const {
    auto all = expand();
    if (all.size() != 1) throw ConfigError("expected a single experiment, configuration expands to " +
                                           std::to_string(all.size()));
    return all.front();
  }

 private:
  static ExperimentConfig resolve(const std::map<std::string, std::string>& given, std::set<std::string>& used) {
    using namespace detail;
    auto raw = [&](const std::string& key) -> std::optional<std::string> {
      auto it = given.find(key);
      if (it == given.end()) return std::nullopt;
      return it->second;
    };
    auto required = [&](const std::string& key) {
      auto v = raw(key);
      if (!v) throw ConfigError("missing required key '" + key + "'");
      return *v;
    };

    ExperimentConfig cfg;
    cfg.algorithm = parse_algorithm(required("experiment.algorithm"));
    cfg.problem.family = parse_family(required("problem.family"));
    const Algorithm alg = cfg.algorithm;
    const ProblemFamily fam = cfg.problem.family;

    std::map<std::string, std::string> eff;  // effective values of applicable keys
    for (const auto& k : schema()) {
      const std::string key = k.key;
      if (!key_applies(key, alg, fam)) continue;
      if (auto v = raw(key)) {
        eff[key] = *v;
        used.insert(key);
      } else if (k.fallback && *k.fallback) {
        eff[key] = k.fallback;
      }
    }
    auto get = [&](const std::string& key) -> std::string {
      auto it = eff.find(key);
      return it == eff.end() ? std::string{} : it->second;
    };

    // Algorithm-dependent defaults.
    if (get("operators.tournament_k").empty()) {
      eff["operators.tournament_k"] = alg == Algorithm::parameterless ? "4" : "2";
    }
    if ((alg == Algorithm::apga || alg == Algorithm::gavaps) && get("lifetime.max_lt").empty()) {
      eff["lifetime.max_lt"] = alg == Algorithm::apga ? "11" : "7";
    }
    if (fam == ProblemFamily::multimodal && get("problem.instance_seed").empty() &&
        get("problem.instance_file").empty()) {
      eff["problem.instance_seed"] = get("experiment.seed");
    }

    cfg.runs = parse_number<std::size_t>("experiment.runs", get("experiment.runs"));
    cfg.max_evals = parse_number<std::uint64_t>("experiment.max_evals", get("experiment.max_evals"));
    cfg.master_seed = parse_number<std::uint64_t>("experiment.seed", get("experiment.seed"));
    cfg.threads = parse_number<unsigned>("experiment.threads", get("experiment.threads"));
    if (cfg.runs < 1) throw ConfigError("experiment.runs must be >= 1");
    if (cfg.max_evals < 1) throw ConfigError("experiment.max_evals must be >= 1");

    auto& prob = cfg.problem;
    switch (fam) {
      case ProblemFamily::onemax:
        prob.length = parse_number<std::size_t>("problem.length", get("problem.length"));
        if (prob.length < 2) throw ConfigError("problem.length must be >= 2");
        break;
      case ProblemFamily::multimodal:
        prob.length = parse_number<std::size_t>("problem.length", get("problem.length"));
        prob.peaks = parse_number<std::size_t>("problem.peaks", get("problem.peaks"));
        prob.scheme = HeightScheme::parse(get("problem.scheme"));
        prob.instance_file = get("problem.instance_file");
        if (prob.instance_file.empty()) {
          prob.instance_seed = parse_number<std::uint64_t>("problem.instance_seed", get("problem.instance_seed"));
        }
        if (prob.length < 2) throw ConfigError("problem.length must be >= 2");
        if (prob.peaks < 1) throw ConfigError("problem.peaks must be >= 1");
        if (prob.length < 64 && prob.peaks > (std::uint64_t{1} << prob.length)) {
          throw ConfigError("problem.peaks exceeds 2^problem.length");
        }
        break;
      case ProblemFamily::trap:
        prob.trap_m = parse_number<std::size_t>("problem.m", get("problem.m"));
        prob.trap_k = parse_number<std::size_t>("problem.k", get("problem.k"));
        prob.trap_d = parse_number<double>("problem.d", get("problem.d"));
        if (prob.trap_m < 1) throw ConfigError("problem.m must be >= 1");
        if (prob.trap_k < 2) throw ConfigError("problem.k must be >= 2");
        if (!(prob.trap_d > 0.0 && prob.trap_d < 1.0)) throw ConfigError("problem.d must lie in (0, 1)");
        break;
    }

    cfg.ops.pc = parse_number<double>("operators.pc", get("operators.pc"));
    const std::string pm = get("operators.pm");
    cfg.ops.pm = pm == "1/L" ? -1.0 : parse_number<double>("operators.pm", pm);
    if (pm != "1/L" && !(cfg.ops.pm >= 0.0 && cfg.ops.pm <= 1.0)) {
      throw ConfigError("operators.pm must lie in [0, 1] (or be '1/L')");
    }
    cfg.ops.tournament_k = parse_number<std::size_t>("operators.tournament_k", get("operators.tournament_k"));
    if (!(cfg.ops.pc >= 0.0 && cfg.ops.pc <= 1.0)) throw ConfigError("operators.pc must lie in [0, 1]");
    if (cfg.ops.tournament_k < 1) throw ConfigError("operators.tournament_k must be >= 1");

    LifetimeConfig lt;
    if (alg == Algorithm::apga || alg == Algorithm::gavaps) {
      lt.min_lt = parse_number<int>("lifetime.min_lt", get("lifetime.min_lt"));
      lt.max_lt = parse_number<int>("lifetime.max_lt", get("lifetime.max_lt"));
      lt.validate();
    }

    switch (alg) {
      case Algorithm::apga:
        cfg.apga.ops = cfg.ops;
        cfg.apga.lifetime = lt;
        cfg.apga.initial_size = parse_number<std::size_t>("apga.p0", get("apga.p0"));
        cfg.apga.validate();
        break;
      case Algorithm::gavaps:
        cfg.gavaps.ops = cfg.ops;
        cfg.gavaps.lifetime = lt;
        cfg.gavaps.initial_size = parse_number<std::size_t>("gavaps.p0", get("gavaps.p0"));
        cfg.gavaps.rho = parse_number<double>("gavaps.rho", get("gavaps.rho"));
        cfg.gavaps.size_cap = parse_number<std::size_t>("gavaps.size_cap", get("gavaps.size_cap"));
        cfg.gavaps.validate();
        break;
      case Algorithm::tga:
        cfg.tga.ops = cfg.ops;
        cfg.tga.size = parse_number<std::size_t>("tga.n", get("tga.n"));
        cfg.tga.validate();
        break;
      case Algorithm::parameterless:
        cfg.parameterless.ops = cfg.ops;
        cfg.parameterless.base_size = parse_number<std::size_t>("parameterless.n0", get("parameterless.n0"));
        cfg.parameterless.preference = parse_number<unsigned>("parameterless.m", get("parameterless.m"));
        cfg.parameterless.mode = parse_mode(get("parameterless.mode"));
        cfg.parameterless.validate();
        break;
    }

    cfg.csv_path = get("output.csv");
    cfg.trace_path = get("output.trace");
    cfg.rollup_path = get("output.rollup");

    // Output paths do not affect results and stay out of the hash.
    std::ostringstream canon;
    for (const auto& [key, value] : eff) {
      if (key.rfind("output.", 0) == 0 || key == "experiment.threads") continue;
      canon << key << '=' << value << '\n';
    }
    cfg.canonical = canon.str();
    cfg.config_hash = hex64(fnv1a64(cfg.canonical));
    return cfg;
  }

  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, std::vector<std::string>>> sweep_;
};

}  // namespace popsize
