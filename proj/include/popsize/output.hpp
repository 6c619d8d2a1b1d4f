#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "popsize/config.hpp"
#include "popsize/experiment.hpp"
#include "popsize/random.hpp"
#include "popsize/run.hpp"

namespace popsize {

namespace detail {

inline std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string csv_optional(const std::optional<double>& v) { return v ? csv_number(*v) : "NA"; }

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace detail

inline constexpr const char* kSummaryHeader = "algorithm,problem,runs,sr,mbf,aes,aps,seed,prng_id,config_hash";

/// Summary rows, comma separated, LF line ends. AES/APS are "NA" without
/// successes.
inline void write_summary_csv(std::ostream& out, const std::vector<MetricsSummary>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& s : rows) {
    out << s.algorithm << ',' << s.problem << ',' << s.runs << ',' << detail::csv_number(s.sr) << ','
        << detail::csv_number(s.mbf) << ',' << detail::csv_optional(s.aes) << ',' << detail::csv_optional(s.aps)
        << ',' << s.seed << ',' << Rng::kAlgorithmId << ',' << s.config_hash << '\n';
  }
}

inline void emit_csv(const std::vector<MetricsSummary>& rows, const std::string& path) {
  detail::write_file(path, [&](std::ostream& out) { write_summary_csv(out, rows); });
}

/// Per-run records, one row per run.
inline void write_runs_csv(std::ostream& out, const MetricsSummary& s) {
  out << "run,outcome,evaluations,best_fitness,steps,final_size,success_size\n";
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    const auto& r = s.records[i];
    out << i << ',' << to_string(r.outcome) << ',' << r.evaluations << ',' << detail::csv_number(r.best_fitness)
        << ',' << r.steps << ',' << r.final_size << ',' << r.success_size << '\n';
  }
}

/// Trace rows. Two `#` comment lines carry the PRNG id and config hash, then
/// a header row. Single-population engines write
/// evaluations,generation,population_size; the parameter-less GA writes
/// evaluations,min_size,max_size.
inline void write_trace(std::ostream& out, const TraceSink& trace, bool multi_population,
                        const std::string& config_hash) {
  out << "# prng_id=" << Rng::kAlgorithmId << '\n';
  out << "# config_hash=" << config_hash << '\n';
  if (multi_population) {
    out << "evaluations,min_size,max_size\n";
    for (const auto& s : trace.samples) out << s.evaluations << ',' << s.min_size << ',' << s.max_size << '\n';
  } else {
    out << "evaluations,generation,population_size\n";
    for (const auto& s : trace.samples) out << s.evaluations << ',' << s.generation << ',' << s.population_size << '\n';
  }
}

inline void emit_trace(const TraceSink& trace, bool multi_population, const std::string& config_hash,
                       const std::string& path) {
  detail::write_file(path, [&](std::ostream& out) { write_trace(out, trace, multi_population, config_hash); });
}

/// Per-population-size rollup of a parameter-less run.
inline void write_rollups(std::ostream& out, const TraceSink& trace, const std::string& config_hash) {
  out << "# prng_id=" << Rng::kAlgorithmId << '\n';
  out << "# config_hash=" << config_hash << '\n';
  out << "size,evaluations,max_fitness\n";
  for (const auto& r : trace.rollups) {
    if (r.size == 0) continue;
    out << r.size << ',' << r.evaluations << ',' << detail::csv_number(r.max_fitness) << '\n';
  }
}

inline void emit_rollups(const TraceSink& trace, const std::string& config_hash, const std::string& path) {
  detail::write_file(path, [&](std::ostream& out) { write_rollups(out, trace, config_hash); });
}

/// Fixed implementation choices echoed next to every result.
inline std::string implementation_notes() {
  return "note.prng=mt19937_64; per-run seed = splitmix64(master_seed + (run_index + 1) * 0x9E3779B97F4A7C15)\n"
         "note.lifetime_rounding=nearest integer, half away from zero, clamped to [min_lt, max_lt]\n"
         "note.height_scheme_default=equal\n"
         "note.crossover_cuts=1 <= c1 < c2 <= L uniform, segment [c1, c2) exchanged\n"
         "note.mutation=applied to both offspring\n"
         "note.gavaps_offspring=max(2, round(rho * size)) rounded up to even\n"
         "note.plga_generation=steady_state counts ceil(N/2) iterations as one generation\n";
}

/// Sidecar metadata: every resolved parameter of every row plus the
/// implementation notes.
inline void write_metadata(std::ostream& out, const std::vector<ExperimentConfig>& points) {
  out << "prng_id=" << Rng::kAlgorithmId << '\n';
  out << implementation_notes();
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << "[row " << i << "]\n";
    out << "config_hash=" << points[i].config_hash << '\n';
    out << points[i].canonical;
  }
}

inline void emit_metadata(const std::vector<ExperimentConfig>& points, const std::string& path) {
  detail::write_file(path, [&](std::ostream& out) { write_metadata(out, points); });
}

}  // namespace popsize
