#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedtree/trace.hpp"
#include "seedtree/tree.hpp"

namespace seedtree {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct TraceSpec {
  std::string path;  // empty selects the synthetic generator
  TraceFormat format = TraceFormat::kItems;
  std::uint64_t n_items = 4095;
  std::uint64_t requests = 100000;
  double locality = 0.0;

  bool synthetic() const { return path.empty(); }
};

struct ExperimentConfig {
  std::uint32_t capacity = 4;
  double occupancy = 0.5;
  std::uint64_t seed = 1;
  std::uint32_t repeats = 1;
  TraceSpec trace;
  DigestAlgo algo = DigestAlgo::kSha512;
  bool validate = false;  // full invariant scan after every access
};

/// Rejects capacity outside [1, 64], occupancy outside (0,1), repeats < 1 and
/// synthetic specs with requests < n_items.
void validate_config(const ExperimentConfig& config);

struct ResultRow {
  std::uint32_t run_id = 0;
  std::uint32_t c = 0;
  double f = 0.0;
  double locality = 0.0;
  std::uint64_t m = 0;
  std::uint64_t access_cost = 0;
  std::uint64_t reconfig_cost = 0;
  std::uint64_t total_cost = 0;
  double mean_attempts = 0.0;   // over accesses that performed a push-down
  double mean_mru_slack = 0.0;  // mean of level_found - mru_level(rank)
  double lower_bound = 0.0;
  double ratio = 0.0;  // total_cost / lower_bound
  std::uint64_t oblivious_cost = 0;
  std::uint64_t static_opt_cost = 0;
};

/// One independent run; the run seed is config.seed + run_index. Synthetic
/// traces are regenerated per run, file traces are shared via `shared_trace`.
ResultRow run_one(const ExperimentConfig& config, std::uint32_t run_index,
                  const Trace* shared_trace = nullptr);

/// `repeats` independent runs, executed in parallel, rows ordered by run id.
/// Deterministic in the config.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, unsigned threads = 0);

struct SweepGrid {
  ExperimentConfig base;
  std::vector<std::uint32_t> capacities;
  std::vector<double> occupancies;
  std::vector<double> localities;
};

/// Cross-product sweep; rows ordered lexicographically by (c, f, locality,
/// run). A failing cell aborts the sweep with the cell identified.
std::vector<ResultRow> run_sweep(const SweepGrid& grid, unsigned threads = 0);

/// Shortest round-trip decimal representation; byte-stable across reruns.
std::string format_double(double value);

std::string csv_header();

/// CSV with '#'-prefixed metadata comments, a header row matching ResultRow
/// field names, and one line per row. Costs are raw edge counts.
void write_csv(std::ostream& out, std::span<const ResultRow> rows,
               std::span<const std::string> metadata);

/// Human-oriented config echo embedded in CSV metadata.
std::string describe_config(const ExperimentConfig& config);

}  // namespace seedtree
