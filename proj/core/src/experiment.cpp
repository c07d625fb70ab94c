#include "seedtree/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "seedtree/baselines.hpp"
#include "seedtree/metrics.hpp"

namespace seedtree {

namespace {

// Runs jobs on a small pool; results land in input order regardless of
// completion order. The first failing job (by index) aborts with its message.
std::vector<ResultRow> run_jobs(const std::vector<std::function<ResultRow()>>& jobs,
                                unsigned threads) {
  std::vector<ResultRow> results(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned pool =
      std::min<std::size_t>(threads > 0 ? threads : hw, jobs.size());

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        results[i] = jobs[i]();
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };

  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::thread> workers;
    workers.reserve(pool);
    for (unsigned i = 0; i < pool; ++i) workers.emplace_back(worker);
    for (std::thread& t : workers) t.join();
  }

  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) throw std::runtime_error(errors[i]);
  }
  return results;
}

std::string cell_tag(const ExperimentConfig& config) {
  return "cell c=" + std::to_string(config.capacity) + " f=" + format_double(config.occupancy) +
         " locality=" + format_double(config.trace.locality);
}

}  // namespace

void validate_config(const ExperimentConfig& config) {
  if (config.capacity < 1 || config.capacity > 64) {
    throw std::invalid_argument("capacity must lie in [1, 64]");
  }
  if (!(config.occupancy > 0.0) || !(config.occupancy < 1.0)) {
    throw std::invalid_argument("occupancy must lie strictly inside (0, 1)");
  }
  if (config.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  if (config.trace.synthetic()) {
    if (config.trace.n_items < 1) throw std::invalid_argument("item count must be >= 1");
    if (config.trace.requests < config.trace.n_items) {
      throw std::invalid_argument("request count must be >= item count");
    }
    if (!(config.trace.locality >= 0.0 && config.trace.locality <= 0.9)) {
      throw std::invalid_argument("locality must lie in [0, 0.9]");
    }
  }
}

ResultRow run_one(const ExperimentConfig& config, std::uint32_t run_index,
                  const Trace* shared_trace) {
  const std::uint64_t run_seed = config.seed + run_index;

  Trace local;
  const Trace* trace = shared_trace;
  if (trace == nullptr) {
    local = generate_trace(config.trace.n_items, config.trace.requests, config.trace.locality,
                           run_seed);
    trace = &local;
  }

  std::vector<ItemId> items(trace->n_items);
  std::iota(items.begin(), items.end(), ItemId{0});
  SeedTree tree(std::move(items),
                {config.capacity, config.occupancy, run_seed, config.algo, config.validate});

  // The oblivious baseline reads the same initial placement the adaptive run
  // starts from; find() never mutates, so one tree serves both passes.
  const std::uint64_t oblivious = oblivious_access_cost(tree, trace->requests);

  RankTracker tracker(trace->n_items, trace->requests.size());
  MruAudit audit(config.capacity);
  CostLedger ledger;
  ledger.keep_log = false;
  std::uint64_t mru_sum = 0;
  std::uint64_t attempts = 0;
  std::uint64_t push_down_accesses = 0;

  for (ItemId v : trace->requests) {
    const std::uint64_t rank = tracker.rank_of(v);
    const AccessRecord rec = tree.access(v);
    ledger.add(rec);
    audit.add(rec.level_found, rank);
    mru_sum += mru_level(rank, config.capacity);
    if (rec.level_found > 0) {
      ++push_down_accesses;
      attempts += rec.push_down_attempts;
    }
    tracker.record(v);
  }
  ledger.lower_bound = static_cast<double>(mru_sum) / kLowerBoundDivisor;

  ResultRow row;
  row.run_id = run_index;
  row.c = config.capacity;
  row.f = config.occupancy;
  row.locality = trace->meta.locality;
  row.m = trace->requests.size();
  row.access_cost = ledger.access_cost;
  row.reconfig_cost = ledger.reconfig_cost;
  row.total_cost = ledger.total_cost;
  row.mean_attempts = push_down_accesses > 0
                          ? static_cast<double>(attempts) / static_cast<double>(push_down_accesses)
                          : 0.0;
  row.mean_mru_slack = audit.mean();
  row.lower_bound = ledger.lower_bound;
  if (ledger.lower_bound > 0.0) {
    row.ratio = static_cast<double>(ledger.total_cost) / ledger.lower_bound;
  } else {
    row.ratio = ledger.total_cost == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  row.oblivious_cost = oblivious;
  row.static_opt_cost = static_optimal_cost(trace->requests, config.capacity);
  return row;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, unsigned threads) {
  validate_config(config);

  Trace shared;
  const Trace* shared_ptr = nullptr;
  if (!config.trace.synthetic()) {
    shared = ingest_trace(config.trace.path, config.trace.format);
    shared_ptr = &shared;
  }

  std::vector<std::function<ResultRow()>> jobs;
  jobs.reserve(config.repeats);
  for (std::uint32_t run = 0; run < config.repeats; ++run) {
    jobs.emplace_back([&config, run, shared_ptr] { return run_one(config, run, shared_ptr); });
  }
  return run_jobs(jobs, threads);
}

std::vector<ResultRow> run_sweep(const SweepGrid& grid, unsigned threads) {
  if (grid.capacities.empty() || grid.occupancies.empty() || grid.localities.empty()) {
    throw std::invalid_argument("sweep grid must list at least one value per axis");
  }

  auto capacities = grid.capacities;
  auto occupancies = grid.occupancies;
  auto localities = grid.localities;
  std::sort(capacities.begin(), capacities.end());
  std::sort(occupancies.begin(), occupancies.end());
  std::sort(localities.begin(), localities.end());

  std::vector<ExperimentConfig> cells;
  for (std::uint32_t c : capacities) {
    for (double f : occupancies) {
      for (double locality : localities) {
        ExperimentConfig cell = grid.base;
        cell.capacity = c;
        cell.occupancy = f;
        cell.trace.locality = locality;
        validate_config(cell);
        cells.push_back(cell);
      }
    }
  }

  Trace shared;
  const Trace* shared_ptr = nullptr;
  if (!grid.base.trace.synthetic()) {
    shared = ingest_trace(grid.base.trace.path, grid.base.trace.format);
    shared_ptr = &shared;
  }

  std::vector<std::function<ResultRow()>> jobs;
  jobs.reserve(cells.size() * grid.base.repeats);
  for (const ExperimentConfig& cell : cells) {
    for (std::uint32_t run = 0; run < cell.repeats; ++run) {
      jobs.emplace_back([&cell, run, shared_ptr]() -> ResultRow {
        try {
          return run_one(cell, run, shared_ptr);
        } catch (const std::exception& e) {
          throw std::runtime_error(cell_tag(cell) + " run=" + std::to_string(run) + ": " +
                                   e.what());
        }
      });
    }
  }
  return run_jobs(jobs, threads);
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string csv_header() {
  return "run_id,c,f,locality,m,access_cost,reconfig_cost,total_cost,mean_attempts,"
         "mean_mru_slack,lower_bound,ratio,oblivious_cost,static_opt_cost";
}

void write_csv(std::ostream& out, std::span<const ResultRow> rows,
               std::span<const std::string> metadata) {
  out << "# seedtree-csv v1\n";
  out << "# tool: seedtree " << kToolVersion << "\n";
  for (const std::string& line : metadata) out << "# " << line << "\n";
  out << "# costs are raw edge counts; divide by m for per-request figures\n";
  out << csv_header() << "\n";
  for (const ResultRow& r : rows) {
    out << r.run_id << ',' << r.c << ',' << format_double(r.f) << ','
        << format_double(r.locality) << ',' << r.m << ',' << r.access_cost << ','
        << r.reconfig_cost << ',' << r.total_cost << ',' << format_double(r.mean_attempts) << ','
        << format_double(r.mean_mru_slack) << ',' << format_double(r.lower_bound) << ','
        << format_double(r.ratio) << ',' << r.oblivious_cost << ',' << r.static_opt_cost << '\n';
  }
}

std::string describe_config(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "config: capacity=" << config.capacity << " occupancy=" << format_double(config.occupancy)
      << " seed=" << config.seed << " repeats=" << config.repeats
      << " algo=" << to_string(config.algo);
  if (config.trace.synthetic()) {
    out << " trace=synthetic items=" << config.trace.n_items
        << " requests=" << config.trace.requests
        << " locality=" << format_double(config.trace.locality);
  } else {
    out << " trace=" << config.trace.path << " format=" << to_string(config.trace.format);
  }
  return out.str();
}

}  // namespace seedtree
