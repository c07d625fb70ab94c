// Acceptance suite: one binary, one printed PASS/FAIL line per criterion.
//
//   ./seedtree_acceptance               desk-scale suite (CI)
//   ./seedtree_acceptance --full-scale  adds the 65,535-item / 10^6-request
//                                        reproduction of the locality trend
//                                        (several times the desk-scale runtime)
//
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "seedtree/baselines.hpp"
#include "seedtree/experiment.hpp"
#include "seedtree/matching.hpp"
#include "seedtree/metrics.hpp"
#include "seedtree/trace.hpp"
#include "seedtree/tree.hpp"
#include "support.hpp"

using namespace seedtree;

namespace {

constexpr std::uint64_t kDeskItems = 4095;
constexpr std::uint64_t kDeskRequests = 100000;
constexpr double kDeskLocality = 0.6;
constexpr std::uint64_t kBaseSeed = 20240101;

// Regression pin for criterion 5: uniform trace, c=4, f=1/2, 10^5 requests,
// seed kBaseSeed, established by the first run of this suite.
constexpr double kPinnedUniformRatio = 14.06557080350645;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << detail
            << std::endl;
  if (!pass) ++g_failures;
}

std::vector<ItemId> dense_items(std::uint64_t n) {
  std::vector<ItemId> items(n);
  std::iota(items.begin(), items.end(), ItemId{0});
  return items;
}

double mean_of(const std::vector<double>& xs) {
  double sum = 0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

// Mean per-run costs over `repeats` runs of one configuration.
struct CellSummary {
  double access = 0;
  double total = 0;
  double oblivious = 0;
  double max_ratio = 0;
};

CellSummary summarize(std::uint32_t c, double f, double locality, std::uint32_t repeats,
                      std::uint64_t seed) {
  ExperimentConfig config;
  config.capacity = c;
  config.occupancy = f;
  config.seed = seed;
  config.repeats = repeats;
  config.trace.n_items = kDeskItems;
  config.trace.requests = kDeskRequests;
  config.trace.locality = locality;
  CellSummary cell;
  std::vector<double> access, total, oblivious;
  for (const ResultRow& row : run_experiment(config)) {
    access.push_back(static_cast<double>(row.access_cost));
    total.push_back(static_cast<double>(row.total_cost));
    oblivious.push_back(static_cast<double>(row.oblivious_cost));
    cell.max_ratio = std::max(cell.max_ratio, row.ratio);
  }
  cell.access = mean_of(access);
  cell.total = mean_of(total);
  cell.oblivious = mean_of(oblivious);
  return cell;
}

double& tracked_max_ratio() {
  static double value = 0;
  return value;
}

void track_ratio(double ratio) { tracked_max_ratio() = std::max(tracked_max_ratio(), ratio); }

// --- criterion 1: invariants under full validation --------------------------

void criterion_invariants() {
  bool pass = true;
  std::string detail;
  double worst_seconds = 0;
  for (std::uint32_t c : {1u, 2u, 4u, 8u}) {
    for (double f : {0.25, 0.5, 0.75}) {
      const auto started = std::chrono::steady_clock::now();
      try {
        const Trace trace =
            generate_trace(kDeskItems, kDeskRequests, kDeskLocality, kBaseSeed + c);
        SeedTree::Params params{c, f, kBaseSeed + c};
        params.validate_each_access = true;  // throws on any violation
        SeedTree tree(dense_items(kDeskItems), params);
        for (ItemId v : trace.requests) tree.access(v);
        if (tree.stats().reversal_checks != tree.stats().failed_attempts) {
          pass = false;
          detail += " unverified reversal at c=" + std::to_string(c);
        }
      } catch (const std::exception& e) {
        pass = false;
        detail += " c=" + std::to_string(c) + " f=" + format_double(f) + ": " + e.what();
      }
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      worst_seconds = std::max(worst_seconds, seconds);
      if (seconds >= 120.0) {
        pass = false;
        detail += " c=" + std::to_string(c) + " f=" + format_double(f) + " overran 2 min";
      }
    }
  }
  report(1, pass,
         "level conservation, capacity, residency and reversal digests over 12 configs x 10^5 "
         "accesses (worst config " +
             format_double(worst_seconds) + "s)" + detail);
}

// --- criterion 2: uniform terminal selection --------------------------------

void criterion_uniform_terminal() {
  // Large universe so one hash realization cannot bias the per-step
  // left/right population frequencies measurably, plus background accesses of
  // random items between trials so the circulating item set keeps mixing.
  SeedTree tree(dense_items(65535), {2, 0.5, kBaseSeed});
  Rng picker(kBaseSeed + 2);
  std::vector<std::uint64_t> hits(8, 0);
  int trials = 0;
  for (; trials < 10000; ++trials) {
    tree.access(picker.bounded(65535));
    tree.access(picker.bounded(65535));
    std::vector<ItemId> pool;
    for (NodeIndex j = 8; j <= 15; ++j) {
      for (ItemId v : tree.node_items(j)) pool.push_back(v);
    }
    if (pool.empty()) break;
    const AccessRecord rec = tree.access(pool[picker.bounded(pool.size())]);
    if (rec.level_found != 3) break;
    ++hits[rec.push_down_terminal - 8];
  }
  const double stat = test::chi_square_uniform(hits);
  const bool pass = trials == 10000 && stat < test::kChi2Df7;
  report(2, pass,
         "committed depth-3 node chi-square = " + format_double(stat) + " over " +
             std::to_string(trials) + " trials (0.999 quantile " + format_double(test::kChi2Df7) +
             ")");
}

// --- criterion 3: push-down attempt bound -----------------------------------

void criterion_attempt_bound() {
  ExperimentConfig config;
  config.capacity = 4;
  config.seed = kBaseSeed;
  config.repeats = 1;
  config.trace.n_items = kDeskItems;
  config.trace.requests = kDeskRequests;
  config.trace.locality = kDeskLocality;

  config.occupancy = 0.5;
  const ResultRow half = run_experiment(config).front();
  track_ratio(half.ratio);
  config.occupancy = 0.75;
  const ResultRow three_quarters = run_experiment(config).front();
  track_ratio(three_quarters.ratio);

  const bool pass = half.mean_attempts <= 2.2 && three_quarters.mean_attempts <= 4.4;
  report(3, pass,
         "mean push-down attempts f=0.5: " + format_double(half.mean_attempts) +
             " (<= 2.2), f=0.75: " + format_double(three_quarters.mean_attempts) + " (<= 4.4)");
}

// --- criterion 4: MRU slack --------------------------------------------------

void criterion_mru_slack() {
  ExperimentConfig config;
  config.capacity = 4;
  config.occupancy = 0.5;
  config.seed = kBaseSeed + 4;
  config.repeats = 3;
  config.trace.n_items = kDeskItems;
  config.trace.requests = kDeskRequests;
  config.trace.locality = kDeskLocality;
  double worst = 0;
  for (const ResultRow& row : run_experiment(config)) {
    worst = std::max(worst, row.mean_mru_slack);
    track_ratio(row.ratio);
  }
  report(4, worst <= 3.5,
         "running mean of level_found - mru_level = " + format_double(worst) +
             " (bound 3 + 0.5 slack)");
}

// --- criterion 5: competitive ratio ------------------------------------------

void criterion_competitive() {
  ExperimentConfig config;
  config.capacity = 4;
  config.occupancy = 0.5;
  config.seed = kBaseSeed;
  config.repeats = 1;
  config.trace.n_items = kDeskItems;
  config.trace.requests = kDeskRequests;
  config.trace.locality = 0.0;  // uniform-random trace
  const ResultRow row = run_experiment(config).front();
  track_ratio(row.ratio);

  const double drift = std::abs(row.ratio - kPinnedUniformRatio) / kPinnedUniformRatio;
  const bool pass = tracked_max_ratio() <= 43.0 && drift < 1e-9;
  report(5, pass,
         "max ratio over all tested configs = " + format_double(tracked_max_ratio()) +
             " (<= 43); pinned uniform-trace ratio " + format_double(row.ratio) +
             " (expected " + format_double(kPinnedUniformRatio) + ")");
}

// --- criterion 6: locality trend vs the oblivious baseline -------------------

void criterion_locality_trend(bool full_scale) {
  const std::vector<double> localities{0.0, 0.3, 0.6, 0.9};
  std::vector<double> gaps;
  bool beats_oblivious = true;
  for (double p : localities) {
    const CellSummary cell = summarize(4, 0.5, p, 5, kBaseSeed + 6);
    track_ratio(cell.max_ratio);
    gaps.push_back(cell.oblivious - cell.access);
    if (p >= 0.3 && cell.access >= cell.oblivious) beats_oblivious = false;
  }
  const bool monotone = gaps[0] < gaps[1] && gaps[1] < gaps[2] && gaps[2] < gaps[3];
  report(6, beats_oblivious && monotone,
         "access-cost gap to oblivious across locality {0,0.3,0.6,0.9} = {" +
             format_double(gaps[0]) + ", " + format_double(gaps[1]) + ", " +
             format_double(gaps[2]) + ", " + format_double(gaps[3]) + "}");

  if (!full_scale) return;
  // Full-size reproduction of the same trend.
  bool full_pass = true;
  std::vector<double> full_gaps;
  for (double p : localities) {
    ExperimentConfig config;
    config.capacity = 4;
    config.occupancy = 0.5;
    config.seed = kBaseSeed + 60;
    config.repeats = 3;
    config.trace.n_items = 65535;
    config.trace.requests = 1000000;
    config.trace.locality = p;
    std::vector<double> access, oblivious;
    for (const ResultRow& row : run_experiment(config)) {
      access.push_back(static_cast<double>(row.access_cost));
      oblivious.push_back(static_cast<double>(row.oblivious_cost));
      track_ratio(row.ratio);
    }
    full_gaps.push_back(mean_of(oblivious) - mean_of(access));
    if (p >= 0.3 && mean_of(access) >= mean_of(oblivious)) full_pass = false;
  }
  for (std::size_t i = 1; i < full_gaps.size(); ++i) {
    if (full_gaps[i - 1] >= full_gaps[i]) full_pass = false;
  }
  report(6, full_pass,
         "full-scale (65535 items, 10^6 requests) gap trend = {" + format_double(full_gaps[0]) +
             ", " + format_double(full_gaps[1]) + ", " + format_double(full_gaps[2]) + ", " +
             format_double(full_gaps[3]) + "}");
}

// --- criterion 7: capacity trend ----------------------------------------------

void criterion_capacity_trend() {
  std::vector<double> totals;
  for (std::uint32_t c : {2u, 4u, 8u, 16u}) {
    const CellSummary cell = summarize(c, 0.5, kDeskLocality, 5, kBaseSeed + 7);
    track_ratio(cell.max_ratio);
    totals.push_back(cell.total);
  }
  const bool decreasing = totals[0] > totals[1] && totals[1] > totals[2];
  const double gain_4_to_8 = totals[1] - totals[2];
  const double gain_8_to_16 = totals[2] - totals[3];
  report(7, decreasing && gain_8_to_16 < gain_4_to_8,
         "mean total cost c={2,4,8,16} = {" + format_double(totals[0]) + ", " +
             format_double(totals[1]) + ", " + format_double(totals[2]) + ", " +
             format_double(totals[3]) + "}; gain 8->16 " + format_double(gain_8_to_16) +
             " < gain 4->8 " + format_double(gain_4_to_8));
}

// --- criterion 8: occupancy trend ----------------------------------------------

void criterion_occupancy_trend() {
  const std::vector<double> occupancies{0.25, 0.4, 0.5, 0.6, 0.75};
  std::vector<double> totals;
  for (double f : occupancies) {
    const CellSummary cell = summarize(12, f, kDeskLocality, 5, kBaseSeed + 8);
    track_ratio(cell.max_ratio);
    totals.push_back(cell.total);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < totals.size(); ++i) {
    if (totals[i] < totals[best]) best = i;
  }
  const bool pass = best >= 1 && best <= 3;  // 0.4, 0.5 or 0.6
  report(8, pass,
         "total-cost minimum at f=" + format_double(occupancies[best]) +
             " over {0.25,0.4,0.5,0.6,0.75} at c=12");
}

// --- criterion 9: matching model -----------------------------------------------

void criterion_matching() {
  bool pass = true;
  std::string detail = "2+c matchings, search parity, per-move deltas, delta replay";
  try {
    SeedTree tree(dense_items(255), {3, 0.5, kBaseSeed + 9});
    const Trace trace = generate_trace(255, 1000, 0.5, kBaseSeed + 9);
    Rng sampler(kBaseSeed);

    MatchingSet before = export_matchings(tree);
    validate_matching_set(before);
    if (before.membership.size() + 2 != 2 + tree.capacity()) pass = false;

    std::size_t checked_pairs = 0;
    for (ItemId v : trace.requests) {
      // Search parity on the current state for a random item.
      const ItemId probe = sampler.bounded(255);
      if (matching_search(before, probe, tree.addresses()) != tree.find(probe).first) {
        pass = false;
        detail = "matching_search diverged from find";
        break;
      }
      ++checked_pairs;

      tree.access(v);
      const MatchingSet after = export_matchings(tree);
      const auto deltas = diff(before, after);
      for (const MatchingDelta& delta : deltas) {
        if (delta.removals.size() > 1 || delta.additions.size() > 1) {
          pass = false;
          detail = "a single item move produced more than 1+1 edges";
        }
      }
      const MatchingSet rebuilt = apply_deltas(before, deltas);
      if (rebuilt.membership != after.membership) {
        pass = false;
        detail = "delta replay failed to reconstruct the state";
        break;
      }
      before = after;
    }
    if (checked_pairs < 1000) pass = false;
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(9, pass, detail);
}

// --- criterion 10: trace generator and rank oracle ------------------------------

void criterion_trace_generator() {
  bool pass = true;
  std::string detail;

  for (double p : {0.3, 0.6, 0.9}) {
    const Trace trace = generate_trace(kDeskItems, 100000, p, kBaseSeed + 10);
    const double err = std::abs(trace.meta.stage2_repeat_fraction - p);
    if (err > 0.012) {
      pass = false;
      detail += " stage-2 fraction off by " + format_double(err) + " at p=" + format_double(p);
    }
    std::set<ItemId> distinct(trace.requests.begin(), trace.requests.end());
    if (distinct.size() != kDeskItems) {
      pass = false;
      detail += " distinct != n at p=" + format_double(p);
    }
  }

  const Trace big = generate_trace(65535, 1000000, 0.6, kBaseSeed + 11);
  if (std::set<ItemId>(big.requests.begin(), big.requests.end()).size() != 65535) {
    pass = false;
    detail += " 65535-item trace missed ids";
  }

  const Trace oracle_trace = generate_trace(500, 10000, 0.6, kBaseSeed + 12);
  RankTracker tracker(oracle_trace.n_items, oracle_trace.requests.size());
  for (std::size_t t = 0; t < oracle_trace.requests.size(); ++t) {
    if (tracker.rank_of(oracle_trace.requests[t]) !=
        test::brute_force_rank(oracle_trace.requests, t, oracle_trace.n_items)) {
      pass = false;
      detail += " rank mismatch at t=" + std::to_string(t);
      break;
    }
    tracker.record(oracle_trace.requests[t]);
  }

  report(10, pass,
         "stage-2 fraction within 0.012, exact distinct counts, rank oracle parity over 10^4 "
         "requests" +
             detail);
}

}  // namespace

int main(int argc, char** argv) {
  bool full_scale = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--full-scale") == 0) full_scale = true;
  }

  criterion_invariants();
  criterion_uniform_terminal();
  criterion_attempt_bound();
  criterion_mru_slack();
  criterion_locality_trend(full_scale);
  criterion_capacity_trend();
  criterion_occupancy_trend();
  criterion_matching();
  criterion_trace_generator();
  criterion_competitive();  // last: folds in every ratio the suite produced

  if (g_failures == 0) {
    std::cout << "all acceptance criteria passed" << std::endl;
  } else {
    std::cout << g_failures << " acceptance criteria FAILED" << std::endl;
  }
  return g_failures;
}
