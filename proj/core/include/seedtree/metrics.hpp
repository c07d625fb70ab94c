#pragma once

#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <unordered_map>
#include <vector>

#include "seedtree/tree.hpp"

namespace seedtree {

/// Scaling constant of the working-set lower bound: no online algorithm beats
/// the rank-implied access cost by more than this factor.
inline constexpr double kLowerBoundDivisor = 1.0 + std::numbers::e;

/// Level of slot #rank in a complete binary tree with `capacity` slots per
/// node: floor(log2(floor((rank-1)/capacity) + 1)). Monotone non-decreasing
/// in rank, non-increasing in capacity.
std::uint32_t mru_level(std::uint64_t rank, std::uint32_t capacity);

namespace detail {

/// 1-based prefix sums with point updates.
class FenwickTree {
 public:
  explicit FenwickTree(std::size_t size) : tree_(size + 1, 0) {}

  std::size_t size() const { return tree_.size() - 1; }
  void add(std::size_t pos, std::int64_t delta);
  std::uint64_t prefix_sum(std::size_t pos) const;  // sum over [1, pos]

 private:
  std::vector<std::int64_t> tree_;
};

}  // namespace detail

/// Working-set bookkeeping. rank_of(v) at time t is the number of distinct
/// items requested since v's previous request, counting v itself; items never
/// requested before rank as n (the working set cannot be larger).
///
/// O(log m) per operation; the brute-force distinct count lives in test code
/// as the oracle.
class RankTracker {
 public:
  explicit RankTracker(std::uint64_t n_items, std::uint64_t expected_requests = 0);

  /// Rank the next request to `item` would have, before recording it.
  std::uint64_t rank_of(ItemId item) const;

  /// Consumes one request.
  void record(ItemId item);

  std::uint64_t processed() const { return now_; }
  std::uint64_t item_universe() const { return n_; }

 private:
  void grow(std::size_t need);

  std::uint64_t n_;
  std::uint64_t now_ = 0;
  detail::FenwickTree marks_;
  std::unordered_map<ItemId, std::uint64_t> last_;
};

/// Running cost totals; total == access + reconfig at all times.
struct CostLedger {
  std::uint64_t access_cost = 0;
  std::uint64_t reconfig_cost = 0;
  std::uint64_t total_cost = 0;
  /// Reconfiguration edges excluding reversed failed attempts, reported
  /// alongside the charged total.
  std::uint64_t reconfig_cost_uncharged = 0;
  double lower_bound = 0.0;

  bool keep_log = true;
  std::vector<AccessRecord> log;

  void add(const AccessRecord& rec);
};

/// Streaming statistics of level_found - mru_level(rank): how far items sit
/// below where a rank-perfect tree would keep them.
class MruAudit {
 public:
  explicit MruAudit(std::uint32_t capacity) : capacity_(capacity) {}

  void add(std::uint32_t level_found, std::uint64_t rank);

  std::uint64_t samples() const { return count_; }
  double mean() const;
  std::int64_t max() const { return count_ == 0 ? 0 : max_; }
  const std::map<std::int64_t, std::uint64_t>& histogram() const { return hist_; }

 private:
  std::uint32_t capacity_;
  std::uint64_t count_ = 0;
  std::int64_t sum_ = 0;
  std::int64_t max_ = 0;
  std::map<std::int64_t, std::uint64_t> hist_;
};

/// Sum over the trace of mru_level(rank_t, capacity) / (1 + e). First-time
/// requests contribute mru_level(n_items, capacity).
double working_set_lower_bound(std::span<const ItemId> requests, std::uint64_t n_items,
                               std::uint32_t capacity);

struct CompetitiveReport {
  double total_ratio = 0.0;
  double access_ratio = 0.0;
};

/// Ratios of the ledger's costs to a lower bound. Throws std::invalid_argument
/// when the bound is not positive (e.g. an empty trace).
CompetitiveReport competitive_report(const CostLedger& ledger, double lower_bound);

}  // namespace seedtree
