#include "seedtree/metrics.hpp"

#include <bit>
#include <stdexcept>

namespace seedtree {

std::uint32_t mru_level(std::uint64_t rank, std::uint32_t capacity) {
  if (rank == 0) throw std::invalid_argument("ranks are 1-based");
  if (capacity == 0) throw std::invalid_argument("capacity must be >= 1");
  const std::uint64_t slot_group = (rank - 1) / capacity + 1;
  return static_cast<std::uint32_t>(std::bit_width(slot_group)) - 1;
}

namespace detail {

void FenwickTree::add(std::size_t pos, std::int64_t delta) {
  for (; pos < tree_.size(); pos += pos & (0 - pos)) tree_[pos] += delta;
}

std::uint64_t FenwickTree::prefix_sum(std::size_t pos) const {
  std::int64_t sum = 0;
  for (; pos > 0; pos -= pos & (0 - pos)) sum += tree_[pos];
  return static_cast<std::uint64_t>(sum);
}

}  // namespace detail

RankTracker::RankTracker(std::uint64_t n_items, std::uint64_t expected_requests)
    : n_(n_items), marks_(expected_requests > 0 ? expected_requests : 1024) {
  if (n_items == 0) throw std::invalid_argument("item universe must be non-empty");
  last_.reserve(static_cast<std::size_t>(n_items));
}

std::uint64_t RankTracker::rank_of(ItemId item) const {
  const auto it = last_.find(item);
  if (it == last_.end()) return n_;
  // Every tracked item holds one mark at its latest request time, so marks in
  // (last, now] count exactly the distinct items requested since, minus the
  // item itself.
  return marks_.prefix_sum(static_cast<std::size_t>(now_)) -
         marks_.prefix_sum(static_cast<std::size_t>(it->second)) + 1;
}

void RankTracker::record(ItemId item) {
  ++now_;
  if (now_ > marks_.size()) grow(static_cast<std::size_t>(now_));
  auto [it, fresh] = last_.try_emplace(item, 0);
  if (!fresh) marks_.add(static_cast<std::size_t>(it->second), -1);
  marks_.add(static_cast<std::size_t>(now_), +1);
  it->second = now_;
}

void RankTracker::grow(std::size_t need) {
  detail::FenwickTree bigger(std::max(need, marks_.size() * 2));
  for (const auto& [item, pos] : last_) bigger.add(static_cast<std::size_t>(pos), +1);
  marks_ = std::move(bigger);
}

void CostLedger::add(const AccessRecord& rec) {
  access_cost += rec.access_cost;
  reconfig_cost += rec.reconfig_cost;
  total_cost += rec.access_cost + rec.reconfig_cost;
  if (rec.level_found > 0) reconfig_cost_uncharged += 2ull * rec.level_found;
  if (keep_log) log.push_back(rec);
}

void MruAudit::add(std::uint32_t level_found, std::uint64_t rank) {
  const std::int64_t slack =
      static_cast<std::int64_t>(level_found) - static_cast<std::int64_t>(mru_level(rank, capacity_));
  ++count_;
  sum_ += slack;
  max_ = count_ == 1 ? slack : std::max(max_, slack);
  ++hist_[slack];
}

double MruAudit::mean() const {
  return count_ == 0 ? 0.0 : static_cast<double>(sum_) / static_cast<double>(count_);
}

double working_set_lower_bound(std::span<const ItemId> requests, std::uint64_t n_items,
                               std::uint32_t capacity) {
  RankTracker tracker(n_items, requests.size());
  std::uint64_t sum = 0;
  for (ItemId v : requests) {
    sum += mru_level(tracker.rank_of(v), capacity);
    tracker.record(v);
  }
  return static_cast<double>(sum) / kLowerBoundDivisor;
}

CompetitiveReport competitive_report(const CostLedger& ledger, double lower_bound) {
  if (!(lower_bound > 0.0)) {
    throw std::invalid_argument("lower bound must be positive (empty trace?)");
  }
  return {static_cast<double>(ledger.total_cost) / lower_bound,
          static_cast<double>(ledger.access_cost) / lower_bound};
}

}  // namespace seedtree
