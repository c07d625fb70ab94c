#include "seedtree/baselines.hpp"

#include <algorithm>
#include <numeric>

namespace seedtree {

FrequencyTable build_frequency_table(std::span<const ItemId> requests) {
  FrequencyTable table;
  table.counts.reserve(requests.size() / 4 + 1);
  for (ItemId v : requests) ++table.counts[v];
  table.total = requests.size();
  return table;
}

std::uint64_t oblivious_access_cost(const SeedTree& tree, std::span<const ItemId> requests) {
  std::uint64_t cost = 0;
  for (ItemId v : requests) cost += tree.find(v).second;
  return cost;
}

CostLedger oblivious_cost(const Trace& trace, std::uint32_t capacity, double occupancy,
                          std::uint64_t seed, DigestAlgo algo) {
  std::vector<ItemId> items(trace.n_items);
  std::iota(items.begin(), items.end(), ItemId{0});
  const SeedTree tree(std::move(items), {capacity, occupancy, seed, algo, false});

  CostLedger ledger;
  ledger.keep_log = false;
  for (ItemId v : trace.requests) {
    AccessRecord rec;
    rec.item = v;
    rec.level_found = tree.find(v).second;
    rec.access_cost = rec.level_found;
    ledger.add(rec);
  }
  return ledger;
}

std::uint64_t static_optimal_cost(std::span<const ItemId> requests, std::uint32_t capacity) {
  const FrequencyTable table = build_frequency_table(requests);
  std::vector<std::pair<ItemId, std::uint64_t>> by_frequency(table.counts.begin(),
                                                             table.counts.end());
  std::sort(by_frequency.begin(), by_frequency.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  std::uint64_t cost = 0;
  std::uint64_t position = 0;
  for (const auto& [item, count] : by_frequency) {
    ++position;
    cost += count * mru_level(position, capacity);
  }
  return cost;
}

}  // namespace seedtree
