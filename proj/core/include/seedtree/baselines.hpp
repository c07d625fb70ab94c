#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>

#include "seedtree/metrics.hpp"
#include "seedtree/trace.hpp"
#include "seedtree/tree.hpp"

namespace seedtree {

struct FrequencyTable {
  std::unordered_map<ItemId, std::uint64_t> counts;
  std::uint64_t total = 0;  // equals the trace length
};

FrequencyTable build_frequency_table(std::span<const ItemId> requests);

/// Demand-oblivious baseline: builds the initial tree and serves the whole
/// trace with local search only — zero reconfiguration. The placement is the
/// same one an adaptive run with the same seed starts from.
CostLedger oblivious_cost(const Trace& trace, std::uint32_t capacity, double occupancy,
                          std::uint64_t seed, DigestAlgo algo = DigestAlgo::kSha512);

/// Access-cost sum of serving `requests` on a static tree. find() is
/// read-only, so an adaptive run may share the tree afterwards.
std::uint64_t oblivious_access_cost(const SeedTree& tree, std::span<const ItemId> requests);

/// Best static layout by request frequency: the p-th most frequent item (ties
/// by ascending id) costs mru_level(p, capacity) per access. Ignores
/// address-path feasibility, so it lower-bounds every static placement.
std::uint64_t static_optimal_cost(std::span<const ItemId> requests, std::uint32_t capacity);

}  // namespace seedtree
