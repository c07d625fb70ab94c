#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "seedtree/addressing.hpp"

namespace seedtree::test {

// 0.999 quantiles of the chi-square distribution; a statistic below the
// quantile accepts uniformity at p > 0.001.
inline constexpr double kChi2Df3 = 16.266236;
inline constexpr double kChi2Df7 = 24.321886;
inline constexpr double kChi2Df15 = 37.697298;

inline double chi_square_uniform(const std::vector<std::uint64_t>& observed) {
  std::uint64_t total = 0;
  for (std::uint64_t o : observed) total += o;
  const double expected = static_cast<double>(total) / static_cast<double>(observed.size());
  double stat = 0.0;
  for (std::uint64_t o : observed) {
    const double d = static_cast<double>(o) - expected;
    stat += d * d / expected;
  }
  return stat;
}

// Independent working-set oracle: walk backwards from the request at position
// t and count distinct items until the previous occurrence of trace[t].
inline std::uint64_t brute_force_rank(const std::vector<ItemId>& trace, std::size_t t,
                                      std::uint64_t n_items) {
  const ItemId v = trace[t];
  std::set<ItemId> distinct{v};
  for (std::size_t i = t; i-- > 0;) {
    if (trace[i] == v) return distinct.size();
    distinct.insert(trace[i]);
  }
  return n_items;
}

// Smallest item id whose address starts with the given bits under `seed`.
inline ItemId find_item_with_prefix(const std::vector<int>& bits, std::uint64_t seed,
                                    DigestAlgo algo = DigestAlgo::kSha512) {
  const AddressProvider addr(seed, algo);
  for (ItemId v = 0;; ++v) {
    bool match = true;
    for (std::size_t i = 0; i < bits.size() && match; ++i) {
      match = addr.bit(v, i) == bits[i];
    }
    if (match) return v;
  }
}

}  // namespace seedtree::test
