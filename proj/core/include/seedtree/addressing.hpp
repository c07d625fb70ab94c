#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

namespace seedtree {

using ItemId = std::uint64_t;
using NodeIndex = std::uint64_t;

inline constexpr NodeIndex kRootNode = 1;

// Sentinel for empty node slots; kNoItem is not a valid item id.
inline constexpr ItemId kNoItem = ~std::uint64_t{0};

/// Digest family behind the address bit stream. Pinned per run so placements
/// and routing decisions reproduce bit-exactly across builds and machines.
enum class DigestAlgo { kSha512, kSha256 };

std::string to_string(DigestAlgo algo);
DigestAlgo parse_digest_algo(std::string_view name);

/// Depth of a heap-numbered node: the root (index 1) is at depth 0 and node j
/// sits at floor(log2 j).
constexpr std::uint32_t depth_of(NodeIndex node) {
  return static_cast<std::uint32_t>(std::bit_width(node)) - 1;
}

/// Child selected by one address bit: left child 2j on 0, right child 2j+1 on 1.
constexpr NodeIndex route_child(NodeIndex node, int bit) {
  return 2 * node + static_cast<NodeIndex>(bit & 1);
}

/// Bit `index` of an item's address stream.
///
/// The stream is unbounded: block b of 512 (or 256) bits is the digest of the
/// 24-byte message LE64(seed) || LE64(item) || LE64(b), and bits are consumed
/// MSB-first within the digest. Deterministic in (item, seed, index, algo).
int hash_bit(ItemId item, std::uint64_t seed, std::uint64_t index,
             DigestAlgo algo = DigestAlgo::kSha512);

/// Node at `level` on the item's address path: the binary number formed by a
/// leading 1 followed by address bits 0..level-1.
NodeIndex path_node(ItemId item, std::uint64_t seed, std::uint32_t level,
                    DigestAlgo algo = DigestAlgo::kSha512);

/// Seed- and algorithm-bound view of the address space. All methods are pure
/// and safe to call from any number of threads.
class AddressProvider {
 public:
  explicit AddressProvider(std::uint64_t seed, DigestAlgo algo = DigestAlgo::kSha512)
      : seed_(seed), algo_(algo) {}

  std::uint64_t seed() const { return seed_; }
  DigestAlgo algo() const { return algo_; }

  int bit(ItemId item, std::uint64_t index) const {
    return hash_bit(item, seed_, index, algo_);
  }

  NodeIndex path_node(ItemId item, std::uint32_t level) const {
    return ::seedtree::path_node(item, seed_, level, algo_);
  }

  /// First 64 address bits packed MSB-first: bit i of the stream is bit 63-i
  /// of the returned word. One digest call; callers cache this per item.
  std::uint64_t prefix64(ItemId item) const;

  static int prefix_bit(std::uint64_t prefix, std::uint32_t index) {
    return static_cast<int>((prefix >> (63 - index)) & 1);
  }

  /// path_node computed from a cached prefix word; valid for level <= 63
  /// (deeper node indices would not fit 64 bits).
  static NodeIndex prefix_path_node(std::uint64_t prefix, std::uint32_t level) {
    if (level == 0) return kRootNode;
    return (NodeIndex{1} << level) | (prefix >> (64 - level));
  }

 private:
  std::uint64_t seed_;
  DigestAlgo algo_;
};

}  // namespace seedtree
