#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seedtree/addressing.hpp"
#include "seedtree/rng.hpp"

namespace seedtree {

/// Thrown when a structural invariant no longer holds (an item off its
/// address path, an unbalanced level count, a failed reversal). Indicates a
/// bug, not bad input.
class CorruptedStateError : public std::runtime_error {
 public:
  explicit CorruptedStateError(const std::string& what) : std::runtime_error(what) {}
};

/// Per-request cost breakdown. All costs are edge traversals.
struct AccessRecord {
  ItemId item = kNoItem;
  std::uint32_t level_found = 0;
  std::uint64_t access_cost = 0;   // == level_found
  std::uint64_t move_up_cost = 0;  // == level_found
  std::uint32_t push_down_attempts = 0;
  std::uint64_t reconfig_cost = 0;  // move-up + 2*level per failed attempt + level
  std::uint64_t total_cost = 0;     // access + reconfig
  NodeIndex push_down_terminal = 0;  // node that absorbed the committed push-down, 0 if none
};

struct TreeStats {
  std::uint64_t accesses = 0;
  std::uint64_t push_down_attempts = 0;
  std::uint64_t failed_attempts = 0;
  std::uint64_t reversal_checks = 0;  // digest-verified reversals; equals failed_attempts
  std::uint64_t init_quota_deviations = 0;  // items placed below the last quota level
};

/// Self-adjusting complete binary tree of capacity-c nodes. Items route along
/// their hash-address paths; an access promotes the item to the root and a
/// randomized push-down restores the per-level item counts.
///
/// Single-owner: all mutation must be serialized by the caller. Independent
/// instances may run on any number of threads.
class SeedTree {
 public:
  struct Params {
    std::uint32_t capacity = 2;
    double occupancy = 0.5;  // initialization fill fraction, in (0,1)
    std::uint64_t seed = 0;
    DigestAlgo algo = DigestAlgo::kSha512;
    bool validate_each_access = false;  // full invariant scan after every access
  };

  /// Builds the initial tree. Every item lands on its address path; level i
  /// aims for floor(capacity * occupancy * 2^i) items, overflow pushed deeper.
  /// Rejects capacity < 1, occupancy outside (0,1), empty or duplicate items.
  SeedTree(std::vector<ItemId> items, const Params& params);

  /// Builds a tree with an explicit placement (testing and tooling). Each
  /// placement must respect the item's address path and node capacity.
  static SeedTree from_placement(const std::vector<std::pair<ItemId, NodeIndex>>& placement,
                                 const Params& params);

  /// Local-routing search from the root. Read-only. Cost charged = returned level.
  /// Throws std::invalid_argument for unknown items, CorruptedStateError if the
  /// walk leaves the occupied tree.
  std::pair<NodeIndex, std::uint32_t> find(ItemId item) const;

  /// Serves one access request: find, move-to-the-root, randomized push-down
  /// with retry and reversal. Level counts are restored before returning.
  AccessRecord access(ItemId item);

  /// Order-independent digest of the node -> item-multiset map, recomputed by
  /// full scan. Matches the incrementally maintained digest.
  std::uint64_t state_digest() const;

  /// Full invariant scan: capacity, level conservation, address-path
  /// residency, digest consistency. Throws CorruptedStateError on violation.
  void check_invariants() const;

  // Parameters and bookkeeping.
  std::uint32_t capacity() const { return capacity_; }
  double occupancy() const { return occupancy_; }
  std::uint64_t seed() const { return seed_; }
  const AddressProvider& addresses() const { return addr_; }
  const TreeStats& stats() const { return stats_; }
  std::size_t item_count() const { return items_.size(); }

  /// Deepest level holding items at initialization; accesses never deepen it.
  std::uint32_t max_depth() const { return max_depth_; }
  NodeIndex max_node_index() const { return nodes_.size() - 1; }

  std::uint64_t level_count(std::uint32_t level) const { return level_counts_[level]; }
  const std::vector<std::uint64_t>& level_counts() const { return level_counts_; }

  NodeIndex location_of(ItemId item) const { return state_of(item).node; }
  std::uint32_t level_of(ItemId item) const { return depth_of(state_of(item).node); }
  bool contains(ItemId item) const { return items_.find(item) != items_.end(); }

  /// Items in a node in slot order, holes skipped.
  std::vector<ItemId> node_items(NodeIndex node) const;

  /// Raw slot array of a node (kNoItem marks a hole). Slot k feeds membership
  /// matching k in the matching-model export.
  std::span<const ItemId> node_slots(NodeIndex node) const;

  std::uint32_t node_count(NodeIndex node) const;

  /// Fraction of full nodes over all nodes in levels 0..max_depth().
  double full_node_fraction() const;

  /// True when initialization met every per-level quota exactly.
  bool quotas_met_exactly() const { return stats_.init_quota_deviations == 0; }

  /// True when capacity * occupancy < 1: the root starts empty. Allowed, but
  /// callers may want to warn.
  bool degenerate_root() const { return degenerate_root_; }

  /// Replaces the push-down pick stream. Addresses are unaffected.
  void reseed_pick_rng(std::uint64_t seed) { rng_ = Rng(seed); }

 private:
  struct Node {
    std::vector<ItemId> slots;   // size == capacity, kNoItem marks a hole
    ItemId buffer = kNoItem;     // transient c+1-th item during reconfiguration
    std::uint32_t slot_count = 0;

    std::uint32_t count() const { return slot_count + (buffer != kNoItem ? 1 : 0); }
  };

  struct ItemState {
    NodeIndex node = 0;
    std::uint64_t prefix = 0;  // first 64 address bits, cached at init
  };

  struct PushMove {
    ItemId item;
    NodeIndex from;
    NodeIndex to;
  };

  SeedTree(const Params& params, std::size_t item_count_hint);

  const ItemState& state_of(ItemId item) const;
  int address_bit(const ItemState& st, ItemId item, std::uint32_t level) const;

  void allocate_nodes(std::uint32_t max_depth);

  // Primitive moves; every mutation funnels through these so the incremental
  // digest and level counts stay consistent.
  void insert_item(NodeIndex node, ItemId item);
  void remove_item(NodeIndex node, ItemId item);
  void settle_buffer(Node& node);
  ItemId pick_uniform(NodeIndex node);

  void move_item(NodeIndex from, NodeIndex to, ItemId item);

  std::uint32_t capacity_;
  double occupancy_;
  std::uint64_t seed_;
  AddressProvider addr_;
  bool validate_each_access_;
  bool degenerate_root_ = false;

  std::vector<Node> nodes_;  // heap-numbered, index 0 unused
  std::unordered_map<ItemId, ItemState> items_;
  std::vector<std::uint64_t> level_counts_;
  std::vector<std::uint64_t> level_counts_init_;
  std::uint32_t max_depth_ = 0;
  std::uint64_t digest_ = 0;
  Rng rng_;
  TreeStats stats_;
};

}  // namespace seedtree
