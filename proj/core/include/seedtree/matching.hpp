#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "seedtree/tree.hpp"

namespace seedtree {

/// A tree state as 2 + c matchings over switches: two static topological
/// matchings embed the binary tree (parent to left child, parent to right
/// child), and c dynamic membership matchings connect nodes to the items in
/// their slots. Matchings are partial; slot order within a node is arbitrary
/// but deterministic (slot index).
struct MatchingSet {
  std::uint32_t capacity = 0;
  NodeIndex max_node = 0;  // nodes 1..max_node participate
  std::vector<std::pair<NodeIndex, NodeIndex>> topo_left;
  std::vector<std::pair<NodeIndex, NodeIndex>> topo_right;
  std::vector<std::map<NodeIndex, ItemId>> membership;  // size == capacity
};

/// Snapshot of a tree outside any access. Throws std::invalid_argument when a
/// node is in transient overfill.
MatchingSet export_matchings(const SeedTree& tree);

/// Search purely over the matchings: from node 1, check the membership
/// matchings, otherwise hop along the topological edge chosen by the item's
/// next address bit. Agrees with SeedTree::find on the exported state. Throws
/// std::runtime_error when the walk leaves the structure.
NodeIndex matching_search(const MatchingSet& ms, ItemId item, const AddressProvider& addr);

/// Edge changes for one item between two exported states. A single item move
/// is at most one removal plus one addition.
struct MatchingDelta {
  struct Edge {
    std::uint32_t matching = 0;  // membership matching index
    NodeIndex node = 0;
    ItemId item = kNoItem;
  };
  ItemId item = kNoItem;
  std::vector<Edge> removals;
  std::vector<Edge> additions;
};

/// Per-item membership deltas between two states over the same item universe,
/// ordered by item id. Topological matchings never differ.
std::vector<MatchingDelta> diff(const MatchingSet& before, const MatchingSet& after);

/// Replays deltas onto a base state. Throws std::runtime_error when a removal
/// misses or an addition collides.
MatchingSet apply_deltas(MatchingSet base, std::span<const MatchingDelta> deltas);

/// Structural checks: topological edges exactly (j,2j)/(j,2j+1), membership
/// matchings sized c with every item matched at most once overall.
void validate_matching_set(const MatchingSet& ms);

/// Text dump, one section per matching:
///   [topo-left] / [topo-right]: "parent child" per line;
///   [membership-k]: "node item" per line.
void write_matching_dump(const MatchingSet& ms, std::ostream& out);
MatchingSet read_matching_dump(std::istream& in);

}  // namespace seedtree
