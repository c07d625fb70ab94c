#include "seedtree/tree.hpp"

#include <algorithm>
#include <cmath>

namespace seedtree {

namespace {

// Deeper node indices would not fit 64 bits; with any sane digest the walk
// ends near log2(n/c) anyway.
constexpr std::uint32_t kMaxPlacementDepth = 63;

constexpr std::uint64_t kPickStreamTag = 0x7069636b;  // distinct from address stream

std::uint64_t pair_digest(NodeIndex node, ItemId item) {
  return mix64(mix64(node) ^ (item * 0xD6E8FEB86659FD93ull));
}

}  // namespace

SeedTree::SeedTree(const Params& params, std::size_t item_count_hint)
    : capacity_(params.capacity),
      occupancy_(params.occupancy),
      seed_(params.seed),
      addr_(params.seed, params.algo),
      validate_each_access_(params.validate_each_access),
      rng_(derive_seed(params.seed, kPickStreamTag)) {
  if (capacity_ < 1) throw std::invalid_argument("capacity must be >= 1");
  if (!(occupancy_ > 0.0) || !(occupancy_ < 1.0)) {
    throw std::invalid_argument("occupancy must lie strictly inside (0, 1)");
  }
  degenerate_root_ = static_cast<double>(capacity_) * occupancy_ < 1.0;
  items_.reserve(item_count_hint);
}

SeedTree::SeedTree(std::vector<ItemId> items, const Params& params)
    : SeedTree(params, items.size()) {
  if (items.empty()) throw std::invalid_argument("item set is empty");
  for (ItemId v : items) {
    if (v == kNoItem) throw std::invalid_argument("item id collides with the empty-slot sentinel");
    if (!items_.emplace(v, ItemState{}).second) {
      throw std::invalid_argument("duplicate item id " + std::to_string(v));
    }
  }

  // Per-level targets floor(c * f * 2^i); the last planned level takes the
  // remainder. Levels with quota 0 (c*f < 1) simply start empty.
  const std::uint64_t n = items.size();
  std::vector<std::uint64_t> quota;
  std::uint64_t assigned = 0;
  for (std::uint32_t level = 0; assigned < n; ++level) {
    if (level >= 64) throw std::invalid_argument("occupancy too small for this item count");
    const double raw = static_cast<double>(capacity_) * occupancy_ * std::ldexp(1.0, level);
    std::uint64_t q = raw >= static_cast<double>(n) ? n : static_cast<std::uint64_t>(raw);
    q = std::min(q, n - assigned);
    quota.push_back(q);
    assigned += q;
  }

  std::vector<ItemId> order = std::move(items);
  rng_.shuffle(order);

  // Greedy placement: walk each item down its address path and stop at the
  // first node that is non-full and sits on a level with open quota. If every
  // such level is blocked, the item lands at the shallowest non-full path
  // node past the plan and is counted as a deviation.
  std::vector<std::uint64_t> placed(quota.size(), 0);
  std::unordered_map<NodeIndex, std::vector<ItemId>> staging;
  staging.reserve(n);
  std::uint32_t deepest = 0;

  for (ItemId v : order) {
    const std::uint64_t prefix = addr_.prefix64(v);
    items_[v].prefix = prefix;
    NodeIndex node = kRootNode;
    bool done = false;
    for (std::uint32_t level = 0; level < kMaxPlacementDepth; ++level) {
      const bool quota_open = level < quota.size() && placed[level] < quota[level];
      const bool beyond_plan = level >= quota.size();
      if (quota_open || beyond_plan) {
        auto it = staging.find(node);
        if (it == staging.end() || it->second.size() < capacity_) {
          staging[node].push_back(v);
          if (beyond_plan) {
            ++stats_.init_quota_deviations;
          } else {
            ++placed[level];
          }
          deepest = std::max(deepest, level);
          done = true;
          break;
        }
      }
      const int bit = level < 64 ? AddressProvider::prefix_bit(prefix, level)
                                 : addr_.bit(v, level);
      node = route_child(node, bit);
    }
    if (!done) throw CorruptedStateError("placement walk exceeded the depth limit");
  }

  max_depth_ = deepest;
  allocate_nodes(max_depth_);
  for (const auto& [node, members] : staging) {
    for (ItemId v : members) insert_item(node, v);
  }
  level_counts_init_ = level_counts_;
  check_invariants();
}

SeedTree SeedTree::from_placement(const std::vector<std::pair<ItemId, NodeIndex>>& placement,
                                  const Params& params) {
  if (placement.empty()) throw std::invalid_argument("placement is empty");
  SeedTree tree(params, placement.size());

  std::uint32_t deepest = 0;
  for (const auto& [item, node] : placement) {
    if (node < kRootNode) throw std::invalid_argument("node indices start at 1");
    if (depth_of(node) > 63) throw std::invalid_argument("placement deeper than supported");
    deepest = std::max(deepest, depth_of(node));
  }
  tree.max_depth_ = deepest;
  tree.allocate_nodes(deepest);

  for (const auto& [item, node] : placement) {
    if (item == kNoItem) throw std::invalid_argument("item id collides with the empty-slot sentinel");
    const std::uint64_t prefix = tree.addr_.prefix64(item);
    if (AddressProvider::prefix_path_node(prefix, depth_of(node)) != node) {
      throw std::invalid_argument("item " + std::to_string(item) + " is not on its address path");
    }
    if (!tree.items_.emplace(item, ItemState{0, prefix}).second) {
      throw std::invalid_argument("duplicate item id " + std::to_string(item));
    }
    if (tree.nodes_[node].slot_count >= tree.capacity_) {
      throw std::invalid_argument("node " + std::to_string(node) + " over capacity");
    }
    tree.insert_item(node, item);
  }
  tree.level_counts_init_ = tree.level_counts_;
  tree.check_invariants();
  return tree;
}

void SeedTree::allocate_nodes(std::uint32_t max_depth) {
  nodes_.resize(std::size_t{1} << (max_depth + 1));
  for (Node& node : nodes_) node.slots.assign(capacity_, kNoItem);
  level_counts_.assign(max_depth + 1, 0);
}

const SeedTree::ItemState& SeedTree::state_of(ItemId item) const {
  auto it = items_.find(item);
  if (it == items_.end()) {
    throw std::invalid_argument("unknown item id " + std::to_string(item));
  }
  return it->second;
}

int SeedTree::address_bit(const ItemState& st, ItemId item, std::uint32_t level) const {
  return level < 64 ? AddressProvider::prefix_bit(st.prefix, level) : addr_.bit(item, level);
}

std::pair<NodeIndex, std::uint32_t> SeedTree::find(ItemId item) const {
  const ItemState& st = state_of(item);
  NodeIndex node = kRootNode;
  for (std::uint32_t level = 0;; ++level) {
    const Node& n = nodes_[node];
    bool here = n.buffer == item;
    if (!here) {
      for (ItemId held : n.slots) {
        if (held == item) {
          here = true;
          break;
        }
      }
    }
    if (here) {
      if (st.node != node) throw CorruptedStateError("search landed off the recorded location");
      return {node, level};
    }
    if (level >= max_depth_) throw CorruptedStateError("search walked out of the occupied tree");
    node = route_child(node, address_bit(st, item, level));
  }
}

AccessRecord SeedTree::access(ItemId item) {
  const auto [node, level] = find(item);
  AccessRecord rec;
  rec.item = item;
  rec.level_found = level;
  rec.access_cost = level;
  ++stats_.accesses;
  if (level == 0) {
    if (validate_each_access_) check_invariants();
    return rec;
  }

  // Move-to-the-root. Nodes along the way keep their items, so the net state
  // change is one removal and one insertion; the root may reach c+1.
  move_item(node, kRootNode, item);
  rec.move_up_cost = level;

  // Push-down: demote a uniformly random item one level at a time along its
  // own address path until depth `level`. A full terminal node fails the
  // attempt; the reversal must restore the state bit-for-bit.
  const std::uint64_t digest_before = digest_;
  std::vector<PushMove> moves;
  moves.reserve(level);
  std::uint32_t attempts = 0;
  for (;;) {
    ++attempts;
    ++stats_.push_down_attempts;
    moves.clear();
    NodeIndex cur = kRootNode;
    for (std::uint32_t d = 0; d < level; ++d) {
      const ItemId pick = pick_uniform(cur);
      const ItemState& pst = items_.find(pick)->second;
      const NodeIndex next = route_child(cur, address_bit(pst, pick, d));
      move_item(cur, next, pick);
      moves.push_back({pick, cur, next});
      cur = next;
    }
    if (nodes_[cur].count() <= capacity_) {
      rec.push_down_terminal = cur;
      break;
    }
    ++stats_.failed_attempts;
    for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
      move_item(it->to, it->from, it->item);
    }
    if (digest_ != digest_before) {
      throw CorruptedStateError("push-down reversal did not restore the state");
    }
    ++stats_.reversal_checks;
  }

  rec.push_down_attempts = attempts;
  rec.reconfig_cost =
      rec.move_up_cost + std::uint64_t{attempts - 1} * 2 * level + level;
  rec.total_cost = rec.access_cost + rec.reconfig_cost;
  if (validate_each_access_) check_invariants();
  return rec;
}

ItemId SeedTree::pick_uniform(NodeIndex node) {
  const Node& n = nodes_[node];
  std::uint64_t k = rng_.bounded(n.count());
  for (ItemId held : n.slots) {
    if (held == kNoItem) continue;
    if (k == 0) return held;
    --k;
  }
  return n.buffer;
}

void SeedTree::insert_item(NodeIndex node, ItemId item) {
  Node& n = nodes_[node];
  if (n.slot_count < capacity_) {
    for (ItemId& slot : n.slots) {
      if (slot == kNoItem) {
        slot = item;
        ++n.slot_count;
        break;
      }
    }
  } else {
    if (n.buffer != kNoItem) throw CorruptedStateError("two transient items in one node");
    n.buffer = item;
  }
  digest_ ^= pair_digest(node, item);
  ++level_counts_[depth_of(node)];
  items_.find(item)->second.node = node;
}

void SeedTree::remove_item(NodeIndex node, ItemId item) {
  Node& n = nodes_[node];
  if (n.buffer == item) {
    n.buffer = kNoItem;
  } else {
    bool found = false;
    for (ItemId& slot : n.slots) {
      if (slot == item) {
        slot = kNoItem;
        --n.slot_count;
        found = true;
        break;
      }
    }
    if (!found) throw CorruptedStateError("removing an item the node does not hold");
    settle_buffer(n);
  }
  digest_ ^= pair_digest(node, item);
  --level_counts_[depth_of(node)];
}

void SeedTree::settle_buffer(Node& node) {
  if (node.buffer == kNoItem || node.slot_count >= capacity_) return;
  for (ItemId& slot : node.slots) {
    if (slot == kNoItem) {
      slot = node.buffer;
      ++node.slot_count;
      node.buffer = kNoItem;
      return;
    }
  }
}

void SeedTree::move_item(NodeIndex from, NodeIndex to, ItemId item) {
  remove_item(from, item);
  insert_item(to, item);
}

std::uint64_t SeedTree::state_digest() const {
  std::uint64_t acc = 0;
  for (NodeIndex j = 1; j < nodes_.size(); ++j) {
    const Node& n = nodes_[j];
    for (ItemId held : n.slots) {
      if (held != kNoItem) acc ^= pair_digest(j, held);
    }
    if (n.buffer != kNoItem) acc ^= pair_digest(j, n.buffer);
  }
  return acc;
}

std::vector<ItemId> SeedTree::node_items(NodeIndex node) const {
  if (node < kRootNode || node >= nodes_.size()) {
    throw std::invalid_argument("node index out of range");
  }
  const Node& n = nodes_[node];
  std::vector<ItemId> items;
  items.reserve(n.count());
  for (ItemId held : n.slots) {
    if (held != kNoItem) items.push_back(held);
  }
  if (n.buffer != kNoItem) items.push_back(n.buffer);
  return items;
}

std::span<const ItemId> SeedTree::node_slots(NodeIndex node) const {
  if (node < kRootNode || node >= nodes_.size()) {
    throw std::invalid_argument("node index out of range");
  }
  return nodes_[node].slots;
}

std::uint32_t SeedTree::node_count(NodeIndex node) const {
  if (node < kRootNode || node >= nodes_.size()) {
    throw std::invalid_argument("node index out of range");
  }
  return nodes_[node].count();
}

double SeedTree::full_node_fraction() const {
  std::uint64_t full = 0;
  for (NodeIndex j = 1; j < nodes_.size(); ++j) {
    if (nodes_[j].count() == capacity_) ++full;
  }
  return static_cast<double>(full) / static_cast<double>(nodes_.size() - 1);
}

void SeedTree::check_invariants() const {
  std::vector<std::uint64_t> counts(max_depth_ + 1, 0);
  std::uint64_t digest = 0;
  std::size_t seen = 0;
  for (NodeIndex j = 1; j < nodes_.size(); ++j) {
    const Node& n = nodes_[j];
    if (n.buffer != kNoItem) throw CorruptedStateError("transient item outside an access");
    const std::uint32_t depth = depth_of(j);
    std::uint32_t held = 0;
    for (ItemId item : n.slots) {
      if (item == kNoItem) continue;
      ++held;
      auto it = items_.find(item);
      if (it == items_.end() || it->second.node != j) {
        throw CorruptedStateError("location map out of sync");
      }
      const bool resident = depth <= 63
                                ? AddressProvider::prefix_path_node(it->second.prefix, depth) == j
                                : addr_.path_node(item, depth) == j;
      if (!resident) throw CorruptedStateError("item off its address path");
      digest ^= pair_digest(j, item);
    }
    if (held != n.slot_count) throw CorruptedStateError("slot count out of sync");
    if (held > capacity_) throw CorruptedStateError("node over capacity");
    counts[depth] += held;
    seen += held;
  }
  if (seen != items_.size()) throw CorruptedStateError("item count out of sync");
  if (counts != level_counts_) throw CorruptedStateError("level counts out of sync");
  if (level_counts_ != level_counts_init_) throw CorruptedStateError("level conservation violated");
  if (digest != digest_) throw CorruptedStateError("state digest out of sync");
}

}  // namespace seedtree
