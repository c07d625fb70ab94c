#include "seedtree/matching.hpp"

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

namespace seedtree {

namespace {

std::map<ItemId, std::pair<std::uint32_t, NodeIndex>> item_edges(const MatchingSet& ms) {
  std::map<ItemId, std::pair<std::uint32_t, NodeIndex>> edges;
  for (std::uint32_t k = 0; k < ms.membership.size(); ++k) {
    for (const auto& [node, item] : ms.membership[k]) {
      if (!edges.emplace(item, std::make_pair(k, node)).second) {
        throw std::runtime_error("item " + std::to_string(item) + " matched twice");
      }
    }
  }
  return edges;
}

std::optional<std::uint64_t> parse_u64(std::string_view text) {
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

MatchingSet export_matchings(const SeedTree& tree) {
  MatchingSet ms;
  ms.capacity = tree.capacity();
  ms.max_node = tree.max_node_index();
  ms.membership.resize(ms.capacity);
  for (NodeIndex j = kRootNode; j <= ms.max_node; ++j) {
    if (2 * j <= ms.max_node) ms.topo_left.emplace_back(j, 2 * j);
    if (2 * j + 1 <= ms.max_node) ms.topo_right.emplace_back(j, 2 * j + 1);
    if (tree.node_count(j) > ms.capacity) {
      throw std::invalid_argument("tree is mid-reconfiguration; export needs a settled state");
    }
    const auto slots = tree.node_slots(j);
    for (std::uint32_t k = 0; k < slots.size(); ++k) {
      if (slots[k] != kNoItem) ms.membership[k].emplace(j, slots[k]);
    }
  }
  return ms;
}

NodeIndex matching_search(const MatchingSet& ms, ItemId item, const AddressProvider& addr) {
  NodeIndex node = kRootNode;
  for (std::uint32_t level = 0;; ++level) {
    for (const auto& matching : ms.membership) {
      const auto it = matching.find(node);
      if (it != matching.end() && it->second == item) return node;
    }
    const NodeIndex next = route_child(node, addr.bit(item, level));
    if (next > ms.max_node) {
      throw std::runtime_error("matching search walked out of the structure");
    }
    node = next;
  }
}

std::vector<MatchingDelta> diff(const MatchingSet& before, const MatchingSet& after) {
  const auto old_edges = item_edges(before);
  const auto new_edges = item_edges(after);

  std::vector<MatchingDelta> deltas;
  auto old_it = old_edges.begin();
  auto new_it = new_edges.begin();
  while (old_it != old_edges.end() || new_it != new_edges.end()) {
    MatchingDelta delta;
    if (new_it == new_edges.end() ||
        (old_it != old_edges.end() && old_it->first < new_it->first)) {
      delta.item = old_it->first;
      delta.removals.push_back({old_it->second.first, old_it->second.second, old_it->first});
      ++old_it;
    } else if (old_it == old_edges.end() || new_it->first < old_it->first) {
      delta.item = new_it->first;
      delta.additions.push_back({new_it->second.first, new_it->second.second, new_it->first});
      ++new_it;
    } else {
      if (old_it->second != new_it->second) {
        delta.item = old_it->first;
        delta.removals.push_back({old_it->second.first, old_it->second.second, old_it->first});
        delta.additions.push_back({new_it->second.first, new_it->second.second, new_it->first});
      }
      ++old_it;
      ++new_it;
    }
    if (delta.item != kNoItem) deltas.push_back(std::move(delta));
  }
  return deltas;
}

MatchingSet apply_deltas(MatchingSet base, std::span<const MatchingDelta> deltas) {
  // All removals land before any addition: one batch may vacate an edge slot
  // that another item claims.
  for (const MatchingDelta& delta : deltas) {
    for (const auto& edge : delta.removals) {
      auto& matching = base.membership.at(edge.matching);
      const auto it = matching.find(edge.node);
      if (it == matching.end() || it->second != edge.item) {
        throw std::runtime_error("delta removal does not match the base state");
      }
      matching.erase(it);
    }
  }
  for (const MatchingDelta& delta : deltas) {
    for (const auto& edge : delta.additions) {
      auto& matching = base.membership.at(edge.matching);
      if (!matching.emplace(edge.node, edge.item).second) {
        throw std::runtime_error("delta addition collides with an existing edge");
      }
    }
  }
  return base;
}

void validate_matching_set(const MatchingSet& ms) {
  if (ms.membership.size() != ms.capacity) {
    throw std::runtime_error("membership matching count differs from capacity");
  }
  std::size_t left = 0;
  std::size_t right = 0;
  for (NodeIndex j = kRootNode; j <= ms.max_node; ++j) {
    if (2 * j <= ms.max_node) {
      if (left >= ms.topo_left.size() || ms.topo_left[left] != std::make_pair(j, 2 * j)) {
        throw std::runtime_error("topological left matching malformed");
      }
      ++left;
    }
    if (2 * j + 1 <= ms.max_node) {
      if (right >= ms.topo_right.size() ||
          ms.topo_right[right] != std::make_pair(j, 2 * j + 1)) {
        throw std::runtime_error("topological right matching malformed");
      }
      ++right;
    }
  }
  if (left != ms.topo_left.size() || right != ms.topo_right.size()) {
    throw std::runtime_error("stray topological edges");
  }

  std::set<ItemId> matched;
  for (const auto& matching : ms.membership) {
    for (const auto& [node, item] : matching) {
      if (node < kRootNode || node > ms.max_node) {
        throw std::runtime_error("membership edge outside the node range");
      }
      if (!matched.insert(item).second) {
        throw std::runtime_error("item " + std::to_string(item) + " matched twice");
      }
    }
  }
}

void write_matching_dump(const MatchingSet& ms, std::ostream& out) {
  out << "# seedtree-matchings v1 c=" << ms.capacity << " nodes=" << ms.max_node << "\n";
  out << "[topo-left]\n";
  for (const auto& [parent, child] : ms.topo_left) out << parent << " " << child << "\n";
  out << "[topo-right]\n";
  for (const auto& [parent, child] : ms.topo_right) out << parent << " " << child << "\n";
  for (std::uint32_t k = 0; k < ms.membership.size(); ++k) {
    out << "[membership-" << k << "]\n";
    for (const auto& [node, item] : ms.membership[k]) out << node << " " << item << "\n";
  }
}

MatchingSet read_matching_dump(std::istream& in) {
  MatchingSet ms;
  std::string line;
  std::uint64_t lineno = 0;

  auto fail = [&](const std::string& what) -> void {
    throw std::runtime_error("matching dump line " + std::to_string(lineno) + ": " + what);
  };

  if (!std::getline(in, line)) throw std::runtime_error("matching dump is empty");
  ++lineno;
  {
    constexpr std::string_view kHeader = "# seedtree-matchings v1 c=";
    if (line.rfind(kHeader, 0) != 0) fail("bad header");
    const auto rest = std::string_view(line).substr(kHeader.size());
    const auto split = rest.find(" nodes=");
    if (split == std::string_view::npos) fail("bad header");
    const auto c = parse_u64(rest.substr(0, split));
    const auto nodes = parse_u64(rest.substr(split + 7));
    if (!c || !nodes) fail("bad header");
    ms.capacity = static_cast<std::uint32_t>(*c);
    ms.max_node = *nodes;
    ms.membership.resize(ms.capacity);
  }

  enum class Section { kNone, kTopoLeft, kTopoRight, kMembership };
  Section section = Section::kNone;
  std::uint32_t membership_index = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '[') {
      if (line == "[topo-left]") {
        section = Section::kTopoLeft;
      } else if (line == "[topo-right]") {
        section = Section::kTopoRight;
      } else if (line.rfind("[membership-", 0) == 0 && line.back() == ']') {
        const auto k = parse_u64(std::string_view(line).substr(12, line.size() - 13));
        if (!k || *k >= ms.membership.size()) fail("bad membership section");
        section = Section::kMembership;
        membership_index = static_cast<std::uint32_t>(*k);
      } else {
        fail("unknown section");
      }
      continue;
    }
    const auto space = line.find(' ');
    if (space == std::string::npos) fail("expected two fields");
    const auto a = parse_u64(std::string_view(line).substr(0, space));
    const auto b = parse_u64(std::string_view(line).substr(space + 1));
    if (!a || !b) fail("expected two integers");
    switch (section) {
      case Section::kTopoLeft:
        ms.topo_left.emplace_back(*a, *b);
        break;
      case Section::kTopoRight:
        ms.topo_right.emplace_back(*a, *b);
        break;
      case Section::kMembership:
        if (!ms.membership[membership_index].emplace(*a, *b).second) {
          fail("duplicate membership edge");
        }
        break;
      case Section::kNone:
        fail("edge before any section");
    }
  }
  return ms;
}

}  // namespace seedtree
