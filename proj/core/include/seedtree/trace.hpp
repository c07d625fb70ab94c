#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "seedtree/addressing.hpp"

namespace seedtree {

enum class TraceFormat { kItems, kPairs };

TraceFormat parse_trace_format(std::string_view name);
std::string to_string(TraceFormat format);

struct TraceMeta {
  std::string source;  // "synthetic" or the input path
  double locality = 0.0;
  std::uint64_t seed = 0;
  /// Fraction of positions equal to their predecessor after the locality
  /// pass, measured before the distinct-item repair.
  double stage2_repeat_fraction = 0.0;
  /// Positions rewritten by the repair pass.
  std::uint64_t stage3_replacements = 0;
};

/// A request sequence over the dense item universe [0, n_items). n_items
/// always equals the number of distinct ids present.
struct Trace {
  std::vector<ItemId> requests;
  std::uint64_t n_items = 0;
  TraceMeta meta;
};

/// Markovian trace with tunable temporal locality:
///   1. m i.i.d. uniform draws over [0, n_items);
///   2. each position is overwritten by its predecessor with probability
///      `locality`;
///   3. a repair pass replaces duplicate positions (preferring positions that
///      do not sit inside a repeat run) with the missing ids, so exactly
///      n_items distinct items appear.
/// Deterministic in (n_items, m, locality, seed). locality must lie in
/// [0, 0.9] and m must be at least n_items.
Trace generate_trace(std::uint64_t n_items, std::uint64_t m, double locality,
                     std::uint64_t seed);

/// Parses a request stream.
///
/// kItems: one decimal id per line. Ids are densely re-mapped to [0, n) by
/// first appearance, unless the file carries the canonical
/// "#seedtree-trace v1 n=<n>" header, in which case ids are loaded verbatim
/// (round-trip identity with emit_trace). Other '#' lines are comments.
///
/// kPairs: "src,dst" per line, '#' comments ignored. Keeps the dst sequence
/// of the most frequent src (ties: smallest src id), densely re-mapped.
///
/// Malformed lines and empty results raise std::runtime_error with the line
/// number.
Trace parse_trace(std::istream& in, TraceFormat format, std::string_view source_name);
Trace ingest_trace(const std::filesystem::path& path, TraceFormat format);

/// Canonical trace file: "#seedtree-trace v1 n=<n_items>" then one id per line.
void emit_trace(const Trace& trace, std::ostream& out);
void write_trace_file(const Trace& trace, const std::filesystem::path& path);

}  // namespace seedtree
