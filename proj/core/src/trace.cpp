#include "seedtree/trace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "seedtree/rng.hpp"

namespace seedtree {

namespace {

constexpr std::uint64_t kTraceStreamTag = 0x74726163;
constexpr std::string_view kCanonicalHeader = "#seedtree-trace";

[[noreturn]] void malformed(std::string_view source, std::uint64_t lineno, std::string_view line) {
  throw std::runtime_error(std::string(source) + ": malformed line " + std::to_string(lineno) +
                           ": '" + std::string(line) + "'");
}

std::optional<std::uint64_t> parse_u64(std::string_view text) {
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// "#seedtree-trace v1 n=<count>"
std::uint64_t parse_canonical_header(std::string_view source, std::uint64_t lineno,
                                     std::string_view line) {
  const std::string_view rest = line.substr(kCanonicalHeader.size());
  if (rest.substr(0, 4) == " v1 " && rest.substr(4, 2) == "n=") {
    if (auto n = parse_u64(rest.substr(6)); n && *n > 0) return *n;
  }
  malformed(source, lineno, line);
}

void remap_dense(const std::vector<std::uint64_t>& raw, Trace& out) {
  std::unordered_map<std::uint64_t, ItemId> ids;
  ids.reserve(raw.size());
  out.requests.reserve(raw.size());
  for (std::uint64_t v : raw) {
    const auto [it, fresh] = ids.emplace(v, ids.size());
    out.requests.push_back(it->second);
  }
  out.n_items = ids.size();
}

Trace parse_items(std::istream& in, std::string_view source) {
  std::vector<std::uint64_t> raw;
  std::optional<std::uint64_t> canonical_n;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind(kCanonicalHeader, 0) == 0) {
        canonical_n = parse_canonical_header(source, lineno, line);
      }
      continue;
    }
    const auto v = parse_u64(line);
    if (!v) malformed(source, lineno, line);
    raw.push_back(*v);
  }
  if (raw.empty()) throw std::runtime_error(std::string(source) + ": no requests found");

  Trace trace;
  trace.meta.source = std::string(source);
  if (canonical_n) {
    std::vector<bool> seen(*canonical_n, false);
    std::uint64_t distinct = 0;
    for (std::uint64_t v : raw) {
      if (v >= *canonical_n) {
        throw std::runtime_error(std::string(source) + ": id " + std::to_string(v) +
                                 " outside declared universe n=" + std::to_string(*canonical_n));
      }
      if (!seen[v]) {
        seen[v] = true;
        ++distinct;
      }
    }
    if (distinct != *canonical_n) {
      throw std::runtime_error(std::string(source) + ": declared n=" + std::to_string(*canonical_n) +
                               " but only " + std::to_string(distinct) + " distinct ids present");
    }
    trace.requests.assign(raw.begin(), raw.end());
    trace.n_items = *canonical_n;
  } else {
    remap_dense(raw, trace);
  }
  return trace;
}

Trace parse_pairs(std::istream& in, std::string_view source) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  std::unordered_map<std::uint64_t, std::uint64_t> src_counts;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) malformed(source, lineno, line);
    const auto src = parse_u64(std::string_view(line).substr(0, comma));
    const auto dst = parse_u64(std::string_view(line).substr(comma + 1));
    if (!src || !dst) malformed(source, lineno, line);
    pairs.emplace_back(*src, *dst);
    ++src_counts[*src];
  }
  if (pairs.empty()) throw std::runtime_error(std::string(source) + ": no pairs found");

  // Most frequent source wins; ties go to the smallest raw id.
  std::uint64_t best_src = 0;
  std::uint64_t best_count = 0;
  for (const auto& [src, count] : src_counts) {
    if (count > best_count || (count == best_count && src < best_src)) {
      best_src = src;
      best_count = count;
    }
  }

  std::vector<std::uint64_t> raw;
  raw.reserve(best_count);
  for (const auto& [src, dst] : pairs) {
    if (src == best_src) raw.push_back(dst);
  }

  Trace trace;
  trace.meta.source = std::string(source);
  remap_dense(raw, trace);
  return trace;
}

}  // namespace

TraceFormat parse_trace_format(std::string_view name) {
  if (name == "items") return TraceFormat::kItems;
  if (name == "pairs") return TraceFormat::kPairs;
  throw std::invalid_argument("unknown trace format: " + std::string(name));
}

std::string to_string(TraceFormat format) {
  return format == TraceFormat::kItems ? "items" : "pairs";
}

Trace generate_trace(std::uint64_t n_items, std::uint64_t m, double locality,
                     std::uint64_t seed) {
  if (n_items < 1) throw std::invalid_argument("n_items must be >= 1");
  if (m < n_items) throw std::invalid_argument("trace length must be >= n_items");
  if (!(locality >= 0.0 && locality <= 0.9)) {
    throw std::invalid_argument("locality must lie in [0, 0.9]");
  }

  Rng rng(derive_seed(seed, kTraceStreamTag));
  std::vector<ItemId> req(m);
  for (ItemId& r : req) r = rng.bounded(n_items);

  std::uint64_t repeats = 0;
  for (std::uint64_t t = 1; t < m; ++t) {
    if (rng.unit() < locality) req[t] = req[t - 1];
    if (req[t] == req[t - 1]) ++repeats;
  }

  std::vector<std::uint64_t> count(n_items, 0);
  for (ItemId r : req) ++count[r];
  std::vector<ItemId> missing;
  for (ItemId v = 0; v < n_items; ++v) {
    if (count[v] == 0) missing.push_back(v);
  }

  std::uint64_t replaced = 0;
  if (!missing.empty()) {
    // Candidate positions outside repeat-run interiors, visited in uniformly
    // random order. Only positions whose value still has another copy are
    // eligible, so no id ever drops out of the trace.
    std::vector<std::uint64_t> candidates;
    for (std::uint64_t t = 0; t < m; ++t) {
      const bool interior =
          t > 0 && t + 1 < m && req[t] == req[t - 1] && req[t] == req[t + 1];
      if (!interior) candidates.push_back(t);
    }
    rng.shuffle(candidates);

    std::size_t at = 0;
    for (ItemId v : missing) {
      bool placed = false;
      while (at < candidates.size()) {
        const std::uint64_t t = candidates[at++];
        if (count[req[t]] < 2) continue;
        --count[req[t]];
        req[t] = v;
        ++count[v];
        ++replaced;
        placed = true;
        break;
      }
      if (!placed) {
        // Run interiors hold the only remaining duplicates.
        for (std::uint64_t t = 0; t < m && !placed; ++t) {
          if (count[req[t]] < 2) continue;
          --count[req[t]];
          req[t] = v;
          ++count[v];
          ++replaced;
          placed = true;
        }
      }
      if (!placed) {
        throw std::logic_error("trace repair exhausted duplicates");  // m >= n_items forbids this
      }
    }
  }

  Trace trace;
  trace.requests = std::move(req);
  trace.n_items = n_items;
  trace.meta.source = "synthetic";
  trace.meta.locality = locality;
  trace.meta.seed = seed;
  trace.meta.stage2_repeat_fraction =
      m > 1 ? static_cast<double>(repeats) / static_cast<double>(m - 1) : 0.0;
  trace.meta.stage3_replacements = replaced;
  return trace;
}

Trace parse_trace(std::istream& in, TraceFormat format, std::string_view source_name) {
  return format == TraceFormat::kItems ? parse_items(in, source_name)
                                       : parse_pairs(in, source_name);
}

Trace ingest_trace(const std::filesystem::path& path, TraceFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path.string());
  return parse_trace(in, format, path.string());
}

void emit_trace(const Trace& trace, std::ostream& out) {
  out << "#seedtree-trace v1 n=" << trace.n_items << "\n";
  for (ItemId v : trace.requests) out << v << "\n";
}

void write_trace_file(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path.string());
  emit_trace(trace, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace seedtree
