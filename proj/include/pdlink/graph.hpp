#pragma once

// Graph core: edge-list ingestion with dense id remapping, and cumulative
// snapshot graphs stored as sorted CSR adjacency.

#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pdlink/common.hpp"

namespace pdlink {

enum class TimeMode {
  kTimestamp,      // third column is a timestamp in seconds
  kSnapshotIndex,  // third column is a pre-assigned snapshot index
};

enum class Delimiter { kAuto, kWhitespace, kTab, kComma };

struct IngestOptions {
  bool directed = false;
  Delimiter delimiter = Delimiter::kAuto;
  TimeMode time_mode = TimeMode::kTimestamp;
  /// Drop nodes with out-degree zero (and their edges) before id assignment.
  bool drop_zero_out_degree = false;
};

struct TemporalEdge {
  NodeId src = 0;
  NodeId dst = 0;
  std::int64_t time = 0;

  friend bool operator==(const TemporalEdge&, const TemporalEdge&) = default;
};

/// Normalized ingestion product. Edges are sorted by time, free of self-loops
/// and duplicates; undirected edges are stored with src < dst.
struct TemporalEdgeList {
  std::vector<TemporalEdge> edges;
  bool directed = false;
  TimeMode time_mode = TimeMode::kTimestamp;
  std::vector<std::string> labels;  // labels[id] is the original node label

  std::size_t node_count() const { return labels.size(); }

  friend bool operator==(const TemporalEdgeList&, const TemporalEdgeList&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline Delimiter detect_delimiter(std::string_view line) {
  if (line.find(',') != std::string_view::npos) return Delimiter::kComma;
  if (line.find('\t') != std::string_view::npos) return Delimiter::kTab;
  return Delimiter::kWhitespace;
}

inline std::vector<std::string_view> split_fields(std::string_view line, Delimiter d) {
  std::vector<std::string_view> out;
  if (d == Delimiter::kWhitespace) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      out.push_back(line.substr(i, j - i));
      i = j;
    }
    return out;
  }
  char sep = d == Delimiter::kTab ? '\t' : ',';
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline bool parse_int64(std::string_view s, std::int64_t& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && !s.empty();
}

struct RawEdge {
  std::string src;
  std::string dst;
  std::int64_t time;
};

}  // namespace detail

/// Reads `<src> <dst> <time> [ignored...]` lines. Blank lines and lines whose
/// first non-blank character is '#' are skipped. Throws ParseError on a line
/// with fewer than three fields or a non-integer time.
inline TemporalEdgeList ingest_edges(std::istream& in, const IngestOptions& opt = {}) {
  std::vector<detail::RawEdge> raw;
  Delimiter delim = opt.delimiter;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (delim == Delimiter::kAuto) delim = detail::detect_delimiter(body);
    auto fields = detail::split_fields(body, delim);
    if (fields.size() < 3) {
      throw ParseError(line_no, "expected at least 3 fields, found " + std::to_string(fields.size()));
    }
    std::int64_t t = 0;
    if (!detail::parse_int64(fields[2], t)) {
      throw ParseError(line_no, "time field '" + std::string(fields[2]) + "' is not an integer");
    }
    if (fields[0].empty() || fields[1].empty()) throw ParseError(line_no, "empty node label");
    if (fields[0] == fields[1]) continue;  // self-loop
    raw.push_back({std::string(fields[0]), std::string(fields[1]), t});
  }

  if (opt.drop_zero_out_degree) {
    std::set<std::string_view> has_out;
    for (const auto& e : raw) has_out.insert(e.src);
    std::erase_if(raw, [&](const detail::RawEdge& e) { return !has_out.contains(e.dst); });
  }

  std::stable_sort(raw.begin(), raw.end(),
                   [](const auto& a, const auto& b) { return a.time < b.time; });

  TemporalEdgeList out;
  out.directed = opt.directed;
  out.time_mode = opt.time_mode;
  std::unordered_map<std::string, NodeId> ids;
  auto id_of = [&](const std::string& label) {
    auto [it, inserted] = ids.try_emplace(label, static_cast<NodeId>(out.labels.size()));
    if (inserted) {
      if (out.labels.size() >= std::numeric_limits<NodeId>::max()) {
        throw std::length_error("node count exceeds NodeId range");
      }
      out.labels.push_back(label);
    }
    return it->second;
  };

  std::set<std::pair<NodeId, NodeId>> seen;
  out.edges.reserve(raw.size());
  for (const auto& e : raw) {
    NodeId s = id_of(e.src);
    NodeId d = id_of(e.dst);
    if (!opt.directed && d < s) std::swap(s, d);
    // Sorted by time, so the first occurrence carries the earliest time.
    if (seen.emplace(s, d).second) out.edges.push_back({s, d, e.time});
  }
  return out;
}

inline TemporalEdgeList ingest_file(const std::string& path, const IngestOptions& opt = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("input", "cannot open '" + path + "'");
  return ingest_edges(in, opt);
}

namespace detail {
inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}
}  // namespace detail

/// Writes `src_id,dst_id,time` and the `node_id,label` sidecar.
inline void write_normalized(const TemporalEdgeList& list, std::ostream& edges, std::ostream& labels) {
  edges << "src_id,dst_id,time\n";
  for (const auto& e : list.edges) edges << e.src << ',' << e.dst << ',' << e.time << '\n';
  labels << "node_id,label\n";
  for (std::size_t i = 0; i < list.labels.size(); ++i) {
    labels << i << ',' << detail::csv_quote(list.labels[i]) << '\n';
  }
}

/// Writes the list back in the ingestible `<src> <dst> <time>` form using the
/// original labels.
inline void write_edge_list(const TemporalEdgeList& list, std::ostream& out) {
  for (const auto& e : list.edges) {
    out << list.labels[e.src] << ' ' << list.labels[e.dst] << ' ' << e.time << '\n';
  }
}

// ---------------------------------------------------------------------------

/// Compressed sparse rows with strictly ascending rows.
struct CsrAdjacency {
  std::vector<std::uint64_t> offsets{0};
  std::vector<NodeId> targets;

  std::span<const NodeId> row(NodeId v) const {
    return {targets.data() + offsets[v], static_cast<std::size_t>(offsets[v + 1] - offsets[v])};
  }

  /// Builds rows from (row, target) pairs; duplicate pairs are collapsed.
  static CsrAdjacency build(std::size_t n, std::span<const std::pair<NodeId, NodeId>> pairs) {
    CsrAdjacency a;
    a.offsets.assign(n + 1, 0);
    for (const auto& [r, c] : pairs) ++a.offsets[r + 1];
    std::partial_sum(a.offsets.begin(), a.offsets.end(), a.offsets.begin());
    a.targets.resize(pairs.size());
    std::vector<std::uint64_t> cursor(a.offsets.begin(), a.offsets.end() - 1);
    for (const auto& [r, c] : pairs) a.targets[cursor[r]++] = c;
    // Sort and dedupe each row, compacting in place.
    std::uint64_t write = 0;
    for (std::size_t v = 0; v < n; ++v) {
      auto b = a.targets.begin() + static_cast<std::ptrdiff_t>(a.offsets[v]);
      auto e = a.targets.begin() + static_cast<std::ptrdiff_t>(a.offsets[v + 1]);
      std::sort(b, e);
      auto u = std::unique(b, e);
      a.offsets[v] = write;
      for (auto it = b; it != u; ++it) a.targets[write++] = *it;
    }
    a.offsets[n] = write;
    a.targets.resize(write);
    return a;
  }
};

/// Immutable graph for one snapshot. Undirected graphs keep one symmetric
/// adjacency; directed graphs keep successors, predecessors and their union.
class SnapshotGraph {
 public:
  SnapshotGraph() = default;

  SnapshotGraph(std::size_t node_count, std::span<const TemporalEdge> edges, bool directed,
                std::size_t index = 0, std::int64_t window_start = 0, std::int64_t window_end = 0)
      : directed_(directed),
        node_count_(node_count),
        edge_count_(edges.size()),
        index_(index),
        window_start_(window_start),
        window_end_(window_end) {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    pairs.reserve(edges.size() * 2);
    for (const auto& e : edges) {
      if (e.src >= node_count || e.dst >= node_count) throw std::out_of_range("edge endpoint out of range");
      if (e.src == e.dst) throw std::invalid_argument("self-loop in snapshot edges");
    }
    if (!directed) {
      for (const auto& e : edges) {
        pairs.emplace_back(e.src, e.dst);
        pairs.emplace_back(e.dst, e.src);
      }
      out_ = CsrAdjacency::build(node_count, pairs);
      edge_count_ = out_.targets.size() / 2;
      return;
    }
    for (const auto& e : edges) pairs.emplace_back(e.src, e.dst);
    out_ = CsrAdjacency::build(node_count, pairs);
    edge_count_ = out_.targets.size();
    for (auto& p : pairs) std::swap(p.first, p.second);
    in_ = CsrAdjacency::build(node_count, pairs);
    std::size_t m = pairs.size();
    for (std::size_t i = 0; i < m; ++i) pairs.emplace_back(pairs[i].second, pairs[i].first);
    sym_ = CsrAdjacency::build(node_count, pairs);
  }

  bool directed() const { return directed_; }
  std::size_t node_count() const { return node_count_; }
  /// Number of distinct edges (unordered pairs when undirected).
  std::size_t edge_count() const { return edge_count_; }
  std::size_t index() const { return index_; }
  std::int64_t window_start() const { return window_start_; }
  std::int64_t window_end() const { return window_end_; }

  // Unchecked row access; callers guarantee v < node_count().
  std::span<const NodeId> successors(NodeId v) const { return out_.row(v); }
  std::span<const NodeId> predecessors(NodeId v) const { return directed_ ? in_.row(v) : out_.row(v); }
  /// Γ(v): the adjacency itself when undirected, successors ∪ predecessors when directed.
  std::span<const NodeId> adjacent(NodeId v) const { return directed_ ? sym_.row(v) : out_.row(v); }

  bool has_edge(NodeId a, NodeId b) const { return sorted_contains(out_.row(a), b); }

  void check_node(NodeId v) const {
    if (v >= node_count_) {
      throw std::out_of_range("node id " + std::to_string(v) + " out of range (node count " +
                              std::to_string(node_count_) + ")");
    }
  }

 private:
  bool directed_ = false;
  std::size_t node_count_ = 0;
  std::size_t edge_count_ = 0;
  std::size_t index_ = 0;
  std::int64_t window_start_ = 0;
  std::int64_t window_end_ = 0;
  CsrAdjacency out_;
  CsrAdjacency in_;
  CsrAdjacency sym_;
};

enum class NeighborMode { kOut, kIn, kUndirected };

/// Ascending neighbor ids of `node`. On undirected graphs every mode returns
/// the single adjacency.
inline std::span<const NodeId> neighbors(const SnapshotGraph& g, NodeId node, NeighborMode mode) {
  g.check_node(node);
  switch (mode) {
    case NeighborMode::kOut: return g.successors(node);
    case NeighborMode::kIn: return g.predecessors(node);
    case NeighborMode::kUndirected: return g.adjacent(node);
  }
  return {};
}

// ---------------------------------------------------------------------------

struct SnapshotPolicy {
  enum class Kind { kWindow, kFixedCount, kPreassigned };
  Kind kind = Kind::kWindow;
  std::int64_t window_seconds = 90LL * 86400;
  std::size_t count = 0;

  static SnapshotPolicy window(std::int64_t seconds) { return {Kind::kWindow, seconds, 0}; }
  static SnapshotPolicy fixed_count(std::size_t n) { return {Kind::kFixedCount, 0, n}; }
  static SnapshotPolicy preassigned() { return {Kind::kPreassigned, 0, 0}; }
};

/// Ordered cumulative snapshots over one node id space.
struct SnapshotSeries {
  std::vector<SnapshotGraph> snapshots;
  SnapshotPolicy policy;
  bool directed = false;
  std::size_t node_count = 0;

  std::size_t size() const { return snapshots.size(); }
  const SnapshotGraph& operator[](std::size_t t) const { return snapshots[t]; }
  const SnapshotGraph& at(std::size_t t) const {
    if (t >= snapshots.size()) throw std::out_of_range("snapshot index " + std::to_string(t) + " out of range");
    return snapshots[t];
  }
};

/// Builds cumulative snapshots: snapshot t holds every edge whose window index
/// is <= t. Window policy: windows [start + i*w, start + (i+1)*w) where start
/// is the earliest time, floor(span / w) + 1 windows. Fixed count: n equal
/// windows over the span, the last one closed. Pre-assigned: the time column
/// is the snapshot index and must cover 0..max without gaps.
inline SnapshotSeries build_snapshots(const TemporalEdgeList& list, const SnapshotPolicy& policy) {
  SnapshotSeries s;
  s.policy = policy;
  s.directed = list.directed;
  s.node_count = list.node_count();
  const auto& edges = list.edges;

  std::vector<std::size_t> window_of(edges.size());
  std::size_t n = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> bounds;

  switch (policy.kind) {
    case SnapshotPolicy::Kind::kPreassigned: {
      std::set<std::int64_t> seen;
      for (const auto& e : edges) {
        if (e.time < 0) throw ConfigError("snapshot", "negative snapshot index " + std::to_string(e.time));
        seen.insert(e.time);
      }
      if (!seen.empty() && static_cast<std::size_t>(*seen.rbegin()) + 1 != seen.size()) {
        throw ConfigError("snapshot", "pre-assigned snapshot indices are not contiguous from 0");
      }
      n = seen.size();
      for (std::size_t i = 0; i < edges.size(); ++i) window_of[i] = static_cast<std::size_t>(edges[i].time);
      for (std::size_t i = 0; i < n; ++i) {
        bounds.emplace_back(static_cast<std::int64_t>(i), static_cast<std::int64_t>(i) + 1);
      }
      break;
    }
    case SnapshotPolicy::Kind::kWindow: {
      if (policy.window_seconds <= 0) throw ConfigError("window", "window length must be positive");
      if (edges.empty()) throw ConfigError("input", "cannot build time windows over an empty edge list");
      const std::int64_t start = edges.front().time;
      const std::int64_t span = edges.back().time - start;
      n = static_cast<std::size_t>(span / policy.window_seconds) + 1;
      for (std::size_t i = 0; i < edges.size(); ++i) {
        window_of[i] = static_cast<std::size_t>((edges[i].time - start) / policy.window_seconds);
      }
      for (std::size_t i = 0; i < n; ++i) {
        auto lo = start + static_cast<std::int64_t>(i) * policy.window_seconds;
        bounds.emplace_back(lo, lo + policy.window_seconds);
      }
      break;
    }
    case SnapshotPolicy::Kind::kFixedCount: {
      if (policy.count == 0) throw ConfigError("snapshots", "snapshot count must be positive");
      if (edges.empty()) throw ConfigError("input", "cannot build time windows over an empty edge list");
      n = policy.count;
      const std::int64_t start = edges.front().time;
      const std::int64_t span = edges.back().time - start;
      for (std::size_t i = 0; i < edges.size(); ++i) {
        if (span == 0) {
          window_of[i] = 0;
          continue;
        }
        auto idx = static_cast<__int128>(edges[i].time - start) * static_cast<__int128>(n) / span;
        window_of[i] = std::min<std::size_t>(static_cast<std::size_t>(idx), n - 1);
      }
      for (std::size_t i = 0; i < n; ++i) {
        auto lo = start + static_cast<std::int64_t>(static_cast<__int128>(span) * static_cast<__int128>(i) / n);
        auto hi = start + static_cast<std::int64_t>(static_cast<__int128>(span) * static_cast<__int128>(i + 1) / n);
        bounds.emplace_back(lo, hi);
      }
      break;
    }
  }

  // Group edge positions by window, then emit cumulative prefixes.
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return window_of[a] < window_of[b]; });
  std::vector<TemporalEdge> cumulative;
  cumulative.reserve(edges.size());
  std::size_t pos = 0;
  s.snapshots.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    while (pos < order.size() && window_of[order[pos]] <= t) cumulative.push_back(edges[order[pos++]]);
    s.snapshots.emplace_back(list.node_count(), cumulative, list.directed, t, bounds[t].first, bounds[t].second);
  }
  return s;
}

}  // namespace pdlink
