#pragma once

// Egocentric quantities: ego neighbors, 2-hop candidates, common neighbors,
// personalized degree and directed open-triad classification.
//
// Directed conventions used throughout:
//   * the ego's neighbors are its successors (ego -> z);
//   * candidates are successors and predecessors of those neighbors that are
//     neither the ego nor already followed by it (a v with only v -> ego stays);
//   * a common neighbor z of (ego, v) has ego -> z and any edge between z and v.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pdlink/common.hpp"
#include "pdlink/graph.hpp"

namespace pdlink {

/// Neighbor set of the ego: Γ(ego) when undirected, successors when directed.
inline std::span<const NodeId> ego_neighbors(const SnapshotGraph& g, NodeId ego) {
  g.check_node(ego);
  return g.successors(ego);
}

inline std::vector<NodeId> two_hop_candidates(const SnapshotGraph& g, NodeId ego) {
  g.check_node(ego);
  auto nb = g.successors(ego);
  std::vector<NodeId> out;
  for (NodeId z : nb) {
    auto row = g.adjacent(z);
    out.insert(out.end(), row.begin(), row.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase_if(out, [&](NodeId v) { return v == ego || sorted_contains(nb, v); });
  return out;
}

/// Ego-side neighbors adjacent (either direction) to v.
inline std::vector<NodeId> common_neighbors(const SnapshotGraph& g, NodeId ego, NodeId v) {
  g.check_node(ego);
  g.check_node(v);
  if (ego == v) throw PreconditionError("common_neighbors: ego and candidate must differ");
  return intersection(g.successors(ego), g.adjacent(v));
}

/// Global degree of z under a degree mode. Undirected graphs ignore the mode.
inline std::size_t global_degree(const SnapshotGraph& g, NodeId z, DegreeMode mode) {
  if (!g.directed()) return g.adjacent(z).size();
  switch (mode) {
    case DegreeMode::kUndirected: return g.adjacent(z).size();
    case DegreeMode::kIn: return g.predecessors(z).size();
    case DegreeMode::kOut: return g.successors(z).size();
  }
  return 0;
}

namespace detail {

inline void require_mode_fits(const SnapshotGraph& g, DegreeMode mode) {
  if (!g.directed() && mode != DegreeMode::kUndirected) {
    throw ConfigError("mode", "undirected graphs admit only the undirected degree mode");
  }
}

/// The ego-side set a personalized degree is counted against. Directed in/out
/// modes always count nodes w with ego -> w; the reciprocated mode uses the
/// symmetrized neighborhood.
inline std::span<const NodeId> personalized_ego_side(const SnapshotGraph& g, NodeId ego, DegreeMode mode) {
  return g.directed() && mode == DegreeMode::kUndirected ? g.adjacent(ego) : g.successors(ego);
}

inline std::span<const NodeId> personalized_neighbor_side(const SnapshotGraph& g, NodeId z, DegreeMode mode) {
  if (!g.directed()) return g.adjacent(z);
  switch (mode) {
    case DegreeMode::kUndirected: return g.adjacent(z);
    case DegreeMode::kIn: return g.predecessors(z);
    case DegreeMode::kOut: return g.successors(z);
  }
  return {};
}

/// Personalized degree without the neighbor precondition (used by the
/// per-triad analysis, where z may be a predecessor of the ego).
inline std::size_t personalized_degree_unchecked(const SnapshotGraph& g, NodeId ego, NodeId z, DegreeMode mode) {
  return intersection_size(personalized_ego_side(g, ego, mode), personalized_neighbor_side(g, z, mode));
}

}  // namespace detail

/// Number of nodes linked to both the ego and its neighbor z.
///   undirected:           |Γ(ego) ∩ Γ(z)|
///   directed, out:        |{w : z -> w, ego -> w}|
///   directed, in:         |{w : w -> z, ego -> w}|
///   directed, reciprocated: computed on the symmetrized graph
/// Throws PreconditionError unless z is an ego neighbor.
inline std::size_t personalized_degree(const SnapshotGraph& g, NodeId ego, NodeId z, DegreeMode mode) {
  g.check_node(ego);
  g.check_node(z);
  detail::require_mode_fits(g, mode);
  if (!sorted_contains(g.successors(ego), z)) {
    throw PreconditionError("personalized_degree: node " + std::to_string(z) + " is not a neighbor of ego " +
                            std::to_string(ego));
  }
  return detail::personalized_degree_unchecked(g, ego, z, mode);
}

// ---------------------------------------------------------------------------
// Directed open triads (ego u, neighbor z, candidate v).

enum class EdgeConfig { kOutOnly = 0, kReciprocal = 1, kInOnly = 2 };

inline std::string_view to_string(EdgeConfig c) {
  switch (c) {
    case EdgeConfig::kOutOnly: return "out-only";
    case EdgeConfig::kReciprocal: return "reciprocal";
    case EdgeConfig::kInOnly: return "in-only";
  }
  return "?";
}

/// One of the nine (ego-edge, neighbor-edge) direction configurations.
///
/// Labels are row-major over (ego edge, neighbor edge), each ordered
/// (out-only, reciprocal, in-only):
///   T01 u->z z->v   T02 u->z z<->v   T03 u->z v->z
///   T04 u<->z z->v  T05 u<->z z<->v  T06 u<->z v->z
///   T07 z->u z->v   T08 z->u z<->v   T09 z->u v->z
/// T07-T09 are exactly the triads where z is only a predecessor of the ego.
struct TriadType {
  EdgeConfig ego_edge = EdgeConfig::kOutOnly;
  EdgeConfig neighbor_edge = EdgeConfig::kOutOnly;

  /// 0-based position in T01..T09.
  int index() const { return 3 * static_cast<int>(ego_edge) + static_cast<int>(neighbor_edge); }
  int label() const { return index() + 1; }
  std::string name() const { return "T0" + std::to_string(label()); }

  static TriadType from_index(int i) {
    if (i < 0 || i > 8) throw std::out_of_range("triad index out of range");
    return {static_cast<EdgeConfig>(i / 3), static_cast<EdgeConfig>(i % 3)};
  }

  friend bool operator==(const TriadType&, const TriadType&) = default;
};

inline constexpr int kTriadCount = 9;

namespace detail {
inline std::optional<EdgeConfig> edge_config(const SnapshotGraph& g, NodeId a, NodeId b) {
  bool fwd = g.has_edge(a, b);
  bool back = g.has_edge(b, a);
  if (fwd && back) return EdgeConfig::kReciprocal;
  if (fwd) return EdgeConfig::kOutOnly;
  if (back) return EdgeConfig::kInOnly;
  return std::nullopt;
}
}  // namespace detail

/// Classifies the open triad by the ego–z and z–v edge directions. Any edge
/// between ego and v is ignored.
inline TriadType classify_triad(const SnapshotGraph& g, NodeId ego, NodeId z, NodeId v) {
  g.check_node(ego);
  g.check_node(z);
  g.check_node(v);
  if (!g.directed()) throw ConfigError("graph", "triad classification requires a directed graph");
  auto ez = detail::edge_config(g, ego, z);
  auto zv = detail::edge_config(g, z, v);
  if (!ez) throw PreconditionError("classify_triad: no edge between ego and neighbor");
  if (!zv) throw PreconditionError("classify_triad: no edge between neighbor and candidate");
  return {*ez, *zv};
}

// ---------------------------------------------------------------------------

/// Per-worker scratch space reused across egos.
struct EgoWorkspace {
  NodeMarker neighbor_mark;
  NodeMarker side_mark;
  std::vector<std::pair<NodeId, std::uint32_t>> pairs;
};

/// An ego's neighbors and 2-hop candidates in one snapshot, with each
/// candidate's common neighbors stored as ascending positions into
/// neighbors().
class EgoView {
 public:
  EgoView(const SnapshotGraph& g, NodeId ego, EgoWorkspace& ws) : graph_(&g), ego_(ego) { build(ws); }
  EgoView(const SnapshotGraph& g, NodeId ego) : graph_(&g), ego_(ego) {
    EgoWorkspace ws;
    build(ws);
  }

  NodeId ego() const { return ego_; }
  std::size_t snapshot() const { return graph_->index(); }
  const SnapshotGraph& graph() const { return *graph_; }
  std::span<const NodeId> neighbors() const { return neighbors_; }
  std::span<const NodeId> candidates() const { return candidates_; }
  std::size_t candidate_count() const { return candidates_.size(); }

  std::span<const std::uint32_t> common_neighbor_slots(std::size_t ci) const {
    return {cn_slots_.data() + cn_offsets_[ci], cn_offsets_[ci + 1] - cn_offsets_[ci]};
  }

  std::vector<NodeId> common_neighbors(std::size_t ci) const {
    std::vector<NodeId> out;
    for (auto s : common_neighbor_slots(ci)) out.push_back(neighbors_[s]);
    return out;
  }

  /// Personalized degree of every neighbor (aligned with neighbors()).
  std::vector<std::uint32_t> personalized_degrees(DegreeMode mode, EgoWorkspace& ws) const {
    detail::require_mode_fits(*graph_, mode);
    const auto& g = *graph_;
    ws.side_mark.reset(g.node_count());
    ws.side_mark.mark_all(detail::personalized_ego_side(g, ego_, mode));
    std::vector<std::uint32_t> out(neighbors_.size());
    for (std::size_t i = 0; i < neighbors_.size(); ++i) {
      std::uint32_t c = 0;
      for (NodeId w : detail::personalized_neighbor_side(g, neighbors_[i], mode)) c += ws.side_mark.marked(w);
      out[i] = c;
    }
    return out;
  }

 private:
  void build(EgoWorkspace& ws) {
    const auto& g = *graph_;
    g.check_node(ego_);
    auto nb = g.successors(ego_);
    neighbors_.assign(nb.begin(), nb.end());
    ws.neighbor_mark.reset(g.node_count());
    ws.neighbor_mark.mark_all(nb);
    ws.neighbor_mark.mark(ego_);
    auto& pairs = ws.pairs;
    pairs.clear();
    for (std::uint32_t zi = 0; zi < nb.size(); ++zi) {
      for (NodeId v : g.adjacent(nb[zi])) {
        if (!ws.neighbor_mark.marked(v)) pairs.emplace_back(v, zi);
      }
    }
    std::sort(pairs.begin(), pairs.end());
    cn_offsets_.assign(1, 0);
    cn_slots_.clear();
    cn_slots_.reserve(pairs.size());
    candidates_.clear();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (i == 0 || pairs[i].first != pairs[i - 1].first) {
        if (i != 0) cn_offsets_.push_back(cn_slots_.size());
        candidates_.push_back(pairs[i].first);
      }
      cn_slots_.push_back(pairs[i].second);
    }
    if (!pairs.empty()) cn_offsets_.push_back(cn_slots_.size());
  }

  const SnapshotGraph* graph_;
  NodeId ego_;
  std::vector<NodeId> neighbors_;
  std::vector<NodeId> candidates_;
  std::vector<std::size_t> cn_offsets_;
  std::vector<std::uint32_t> cn_slots_;
};

}  // namespace pdlink
