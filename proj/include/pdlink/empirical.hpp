#pragma once

// Formed vs. not-formed comparison of common-neighbor degrees.
//
// For an ego at snapshot t, 2-hop candidates are split by whether the ego
// links to them in snapshot t+1. Each candidate contributes the mean over its
// common neighbors z of log(global(z) + 1) and log(pd(z) + 1); those are
// averaged with equal weight per candidate inside each group. An (ego, t)
// cell with an empty group is excluded for both groups. Per-ego values are
// averaged over the ego's usable snapshots, then mean and standard error are
// taken across egos.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pdlink/common.hpp"
#include "pdlink/degree_dist.hpp"
#include "pdlink/ego.hpp"
#include "pdlink/graph.hpp"

namespace pdlink {

enum class Group { kFormed, kNotFormed };

inline std::string_view to_string(Group g) { return g == Group::kFormed ? "formed" : "not-formed"; }

enum class AnalysisMode { kUndirected, kPerTriad };

inline AnalysisMode parse_analysis_mode(std::string_view s) {
  if (s == "undirected" || s == "plain") return AnalysisMode::kUndirected;
  if (s == "per-triad" || s == "triad") return AnalysisMode::kPerTriad;
  throw ConfigError("analysis", "unknown analysis mode '" + std::string(s) + "'");
}

struct CandidatePartition {
  std::vector<NodeId> formed;
  std::vector<NodeId> not_formed;
};

/// Splits the ego's candidates at snapshot t by formation of ego -> v (or the
/// undirected edge) in snapshot t+1.
inline CandidatePartition partition_candidates(const SnapshotSeries& series, std::size_t t, NodeId ego) {
  if (t + 1 >= series.size()) {
    throw std::out_of_range("partition_candidates: snapshot " + std::to_string(t) + " has no successor");
  }
  const auto& next = series[t + 1];
  CandidatePartition p;
  for (NodeId v : two_hop_candidates(series[t], ego)) {
    (next.has_edge(ego, v) ? p.formed : p.not_formed).push_back(v);
  }
  return p;
}

struct GroupStats {
  Group group = Group::kFormed;
  double mean_log_global = 0.0;
  double mean_log_personalized = 0.0;
  std::size_t count = 0;  // contributing candidates
};

struct GroupPair {
  GroupStats formed;
  GroupStats not_formed;
};

/// Statistics of one (ego, snapshot) cell, one slot per (triad, degree mode).
/// In undirected analysis there is a single triad slot.
struct EgoSnapshotStats {
  NodeId ego = 0;
  std::size_t snapshot = 0;
  AnalysisMode analysis = AnalysisMode::kUndirected;
  std::vector<DegreeMode> modes;
  std::vector<std::optional<GroupPair>> slots;  // nullopt marks an excluded cell

  std::size_t triad_slots() const { return analysis == AnalysisMode::kPerTriad ? kTriadCount : 1; }

  const std::optional<GroupPair>& get(DegreeMode mode, std::optional<TriadType> triad = std::nullopt) const {
    std::size_t ti = triad ? static_cast<std::size_t>(triad->index()) : 0;
    for (std::size_t mi = 0; mi < modes.size(); ++mi) {
      if (modes[mi] == mode) return slots[ti * modes.size() + mi];
    }
    throw std::invalid_argument("degree mode not computed");
  }
};

namespace detail {

struct GroupAccumulator {
  double sum_global = 0.0;
  double sum_personalized = 0.0;
  std::size_t count = 0;

  void add(double g, double p) {
    sum_global += g;
    sum_personalized += p;
    ++count;
  }
  GroupStats finish(Group group) const {
    return {group, sum_global / static_cast<double>(count), sum_personalized / static_cast<double>(count), count};
  }
};

inline std::vector<std::uint32_t> personalized_for(const SnapshotGraph& g, NodeId ego, std::span<const NodeId> zs,
                                                   DegreeMode mode, NodeMarker& mark) {
  mark.reset(g.node_count());
  mark.mark_all(personalized_ego_side(g, ego, mode));
  std::vector<std::uint32_t> out(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) {
    std::uint32_t c = 0;
    for (NodeId w : personalized_neighbor_side(g, zs[i], mode)) c += mark.marked(w);
    out[i] = c;
  }
  return out;
}

inline void validate_modes(const SnapshotSeries& series, AnalysisMode analysis, std::span<const DegreeMode> modes) {
  if (modes.empty()) throw ConfigError("degree-modes", "at least one degree mode is required");
  if (analysis == AnalysisMode::kPerTriad && !series.directed) {
    throw ConfigError("analysis", "per-triad analysis requires a directed graph");
  }
  if (!series.directed) {
    for (auto m : modes) {
      if (m != DegreeMode::kUndirected) {
        throw ConfigError("degree-modes", "undirected graphs admit only the undirected degree mode");
      }
    }
  }
}

inline EgoSnapshotStats plain_stats(const SnapshotSeries& series, std::size_t t, NodeId ego,
                                    std::span<const DegreeMode> modes, EgoWorkspace& ws) {
  const auto& g = series[t];
  const auto& next = series[t + 1];
  EgoSnapshotStats out{ego, t, AnalysisMode::kUndirected, {modes.begin(), modes.end()}, {}};
  out.slots.resize(modes.size());
  EgoView view(g, ego, ws);
  std::vector<char> formed(view.candidate_count());
  std::size_t nf = 0;
  for (std::size_t ci = 0; ci < view.candidate_count(); ++ci) {
    formed[ci] = next.has_edge(ego, view.candidates()[ci]);
    nf += formed[ci];
  }
  if (nf == 0 || nf == view.candidate_count()) return out;

  auto nb = view.neighbors();
  for (std::size_t mi = 0; mi < modes.size(); ++mi) {
    auto pd = personalized_for(g, ego, nb, modes[mi], ws.side_mark);
    GroupAccumulator acc[2];
    for (std::size_t ci = 0; ci < view.candidate_count(); ++ci) {
      auto slots = view.common_neighbor_slots(ci);
      double lg = 0.0;
      double lp = 0.0;
      for (auto s : slots) {
        lg += std::log(static_cast<double>(global_degree(g, nb[s], modes[mi])) + 1.0);
        lp += std::log(static_cast<double>(pd[s]) + 1.0);
      }
      double k = static_cast<double>(slots.size());
      acc[formed[ci] ? 0 : 1].add(lg / k, lp / k);
    }
    out.slots[mi] = GroupPair{acc[0].finish(Group::kFormed), acc[1].finish(Group::kNotFormed)};
  }
  return out;
}

inline EgoSnapshotStats triad_stats(const SnapshotSeries& series, std::size_t t, NodeId ego,
                                    std::span<const DegreeMode> modes, EgoWorkspace& ws) {
  const auto& g = series[t];
  const auto& next = series[t + 1];
  EgoSnapshotStats out{ego, t, AnalysisMode::kPerTriad, {modes.begin(), modes.end()}, {}};
  out.slots.resize(kTriadCount * modes.size());

  // Every node adjacent to the ego in either direction can play z.
  auto zs = g.adjacent(ego);
  auto succ = g.successors(ego);
  auto pred = g.predecessors(ego);
  ws.neighbor_mark.reset(g.node_count());
  ws.neighbor_mark.mark_all(succ);
  ws.neighbor_mark.mark(ego);

  struct Entry {
    int triad;
    NodeId v;
    std::uint32_t z;
    auto operator<=>(const Entry&) const = default;
  };
  std::vector<Entry> entries;
  for (std::uint32_t zi = 0; zi < zs.size(); ++zi) {
    NodeId z = zs[zi];
    bool out_e = sorted_contains(succ, z);
    bool in_e = sorted_contains(pred, z);
    auto ego_cfg = out_e && in_e ? EdgeConfig::kReciprocal : (out_e ? EdgeConfig::kOutOnly : EdgeConfig::kInOnly);
    auto z_succ = g.successors(z);
    auto z_pred = g.predecessors(z);
    for (NodeId v : g.adjacent(z)) {
      if (ws.neighbor_mark.marked(v)) continue;  // ego itself, or already followed
      bool zv = sorted_contains(z_succ, v);
      bool vz = sorted_contains(z_pred, v);
      auto nb_cfg = zv && vz ? EdgeConfig::kReciprocal : (zv ? EdgeConfig::kOutOnly : EdgeConfig::kInOnly);
      entries.push_back({TriadType{ego_cfg, nb_cfg}.index(), v, zi});
    }
  }
  std::sort(entries.begin(), entries.end());

  std::vector<std::vector<std::uint32_t>> pd(modes.size());
  for (std::size_t mi = 0; mi < modes.size(); ++mi) pd[mi] = personalized_for(g, ego, zs, modes[mi], ws.side_mark);

  std::size_t i = 0;
  while (i < entries.size()) {
    const int triad = entries[i].triad;
    std::size_t triad_end = i;
    while (triad_end < entries.size() && entries[triad_end].triad == triad) ++triad_end;

    std::vector<GroupAccumulator> acc(modes.size() * 2);
    std::size_t n_formed = 0;
    std::size_t n_cand = 0;
    for (std::size_t j = i; j < triad_end;) {
      NodeId v = entries[j].v;
      std::size_t k = j;
      while (k < triad_end && entries[k].v == v) ++k;
      bool formed = next.has_edge(ego, v);
      n_formed += formed;
      ++n_cand;
      double count = static_cast<double>(k - j);
      for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        double lg = 0.0;
        double lp = 0.0;
        for (std::size_t e = j; e < k; ++e) {
          auto zi = entries[e].z;
          lg += std::log(static_cast<double>(global_degree(g, zs[zi], modes[mi])) + 1.0);
          lp += std::log(static_cast<double>(pd[mi][zi]) + 1.0);
        }
        acc[mi * 2 + (formed ? 0 : 1)].add(lg / count, lp / count);
      }
      j = k;
    }
    if (n_formed > 0 && n_formed < n_cand) {
      for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        out.slots[static_cast<std::size_t>(triad) * modes.size() + mi] =
            GroupPair{acc[mi * 2].finish(Group::kFormed), acc[mi * 2 + 1].finish(Group::kNotFormed)};
      }
    }
    i = triad_end;
  }
  return out;
}

}  // namespace detail

/// Group statistics of one ego at snapshot t. Undirected analysis uses the
/// standard candidate rules; per-triad analysis (directed graphs) lets z be
/// any node adjacent to the ego and splits common neighbors by triad type.
inline EgoSnapshotStats ego_snapshot_stats(const SnapshotSeries& series, std::size_t t, NodeId ego,
                                           AnalysisMode analysis, std::span<const DegreeMode> modes,
                                           EgoWorkspace& ws) {
  detail::validate_modes(series, analysis, modes);
  if (t + 1 >= series.size()) {
    throw std::out_of_range("ego_snapshot_stats: snapshot " + std::to_string(t) + " has no successor");
  }
  series[t].check_node(ego);
  return analysis == AnalysisMode::kPerTriad ? detail::triad_stats(series, t, ego, modes, ws)
                                             : detail::plain_stats(series, t, ego, modes, ws);
}

inline EgoSnapshotStats ego_snapshot_stats(const SnapshotSeries& series, std::size_t t, NodeId ego,
                                           AnalysisMode analysis, std::span<const DegreeMode> modes) {
  EgoWorkspace ws;
  return ego_snapshot_stats(series, t, ego, analysis, modes, ws);
}

// ---------------------------------------------------------------------------

struct EmpiricalRow {
  std::optional<TriadType> triad;
  Group group = Group::kFormed;
  DegreeKind kind = DegreeKind::kGlobal;
  DegreeMode mode = DegreeMode::kUndirected;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_egos = 0;
};

struct EmpiricalStats {
  AnalysisMode analysis = AnalysisMode::kUndirected;
  std::vector<EmpiricalRow> rows;
  std::size_t egos_requested = 0;
  std::size_t egos_used = 0;  // egos contributing to at least one row
  std::size_t cells_total = 0;
  std::size_t cells_excluded = 0;  // (ego, t, triad) cells with an empty group

  const EmpiricalRow* find(Group group, DegreeKind kind, DegreeMode mode,
                           std::optional<TriadType> triad = std::nullopt) const {
    for (const auto& r : rows) {
      if (r.group == group && r.kind == kind && r.mode == mode && r.triad == triad) return &r;
    }
    return nullptr;
  }
};

/// Aggregates ego_snapshot_stats over all transitions and the given egos.
/// Egos are reduced in ascending id order so results do not depend on
/// `workers`. Throws EmptyResultError if every cell was excluded.
inline EmpiricalStats aggregate_empirical(const SnapshotSeries& series, std::vector<NodeId> egos,
                                          AnalysisMode analysis, std::span<const DegreeMode> modes,
                                          std::size_t workers = 1) {
  detail::validate_modes(series, analysis, modes);
  if (series.size() < 2) throw ConfigError("snapshots", "empirical analysis needs at least 2 snapshots");
  if (egos.empty()) throw ConfigError("egos", "ego set is empty");
  std::sort(egos.begin(), egos.end());
  egos.erase(std::unique(egos.begin(), egos.end()), egos.end());
  for (NodeId e : egos) series[0].check_node(e);

  const std::size_t triads = analysis == AnalysisMode::kPerTriad ? kTriadCount : 1;
  const std::size_t slots = triads * modes.size();

  // Per ego and slot: summed values over usable snapshots and their count.
  struct EgoSums {
    std::vector<std::array<double, 4>> sums;  // formed g, formed p, not-formed g, not-formed p
    std::vector<std::size_t> used;
    std::size_t cells = 0;
    std::size_t excluded = 0;
  };
  std::vector<EgoSums> per_ego(egos.size());
  std::vector<EgoWorkspace> ws(std::max<std::size_t>(workers, 1));
  parallel_for(egos.size(), workers, [&](std::size_t i, std::size_t w) {
    auto& e = per_ego[i];
    e.sums.assign(slots, {0.0, 0.0, 0.0, 0.0});
    e.used.assign(slots, 0);
    for (std::size_t t = 0; t + 1 < series.size(); ++t) {
      auto st = ego_snapshot_stats(series, t, egos[i], analysis, modes, ws[w]);
      for (std::size_t ti = 0; ti < triads; ++ti) {
        ++e.cells;
        if (!st.slots[ti * modes.size()]) ++e.excluded;
      }
      for (std::size_t s = 0; s < slots; ++s) {
        if (!st.slots[s]) continue;
        const auto& gp = *st.slots[s];
        e.sums[s][0] += gp.formed.mean_log_global;
        e.sums[s][1] += gp.formed.mean_log_personalized;
        e.sums[s][2] += gp.not_formed.mean_log_global;
        e.sums[s][3] += gp.not_formed.mean_log_personalized;
        ++e.used[s];
      }
    }
  });

  EmpiricalStats out;
  out.analysis = analysis;
  out.egos_requested = egos.size();
  std::vector<char> ego_used(egos.size(), 0);
  for (const auto& e : per_ego) {
    out.cells_total += e.cells;
    out.cells_excluded += e.excluded;
  }
  for (std::size_t ti = 0; ti < triads; ++ti) {
    std::optional<TriadType> triad;
    if (analysis == AnalysisMode::kPerTriad) triad = TriadType::from_index(static_cast<int>(ti));
    for (int gi = 0; gi < 2; ++gi) {
      for (int ki = 0; ki < 2; ++ki) {
        for (std::size_t mi = 0; mi < modes.size(); ++mi) {
          const std::size_t s = ti * modes.size() + mi;
          const std::size_t col = static_cast<std::size_t>(gi * 2 + ki);
          std::vector<double> values;
          for (std::size_t i = 0; i < egos.size(); ++i) {
            if (per_ego[i].used[s] == 0) continue;
            values.push_back(per_ego[i].sums[s][col] / static_cast<double>(per_ego[i].used[s]));
            ego_used[i] = 1;
          }
          if (values.empty()) continue;
          auto ms = mean_stderr(values);
          out.rows.push_back({triad, gi == 0 ? Group::kFormed : Group::kNotFormed,
                              ki == 0 ? DegreeKind::kGlobal : DegreeKind::kPersonalized, modes[mi], ms.mean,
                              ms.std_error, ms.n});
        }
      }
    }
  }
  out.egos_used = static_cast<std::size_t>(std::count(ego_used.begin(), ego_used.end(), 1));
  if (out.rows.empty()) {
    throw EmptyResultError("empirical analysis: every ego was excluded (egos=" + std::to_string(egos.size()) +
                           ", cells=" + std::to_string(out.cells_total) +
                           ", excluded=" + std::to_string(out.cells_excluded) + ")");
  }
  return out;
}

}  // namespace pdlink
