#pragma once

// Seeded synthetic temporal graphs for tests and experiments.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pdlink/common.hpp"
#include "pdlink/ego.hpp"
#include "pdlink/graph.hpp"
#include "pdlink/scorers.hpp"

namespace pdlink {

enum class GeneratorKind { kUniformRandom, kPreferentialAttachment, kPlantedScorer };

inline GeneratorKind parse_generator_kind(std::string_view s) {
  if (s == "uniform" || s == "uniform-random") return GeneratorKind::kUniformRandom;
  if (s == "pa" || s == "preferential-attachment") return GeneratorKind::kPreferentialAttachment;
  if (s == "planted" || s == "planted-scorer") return GeneratorKind::kPlantedScorer;
  throw ConfigError("gen-kind", "unknown generator kind '" + std::string(s) + "'");
}

inline std::string_view to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::kUniformRandom: return "uniform-random";
    case GeneratorKind::kPreferentialAttachment: return "preferential-attachment";
    case GeneratorKind::kPlantedScorer: return "planted-scorer";
  }
  return "?";
}

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kUniformRandom;
  std::size_t nodes = 100;
  bool directed = false;
  double density = 0.05;            // uniform-random edge probability
  std::size_t attachment = 4;       // edges per arriving node (preferential attachment)
  double triad_probability = 0.0;   // chance an attachment closes a triangle instead
  ScoringMethod planted{Method::kPDCN, DegreeMode::kUndirected};
  std::size_t snapshots = 1;
  double formation_rate = 0.05;     // planted: probability for the top-scored candidate
  std::int64_t window_seconds = 90LL * 86400;
  std::uint64_t seed = 1;
};

namespace detail {

inline void validate(const GeneratorSpec& s) {
  if (s.nodes == 0) throw ConfigError("nodes", "node count must be positive");
  if (s.snapshots == 0) throw ConfigError("gen-snapshots", "snapshot count must be positive");
  if (s.window_seconds <= 0) throw ConfigError("window", "window length must be positive");
  if (s.kind == GeneratorKind::kUniformRandom && !(s.density >= 0.0 && s.density <= 1.0)) {
    throw ConfigError("density", "density must lie in [0, 1]");
  }
  if (s.kind != GeneratorKind::kUniformRandom) {
    if (s.attachment == 0) throw ConfigError("attachment", "attachment must be >= 1");
    if (s.nodes <= s.attachment) throw ConfigError("nodes", "node count must exceed attachment");
    if (!(s.triad_probability >= 0.0 && s.triad_probability <= 1.0)) {
      throw ConfigError("triad-prob", "triad probability must lie in [0, 1]");
    }
  }
  if (s.kind == GeneratorKind::kPlantedScorer) {
    if (s.snapshots < 2) throw ConfigError("gen-snapshots", "planted generator needs at least 2 snapshots");
    if (!(s.formation_rate > 0.0 && s.formation_rate <= 1.0)) {
      throw ConfigError("formation-rate", "formation rate must lie in (0, 1]");
    }
    if (!s.directed && s.planted.method != Method::kCN && s.planted.mode != DegreeMode::kUndirected) {
      throw ConfigError("planted", "undirected graphs admit only the undirected degree mode");
    }
  }
}

inline std::vector<std::string> numeric_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return labels;
}

/// Holme–Kim style growth: a clique on attachment+1 seed nodes, then each new
/// node attaches to `attachment` distinct earlier nodes, preferentially by
/// degree or, with triad_probability, to a neighbor of its previous target.
inline std::vector<TemporalEdge> preferential_attachment(const GeneratorSpec& s, std::mt19937_64& rng,
                                                         bool spread_times) {
  const std::size_t n = s.nodes;
  const std::size_t m = s.attachment;
  const std::int64_t span = static_cast<std::int64_t>(s.snapshots) * s.window_seconds;
  std::vector<TemporalEdge> edges;
  std::vector<NodeId> ends;
  std::vector<std::vector<NodeId>> adj(n);
  auto add = [&](NodeId a, NodeId b, std::int64_t t) {
    edges.push_back({a, b, t});
    ends.push_back(a);
    ends.push_back(b);
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (NodeId a = 0; a <= m; ++a) {
    for (NodeId b = a + 1; b <= m; ++b) add(b, a, 0);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<NodeId> chosen;
  for (NodeId i = static_cast<NodeId>(m + 1); i < n; ++i) {
    const std::int64_t t =
        spread_times ? static_cast<std::int64_t>(static_cast<__int128>(span) * i / static_cast<std::int64_t>(n)) : 0;
    chosen.clear();
    auto taken = [&](NodeId v) { return std::find(chosen.begin(), chosen.end(), v) != chosen.end(); };
    while (chosen.size() < m) {
      NodeId pick = 0;
      bool found = false;
      if (!chosen.empty() && unit(rng) < s.triad_probability) {
        std::vector<NodeId> options;
        for (NodeId w : adj[chosen.back()]) {
          if (w != i && !taken(w)) options.push_back(w);
        }
        if (!options.empty()) {
          pick = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
          found = true;
        }
      }
      while (!found) {
        pick = ends[std::uniform_int_distribution<std::size_t>(0, ends.size() - 1)(rng)];
        found = pick != i && !taken(pick);
      }
      chosen.push_back(pick);
    }
    for (NodeId target : chosen) add(i, target, t);
  }
  return edges;
}

inline TemporalEdgeList finish(std::vector<TemporalEdge> edges, const GeneratorSpec& s) {
  std::stable_sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
  TemporalEdgeList out;
  out.directed = s.directed;
  out.labels = numeric_labels(s.nodes);
  std::set<std::pair<NodeId, NodeId>> seen;
  for (auto e : edges) {
    if (!s.directed && e.dst < e.src) std::swap(e.src, e.dst);
    if (seen.emplace(e.src, e.dst).second) out.edges.push_back(e);
  }
  return out;
}

}  // namespace detail

/// Generates a temporal edge list. The seed fully determines the output.
///
/// uniform-random: every pair gets an edge with probability `density`, timed
///   uniformly over snapshots * window seconds.
/// preferential-attachment: node arrivals spread evenly over the same span.
/// planted-scorer: snapshot 0 (time 0) is a preferential-attachment graph;
///   each later snapshot t (time t * window) adds ego -> v for every 2-hop
///   candidate with probability formation_rate * score / max ego score,
///   scored by the planted method on the previous snapshot.
inline TemporalEdgeList generate(const GeneratorSpec& s) {
  detail::validate(s);
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::int64_t span = static_cast<std::int64_t>(s.snapshots) * s.window_seconds;

  switch (s.kind) {
    case GeneratorKind::kUniformRandom: {
      std::vector<TemporalEdge> edges;
      std::uniform_int_distribution<std::int64_t> when(0, span - 1);
      for (NodeId a = 0; a < s.nodes; ++a) {
        for (NodeId b = s.directed ? 0 : a + 1; b < s.nodes; ++b) {
          if (a == b) continue;
          if (unit(rng) < s.density) edges.push_back({a, b, when(rng)});
        }
      }
      return detail::finish(std::move(edges), s);
    }
    case GeneratorKind::kPreferentialAttachment:
      return detail::finish(detail::preferential_attachment(s, rng, true), s);
    case GeneratorKind::kPlantedScorer: {
      auto edges = detail::preferential_attachment(s, rng, false);
      if (!s.directed) {
        for (auto& e : edges) {
          if (e.dst < e.src) std::swap(e.src, e.dst);
        }
      }
      std::set<std::pair<NodeId, NodeId>> present;
      for (const auto& e : edges) present.emplace(e.src, e.dst);
      EgoWorkspace ws;
      for (std::size_t t = 1; t < s.snapshots; ++t) {
        SnapshotGraph g(s.nodes, edges, s.directed, t - 1);
        const std::int64_t when = static_cast<std::int64_t>(t) * s.window_seconds;
        std::vector<TemporalEdge> added;
        for (NodeId ego = 0; ego < s.nodes; ++ego) {
          EgoView view(g, ego, ws);
          if (view.candidate_count() == 0) continue;
          EgoScorer scorer(view, ws);
          auto table = scorer.score(s.planted);
          double best = 0.0;
          for (const auto& e : table.entries) best = std::max(best, e.score);
          if (!(best > 0.0)) continue;
          for (const auto& e : table.entries) {
            double p = std::min(1.0, s.formation_rate * e.score / best);
            if (unit(rng) >= p) continue;
            NodeId a = ego;
            NodeId b = e.candidate;
            if (!s.directed && b < a) std::swap(a, b);
            if (present.emplace(a, b).second) added.push_back({a, b, when});
          }
        }
        edges.insert(edges.end(), added.begin(), added.end());
      }
      return detail::finish(std::move(edges), s);
    }
  }
  return {};
}

}  // namespace pdlink
