#pragma once

// Top-K predictive rate (precision at K) of the scorers against
// next-snapshot link formation.

#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pdlink/common.hpp"
#include "pdlink/ego.hpp"
#include "pdlink/graph.hpp"
#include "pdlink/scorers.hpp"

namespace pdlink {

struct RankedList {
  NodeId ego = 0;
  ScoringMethod method;
  std::vector<NodeId> order;
};

/// Descending score; equal scores by ascending node id.
inline RankedList rank_candidates(const ScoreTable& scores) {
  std::vector<ScoreEntry> e = scores.entries;
  std::sort(e.begin(), e.end(), [](const ScoreEntry& a, const ScoreEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.candidate < b.candidate;
  });
  RankedList r{scores.ego, scores.method, {}};
  r.order.reserve(e.size());
  for (const auto& x : e) r.order.push_back(x.candidate);
  return r;
}

/// |top-k ∩ formed| / k. `formed` must be ascending.
inline double precision_at_k(const RankedList& ranked, std::span<const NodeId> formed, std::size_t k) {
  if (k == 0) throw PreconditionError("precision_at_k: k must be >= 1");
  if (k > ranked.order.size()) {
    throw PreconditionError("precision_at_k: k=" + std::to_string(k) + " exceeds list length " +
                            std::to_string(ranked.order.size()));
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < k; ++i) hits += sorted_contains(formed, ranked.order[i]);
  return static_cast<double>(hits) / static_cast<double>(k);
}

// ---------------------------------------------------------------------------

struct EgoSampleSpec {
  std::size_t sample_size = 0;  // 0 = every eligible node
  std::uint64_t seed = 1;
  std::size_t two_hop_cutoff = 100000;
};

/// Nodes with at least one edge in the first snapshot, optionally reduced to a
/// seeded uniform sample. Returned ascending.
inline std::vector<NodeId> sample_egos(const SnapshotSeries& series, const EgoSampleSpec& spec) {
  std::vector<NodeId> pool;
  if (series.size() == 0) return pool;
  const auto& g0 = series[0];
  for (NodeId v = 0; v < g0.node_count(); ++v) {
    if (!g0.adjacent(v).empty()) pool.push_back(v);
  }
  if (spec.sample_size != 0 && spec.sample_size < pool.size()) {
    std::mt19937_64 rng(spec.seed);
    for (std::size_t i = 0; i < spec.sample_size; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(spec.sample_size);
    std::sort(pool.begin(), pool.end());
  }
  return pool;
}

/// Which (ego, snapshot) cells are scored.
struct CellRule {
  /// true: a cell needs >= max(ks) candidates and counts toward every K.
  /// false: a cell counts toward each K for which it has >= K candidates.
  bool require_max_k = true;
  bool require_formation = true;
};

struct EvalConfig {
  EgoSampleSpec sample;
  std::vector<ScoringMethod> methods;
  std::vector<std::size_t> ks{1, 3, 5, 10, 20, 30, 50};
  CellRule cells;
  std::size_t workers = 1;
  double log_base = std::numbers::e;
};

struct EvalRow {
  ScoringMethod method;
  std::size_t k = 0;
  double mean = 0.0;  // mean over egos of the per-ego mean P@K
  double std_error = 0.0;
  std::size_t n_cells = 0;
  std::size_t n_egos = 0;
  std::uint64_t cell_hash = 0;  // FNV-1a over the contributing (ego, t) cells
};

struct EvalResult {
  std::vector<EvalRow> rows;
  EgoSampleSpec sample;
  std::size_t egos_sampled = 0;
  std::size_t egos_skipped_cutoff = 0;
  std::size_t egos_evaluated = 0;

  const EvalRow* find(const ScoringMethod& m, std::size_t k) const {
    for (const auto& r : rows) {
      if (r.method == m && r.k == k) return &r;
    }
    return nullptr;
  }
};

namespace detail {
inline std::uint64_t fnv1a(std::uint64_t h, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) {
    h ^= (x >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}
}  // namespace detail

/// Evaluates every method on the same cells: each sampled ego at each
/// snapshot but the last, subject to the cell rule. Per-ego means over
/// snapshots are averaged across egos.
inline EvalResult evaluate_methods(const SnapshotSeries& series, const EvalConfig& cfg) {
  if (series.size() < 2) throw ConfigError("snapshots", "evaluation needs at least 2 snapshots");
  if (cfg.methods.empty()) throw ConfigError("methods", "no methods to evaluate");
  if (cfg.ks.empty()) throw ConfigError("k", "K list is empty");
  for (std::size_t i = 0; i < cfg.ks.size(); ++i) {
    if (cfg.ks[i] == 0 || (i > 0 && cfg.ks[i] <= cfg.ks[i - 1])) {
      throw ConfigError("k", "K list must be strictly ascending positive integers");
    }
  }
  for (const auto& m : cfg.methods) {
    if (m.method != Method::kCN) detail::require_mode_fits(series[0], m.mode);
  }

  const std::size_t nm = cfg.methods.size();
  const std::size_t nk = cfg.ks.size();
  const std::size_t max_k = cfg.ks.back();
  const std::size_t last_eval = series.size() - 2;

  EvalResult result;
  result.sample = cfg.sample;
  auto egos = sample_egos(series, cfg.sample);
  result.egos_sampled = egos.size();

  struct EgoOutcome {
    bool skipped = false;
    std::vector<double> sum;           // [m * nk + k]
    std::vector<std::size_t> cells;    // [k], shared by all methods
    std::vector<std::uint64_t> hash;   // [k]
  };
  std::vector<EgoOutcome> outcomes(egos.size());
  std::vector<EgoWorkspace> ws(std::max<std::size_t>(cfg.workers, 1));

  parallel_for(egos.size(), cfg.workers, [&](std::size_t i, std::size_t w) {
    const NodeId ego = egos[i];
    auto& out = outcomes[i];
    {
      // Snapshots are cumulative, so the largest evaluated one bounds them all.
      EgoView widest(series[last_eval], ego, ws[w]);
      if (widest.neighbors().size() + widest.candidate_count() > cfg.sample.two_hop_cutoff) {
        out.skipped = true;
        return;
      }
    }
    out.sum.assign(nm * nk, 0.0);
    out.cells.assign(nk, 0);
    out.hash.assign(nk, 0xcbf29ce484222325ULL);
    for (std::size_t t = 0; t <= last_eval; ++t) {
      EgoView view(series[t], ego, ws[w]);
      const std::size_t nc = view.candidate_count();
      if (nc == 0) continue;
      if (cfg.cells.require_max_k && nc < max_k) continue;
      std::vector<NodeId> formed;
      for (NodeId v : view.candidates()) {
        if (series[t + 1].has_edge(ego, v)) formed.push_back(v);
      }
      if (cfg.cells.require_formation && formed.empty()) continue;

      EgoScorer scorer(view, ws[w]);
      for (std::size_t m = 0; m < nm; ++m) {
        auto ranked = rank_candidates(scorer.score(cfg.methods[m], cfg.log_base));
        for (std::size_t k = 0; k < nk; ++k) {
          if (cfg.ks[k] > nc) continue;
          out.sum[m * nk + k] += precision_at_k(ranked, formed, cfg.ks[k]);
        }
      }
      for (std::size_t k = 0; k < nk; ++k) {
        if (cfg.ks[k] > nc) continue;
        ++out.cells[k];
        out.hash[k] = detail::fnv1a(detail::fnv1a(out.hash[k], ego), t);
      }
    }
  });

  for (const auto& o : outcomes) {
    if (o.skipped) {
      ++result.egos_skipped_cutoff;
    } else if (std::any_of(o.cells.begin(), o.cells.end(), [](auto c) { return c > 0; })) {
      ++result.egos_evaluated;
    }
  }

  for (std::size_t m = 0; m < nm; ++m) {
    for (std::size_t k = 0; k < nk; ++k) {
      std::vector<double> per_ego;
      std::size_t cells = 0;
      std::uint64_t hash = 0xcbf29ce484222325ULL;
      for (std::size_t i = 0; i < egos.size(); ++i) {
        const auto& o = outcomes[i];
        if (o.skipped || o.cells[k] == 0) continue;
        per_ego.push_back(o.sum[m * nk + k] / static_cast<double>(o.cells[k]));
        cells += o.cells[k];
        hash = detail::fnv1a(hash, o.hash[k]);
      }
      if (per_ego.empty()) continue;
      auto ms = mean_stderr(per_ego);
      result.rows.push_back({cfg.methods[m], cfg.ks[k], ms.mean, ms.std_error, cells, ms.n, hash});
    }
  }
  if (result.rows.empty()) {
    throw EmptyResultError("evaluation: no qualifying (ego, snapshot) cells (egos sampled=" +
                           std::to_string(result.egos_sampled) +
                           ", skipped by 2-hop cutoff=" + std::to_string(result.egos_skipped_cutoff) +
                           ", max K=" + std::to_string(max_k) + ")");
  }
  return result;
}

struct Improvement {
  ScoringMethod method;
  std::size_t k = 0;
  std::optional<double> percent;  // nullopt when the base rate is 0
};

/// 100 * (P@K(method) - P@K(base)) / P@K(base) for every row.
inline std::vector<Improvement> percent_improvement(const EvalResult& result, const ScoringMethod& base) {
  bool present = std::any_of(result.rows.begin(), result.rows.end(), [&](const auto& r) { return r.method == base; });
  if (!present) throw ConfigError("base", "base method '" + base.name() + "' not in result");
  std::vector<Improvement> out;
  for (const auto& r : result.rows) {
    const auto* b = result.find(base, r.k);
    Improvement imp{r.method, r.k, std::nullopt};
    if (b != nullptr && b->mean != 0.0) imp.percent = 100.0 * (r.mean - b->mean) / b->mean;
    out.push_back(imp);
  }
  return out;
}

}  // namespace pdlink
