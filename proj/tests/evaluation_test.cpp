#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <map>
#include <numeric>

#include "oracle.hpp"
#include "pdlink/evaluation.hpp"
#include "pdlink/generators.hpp"

using namespace pdlink;

namespace {

const ScoringMethod kCn{Method::kCN, DegreeMode::kUndirected};
const ScoringMethod kPdcn{Method::kPDCN, DegreeMode::kUndirected};

SnapshotSeries series_of(std::size_t n, bool directed, std::vector<TemporalEdge> es) {
  return build_snapshots(oracle::as_list(n, directed, std::move(es)), SnapshotPolicy::preassigned());
}

ScoreTable table_of(std::vector<std::pair<NodeId, double>> xs) {
  ScoreTable t{0, kCn, {}};
  for (auto [v, s] : xs) t.entries.push_back({v, s});
  return t;
}

RankedList ranked_of(std::vector<NodeId> order) { return {0, kCn, std::move(order)}; }

// Directed fixture: ego 0 follows 1, 2, 3. Candidates 4..9 have CN scores
// 3, 2, 2, 1, 1, 1. At t=1 the ego follows 5 and 9.
std::vector<TemporalEdge> six_candidate_edges() {
  return {{0, 1, 0}, {0, 2, 0}, {0, 3, 0}, {1, 4, 0}, {2, 4, 0}, {3, 4, 0}, {1, 5, 0}, {2, 5, 0},
          {1, 6, 0}, {2, 6, 0}, {1, 7, 0}, {2, 8, 0}, {3, 9, 0}, {0, 5, 1}, {0, 9, 1}};
}

SnapshotSeries planted(Method m, std::size_t nodes, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kPlantedScorer;
  spec.planted = {m, DegreeMode::kUndirected};
  spec.nodes = nodes;
  spec.snapshots = 3;
  spec.attachment = 8;
  spec.triad_probability = 0.2;
  spec.seed = seed;
  return build_snapshots(generate(spec), SnapshotPolicy::fixed_count(3));
}

}  // namespace

TEST(Rank, Examples) {
  EXPECT_EQ(rank_candidates(table_of({{3, 1.0}, {1, 2.0}})).order, (std::vector<NodeId>{1, 3}));
  EXPECT_EQ(rank_candidates(table_of({{7, 1.0}, {2, 1.0}, {5, 1.0}})).order, (std::vector<NodeId>{2, 5, 7}));
}

TEST(Rank, MatchesReferenceSort) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<NodeId, double>> xs;
    std::vector<NodeId> ids(100);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    for (NodeId v : ids) xs.push_back({v, static_cast<double>(rng() % 20)});
    // Reference: by id, then stable by descending score.
    auto ref = xs;
    std::sort(ref.begin(), ref.end());
    std::stable_sort(ref.begin(), ref.end(), [](auto a, auto b) { return a.second > b.second; });
    std::vector<NodeId> want;
    for (auto& p : ref) want.push_back(p.first);
    EXPECT_EQ(rank_candidates(table_of(xs)).order, want);
  }
}

TEST(PrecisionAtK, Examples) {
  std::vector<NodeId> formed{2, 9};
  EXPECT_DOUBLE_EQ(precision_at_k(ranked_of({2, 4, 9, 1}), formed, 3), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(precision_at_k(ranked_of({2, 4, 9, 1}), {}, 3), 0.0);
  EXPECT_DOUBLE_EQ(precision_at_k(ranked_of({9, 2, 4}), formed, 2), 1.0);
  EXPECT_THROW(precision_at_k(ranked_of({1, 2}), formed, 3), PreconditionError);
  EXPECT_THROW(precision_at_k(ranked_of({1, 2}), formed, 0), PreconditionError);
}

TEST(Evaluate, SixCandidateFixture) {
  auto s = series_of(10, true, six_candidate_edges());
  EvalConfig cfg;
  cfg.methods = {kCn};
  cfg.ks = {1, 3, 5};
  auto r = evaluate_methods(s, cfg);
  EXPECT_EQ(r.egos_evaluated, 1u);
  // Ranking 4, 5, 6, 7, 8, 9; formed {5, 9}.
  EXPECT_DOUBLE_EQ(r.find(kCn, 1)->mean, 0.0);
  EXPECT_DOUBLE_EQ(r.find(kCn, 3)->mean, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.find(kCn, 5)->mean, 1.0 / 5.0);
  EXPECT_EQ(r.find(kCn, 5)->n_cells, 1u);
  EXPECT_EQ(r.find(kCn, 5)->std_error, 0.0);
}

TEST(Evaluate, AllTiesGiveLowestIdBaseRate) {
  // Every candidate has exactly one common neighbor.
  std::vector<TemporalEdge> es{{0, 1, 0}, {1, 2, 0}, {1, 3, 0}, {1, 4, 0}, {1, 5, 0}, {1, 6, 0}, {0, 3, 1}, {0, 6, 1}};
  auto s = series_of(7, true, es);
  EvalConfig cfg;
  cfg.methods = {kCn};
  cfg.ks = {2, 4, 5};
  auto r = evaluate_methods(s, cfg);
  // Ranking 2, 3, 4, 5, 6; formed {3, 6}.
  EXPECT_DOUBLE_EQ(r.find(kCn, 2)->mean, 1.0 / 2.0);
  EXPECT_DOUBLE_EQ(r.find(kCn, 4)->mean, 1.0 / 4.0);
  EXPECT_DOUBLE_EQ(r.find(kCn, 5)->mean, 2.0 / 5.0);
}

TEST(Evaluate, Errors) {
  auto one = series_of(3, false, {{0, 1, 0}, {1, 2, 0}});
  EvalConfig cfg;
  cfg.methods = {kCn};
  EXPECT_THROW(evaluate_methods(one, cfg), ConfigError);
  auto two = series_of(3, false, {{0, 1, 0}, {1, 2, 0}, {0, 2, 1}});
  cfg.ks = {5, 3};
  EXPECT_THROW(evaluate_methods(two, cfg), ConfigError);
  cfg.ks = {10};
  EXPECT_THROW(evaluate_methods(two, cfg), EmptyResultError);
  cfg.ks = {1};
  cfg.methods = {{Method::kAA, DegreeMode::kOut}};
  EXPECT_THROW(evaluate_methods(two, cfg), ConfigError);
}

TEST(Evaluate, PerKCellRule) {
  auto s = series_of(10, true, six_candidate_edges());
  EvalConfig cfg;
  cfg.methods = {kCn};
  cfg.ks = {3, 10};
  EXPECT_THROW(evaluate_methods(s, cfg), EmptyResultError);
  cfg.cells.require_max_k = false;
  auto r = evaluate_methods(s, cfg);
  EXPECT_DOUBLE_EQ(r.find(kCn, 3)->mean, 1.0 / 3.0);
  EXPECT_EQ(r.find(kCn, 10), nullptr);
}

TEST(Evaluate, SamplingIsSeededAndSorted) {
  auto s = planted(Method::kPDCN, 300, 1);
  EgoSampleSpec spec{50, 77, 100000};
  auto a = sample_egos(s, spec);
  auto b = sample_egos(s, spec);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 50u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  spec.seed = 78;
  EXPECT_NE(sample_egos(s, spec), a);
}

TEST(Evaluate, TwoHopCutoffSkips) {
  auto s = planted(Method::kPDCN, 300, 1);
  EvalConfig cfg;
  cfg.methods = {kCn};
  cfg.ks = {1};
  std::vector<std::size_t> reach;
  for (NodeId ego : sample_egos(s, cfg.sample)) {
    EgoView view(s[s.size() - 2], ego);
    reach.push_back(view.neighbors().size() + view.candidate_count());
  }
  auto sorted = reach;
  std::sort(sorted.begin(), sorted.end());
  cfg.sample.two_hop_cutoff = sorted[sorted.size() / 2];
  auto over = std::count_if(reach.begin(), reach.end(), [&](auto x) { return x > cfg.sample.two_hop_cutoff; });
  auto r = evaluate_methods(s, cfg);
  EXPECT_GT(over, 0);
  EXPECT_EQ(r.egos_skipped_cutoff, static_cast<std::size_t>(over));
}

// ---------------------------------------------------------------------------

TEST(EvaluationProperties, MatchesBruteForce) {
  for (bool directed : {false, true}) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      const std::size_t n = 12;
      auto es = oracle::random_edges(n, directed, 0.25, seed, 2);
      auto s = series_of(n, directed, es);
      if (s.size() < 2) continue;
      std::vector<oracle::Graph> gs;
      for (std::size_t t = 0; t < s.size(); ++t) {
        std::vector<TemporalEdge> upto;
        for (const auto& e : es) {
          if (e.time <= static_cast<std::int64_t>(t)) upto.push_back(e);
        }
        gs.push_back(oracle::from_edges(n, directed, upto));
      }
      EvalConfig cfg;
      cfg.methods = all_scoring_methods(directed);
      cfg.ks = {1, 2, 3};
      cfg.cells.require_max_k = false;
      std::optional<EvalResult> got;
      try {
        got = evaluate_methods(s, cfg);
      } catch (const EmptyResultError&) {
      }
      for (const auto& sm : cfg.methods) {
        for (std::size_t k : cfg.ks) {
          std::vector<double> per_ego;
          for (NodeId ego = 0; ego < n; ++ego) {
            if (gs[0].sym(ego).empty()) continue;
            double sum = 0;
            int cells = 0;
            for (std::size_t t = 0; t + 1 < s.size(); ++t) {
              auto cands = oracle::candidates(gs[t], ego);
              if (cands.size() < k) continue;
              std::vector<std::pair<double, NodeId>> scored;
              bool any = false;
              for (NodeId v : cands) {
                double sc = 0;
                auto m = sm.mode == DegreeMode::kIn    ? oracle::Mode::kIn
                         : sm.mode == DegreeMode::kOut ? oracle::Mode::kOut
                                                       : oracle::Mode::kUndirected;
                if (sm.method == Method::kCN) sc = oracle::cn(gs[t], ego, v);
                if (sm.method == Method::kAA) sc = oracle::aa(gs[t], ego, v, m);
                if (sm.method == Method::kPDCN) sc = oracle::pdcn(gs[t], ego, v, m);
                if (sm.method == Method::kPDAA) sc = oracle::pdaa(gs[t], ego, v, m);
                scored.push_back({-sc, v});
                any = any || gs[t + 1].has(ego, v);
              }
              if (!any) continue;
              std::sort(scored.begin(), scored.end(), [](auto a, auto b) {
                if (std::abs(a.first - b.first) > 1e-9) return a.first < b.first;
                return a.second < b.second;
              });
              int hits = 0;
              for (std::size_t i = 0; i < k; ++i) hits += gs[t + 1].has(ego, scored[i].second);
              sum += static_cast<double>(hits) / k;
              ++cells;
            }
            if (cells > 0) per_ego.push_back(sum / cells);
          }
          const EvalRow* row = got ? got->find(sm, k) : nullptr;
          if (per_ego.empty()) {
            EXPECT_EQ(row, nullptr);
            continue;
          }
          ASSERT_NE(row, nullptr) << sm.name() << " k=" << k;
          double mean = std::accumulate(per_ego.begin(), per_ego.end(), 0.0) / per_ego.size();
          EXPECT_NEAR(row->mean, mean, 1e-12) << sm.name() << " k=" << k << " seed " << seed;
          EXPECT_EQ(row->n_egos, per_ego.size());
          EXPECT_GE(row->mean, 0.0);
          EXPECT_LE(row->mean, 1.0);
        }
      }
    }
  }
}

TEST(EvaluationProperties, DeterministicAcrossWorkers) {
  auto s = planted(Method::kPDCN, 400, 4);
  EvalConfig cfg;
  cfg.methods = all_scoring_methods(false);
  cfg.ks = {1, 5, 10};
  cfg.workers = 1;
  auto a = evaluate_methods(s, cfg);
  cfg.workers = 6;
  auto b = evaluate_methods(s, cfg);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(std::memcmp(&a.rows[i].mean, &b.rows[i].mean, sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(&a.rows[i].std_error, &b.rows[i].std_error, sizeof(double)), 0);
    EXPECT_EQ(a.rows[i].cell_hash, b.rows[i].cell_hash);
  }
}

TEST(EvaluationProperties, SameCellsForEveryMethod) {
  auto s = planted(Method::kPDCN, 400, 4);
  EvalConfig cfg;
  cfg.methods = all_scoring_methods(false);
  cfg.ks = {1, 5, 10};
  auto r = evaluate_methods(s, cfg);
  for (std::size_t k : cfg.ks) {
    auto ref = r.find(kCn, k);
    for (const auto& sm : cfg.methods) {
      EXPECT_EQ(r.find(sm, k)->cell_hash, ref->cell_hash);
      EXPECT_EQ(r.find(sm, k)->n_cells, ref->n_cells);
    }
  }
}

TEST(EvaluationProperties, ScoreScaleInvariance) {
  auto s = planted(Method::kAA, 300, 6);
  EvalConfig cfg;
  cfg.methods = all_scoring_methods(false);
  cfg.ks = {1, 5, 10};
  auto a = evaluate_methods(s, cfg);
  cfg.log_base = 10.0;
  auto b = evaluate_methods(s, cfg);
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].mean, b.rows[i].mean);
}

TEST(EvaluationProperties, PdcnPlantedFavorsPdcn) {
  auto s = planted(Method::kPDCN, 1000, 1);
  EvalConfig cfg;
  cfg.methods = {kCn, kPdcn};
  cfg.ks = {10};
  auto r = evaluate_methods(s, cfg);
  EXPECT_GT(r.find(kPdcn, 10)->mean, r.find(kCn, 10)->mean);
}

// ---------------------------------------------------------------------------

TEST(Improvement, Examples) {
  EvalResult r;
  r.rows.push_back({kCn, 10, 0.20, 0, 1, 1, 0});
  r.rows.push_back({kPdcn, 10, 0.22, 0, 1, 1, 0});
  r.rows.push_back({kCn, 20, 0.0, 0, 1, 1, 0});
  r.rows.push_back({kPdcn, 20, 0.1, 0, 1, 1, 0});
  auto imp = percent_improvement(r, kCn);
  ASSERT_EQ(imp.size(), 4u);
  EXPECT_DOUBLE_EQ(*imp[0].percent, 0.0);
  EXPECT_NEAR(*imp[1].percent, 10.0, 1e-12);
  EXPECT_FALSE(imp[2].percent.has_value());
  EXPECT_FALSE(imp[3].percent.has_value());
  EXPECT_THROW(percent_improvement(r, {Method::kAA, DegreeMode::kUndirected}), ConfigError);
}

TEST(Improvement, FullTableRecomputation) {
  auto s = planted(Method::kPDCN, 400, 2);
  EvalConfig cfg;
  cfg.methods = all_scoring_methods(false);
  auto r = evaluate_methods(s, cfg);
  auto imp = percent_improvement(r, kCn);
  ASSERT_EQ(imp.size(), r.rows.size());
  for (const auto& i : imp) {
    double m = r.find(i.method, i.k)->mean;
    double b = r.find(kCn, i.k)->mean;
    ASSERT_TRUE(i.percent.has_value());
    EXPECT_NEAR(*i.percent, (m - b) / b * 100.0, 1e-9);
  }
}
