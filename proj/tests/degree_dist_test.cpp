#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracle.hpp"
#include "pdlink/degree_dist.hpp"
#include "pdlink/generators.hpp"

using namespace pdlink;

namespace {

DegreeSampleSet samples_of(std::vector<std::uint64_t> xs) {
  return {DegreeKind::kPersonalized, DegreeMode::kUndirected, std::move(xs), false};
}

std::size_t mass(const BinnedDistribution& d) {
  std::size_t m = 0;
  for (const auto& b : d.bins) m += b.count;
  return m;
}

// Independent binning: linear scan over edges lo*10^(i/b).
std::vector<std::size_t> brute_bins(std::vector<std::uint64_t> xs, int b) {
  bool zero = std::find(xs.begin(), xs.end(), 0) != xs.end();
  if (zero) {
    for (auto& x : xs) ++x;
  }
  double lo = static_cast<double>(*std::min_element(xs.begin(), xs.end()));
  double hi = static_cast<double>(*std::max_element(xs.begin(), xs.end()));
  std::vector<double> edges{lo};
  while (edges.size() < 2 || edges.back() < hi) {
    edges.push_back(lo * std::pow(10.0, static_cast<double>(edges.size()) / b));
  }
  std::vector<std::size_t> counts(edges.size() - 1, 0);
  for (auto x : xs) {
    double v = static_cast<double>(x);
    std::size_t i = 0;
    while (i + 1 < counts.size() && v >= edges[i + 1]) ++i;
    ++counts[i];
  }
  return counts;
}

}  // namespace

TEST(PersonalizedSamples, StarAllZero) {
  std::vector<TemporalEdge> es;
  for (NodeId l = 1; l <= 6; ++l) es.push_back({0, l, 0});
  SnapshotGraph g(7, es, false, 0);
  auto s = personalized_degree_samples(g, DegreeMode::kUndirected);
  EXPECT_EQ(s.samples.size(), 12u);
  EXPECT_TRUE(std::all_of(s.samples.begin(), s.samples.end(), [](auto x) { return x == 0; }));
}

TEST(PersonalizedSamples, CompleteGraphOfFour) {
  std::vector<TemporalEdge> es;
  for (NodeId a = 0; a < 4; ++a) {
    for (NodeId b = a + 1; b < 4; ++b) es.push_back({a, b, 0});
  }
  SnapshotGraph g(4, es, false, 0);
  auto s = personalized_degree_samples(g, DegreeMode::kUndirected);
  EXPECT_EQ(s.samples, std::vector<std::uint64_t>(12, 2));
}

TEST(PersonalizedSamples, MatchPairwiseOracle) {
  for (bool directed : {false, true}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto es = oracle::random_edges(15, directed, 0.3, seed);
      auto ref = oracle::from_edges(15, directed, es);
      SnapshotGraph g(15, es, directed, 0);
      std::vector<std::pair<DegreeMode, oracle::Mode>> modes{{DegreeMode::kUndirected, oracle::Mode::kUndirected}};
      if (directed) {
        modes.push_back({DegreeMode::kIn, oracle::Mode::kIn});
        modes.push_back({DegreeMode::kOut, oracle::Mode::kOut});
      }
      for (auto [m, om] : modes) {
        std::vector<std::uint64_t> want;
        for (NodeId e = 0; e < 15; ++e) {
          for (NodeId z : ref.succ(e)) want.push_back(oracle::personalized(ref, e, z, om));
        }
        EXPECT_EQ(personalized_degree_samples(g, m, 1).samples, want);
        EXPECT_EQ(personalized_degree_samples(g, m, 4).samples, want);
        std::vector<std::uint64_t> glob;
        for (NodeId v = 0; v < 15; ++v) glob.push_back(oracle::degree(ref, v, om));
        EXPECT_EQ(global_degree_samples(g, m).samples, glob);
      }
    }
  }
}

TEST(LogBins, EqualSamplesFillOneBin) {
  auto d = log_binned_histogram(samples_of({5, 5, 5, 5}));
  std::size_t occupied = 0;
  for (const auto& b : d.bins) occupied += b.count > 0;
  EXPECT_EQ(occupied, 1u);
  EXPECT_EQ(mass(d), 4u);
  EXPECT_FALSE(d.shifted);
}

TEST(LogBins, ShiftAppliedOnlyWithZeros) {
  auto d = log_binned_histogram(samples_of({0, 1, 3}), 10);
  EXPECT_TRUE(d.shifted);
  EXPECT_DOUBLE_EQ(d.bins.front().low, 1.0);
  EXPECT_GE(d.bins.back().high, 4.0);
  auto same = log_binned_histogram(samples_of({1, 2, 4}), 10);
  EXPECT_FALSE(same.shifted);
  ASSERT_EQ(d.bins.size(), same.bins.size());
  for (std::size_t i = 0; i < d.bins.size(); ++i) EXPECT_EQ(d.bins[i].count, same.bins[i].count);
}

TEST(LogBins, Errors) {
  EXPECT_THROW(log_binned_histogram(samples_of({})), EmptyResultError);
  EXPECT_THROW(log_binned_histogram(samples_of({1}), 0), ConfigError);
}

TEST(LogBins, PowerLawMatchesBruteForce) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::uint64_t> xs;
  for (int i = 0; i < 10000; ++i) xs.push_back(static_cast<std::uint64_t>(std::floor(std::pow(1.0 - u(rng), -1.0 / 1.5))) - 1);
  for (int b : {1, 3, 10, 20}) {
    auto d = log_binned_histogram(samples_of(xs), b);
    auto want = brute_bins(xs, b);
    ASSERT_EQ(d.bins.size(), want.size()) << b;
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(d.bins[i].count, want[i]) << "b=" << b << " bin " << i;
    EXPECT_EQ(mass(d), xs.size());
    for (std::size_t i = 0; i < d.bins.size(); ++i) {
      EXPECT_LT(d.bins[i].low, d.bins[i].high);
      EXPECT_NEAR(d.bins[i].center, std::sqrt(d.bins[i].low * d.bins[i].high), 1e-9);
      if (i > 0) EXPECT_DOUBLE_EQ(d.bins[i].low, d.bins[i - 1].high);
      double width = d.bins[i].high - d.bins[i].low;
      EXPECT_NEAR(d.bins[i].density, d.bins[i].count / (width * xs.size()), 1e-15);
    }
  }
}

TEST(LogBins, MassConservedOnRandomInputs) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint64_t> xs(1 + rng() % 300);
    for (auto& x : xs) x = rng() % (1 + rng() % 5000);
    for (int b : {1, 2, 5, 10, 33}) {
      auto d = log_binned_histogram(samples_of(xs), b);
      EXPECT_EQ(mass(d), xs.size());
      auto s = shift_for_log_scale(samples_of(xs));
      EXPECT_LE(d.bins.front().low, static_cast<double>(*std::min_element(s.samples.begin(), s.samples.end())));
      EXPECT_GE(d.bins.back().high, static_cast<double>(*std::max_element(s.samples.begin(), s.samples.end())));
    }
  }
}

TEST(DegreeDistProperties, PersonalizedTailLighterThanGlobal) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kPreferentialAttachment;
  spec.nodes = 3000;
  spec.attachment = 4;
  spec.seed = 5;
  auto list = generate(spec);
  SnapshotGraph g(list.node_count(), list.edges, false, 0);
  auto glob = global_degree_samples(g, DegreeMode::kUndirected).samples;
  auto pers = personalized_degree_samples(g, DegreeMode::kUndirected).samples;
  auto gmax = *std::max_element(glob.begin(), glob.end());
  auto pmax = *std::max_element(pers.begin(), pers.end());
  EXPECT_LT(pmax, gmax);
  auto sorted = glob;
  std::sort(sorted.begin(), sorted.end());
  auto p99 = sorted[static_cast<std::size_t>(0.99 * (sorted.size() - 1))];
  auto frac = [&](const std::vector<std::uint64_t>& xs) {
    return static_cast<double>(std::count_if(xs.begin(), xs.end(), [&](auto x) { return x > p99; })) / xs.size();
  };
  EXPECT_LT(frac(pers), frac(glob));
}
