#pragma once

// Global and personalized degree distributions with uniform log binning.

#include <cmath>
#include <cstdint>
#include <vector>

#include "pdlink/common.hpp"
#include "pdlink/ego.hpp"
#include "pdlink/graph.hpp"

namespace pdlink {

enum class DegreeKind { kGlobal, kPersonalized };

inline std::string_view to_string(DegreeKind k) { return k == DegreeKind::kGlobal ? "global" : "personalized"; }

struct DegreeSampleSet {
  DegreeKind kind = DegreeKind::kGlobal;
  DegreeMode mode = DegreeMode::kUndirected;
  std::vector<std::uint64_t> samples;
  /// True once the +1 shift has been applied (only ever when a raw sample was 0).
  bool shifted = false;
};

/// One sample per node.
inline DegreeSampleSet global_degree_samples(const SnapshotGraph& g, DegreeMode mode) {
  detail::require_mode_fits(g, mode);
  DegreeSampleSet s{DegreeKind::kGlobal, mode, {}, false};
  s.samples.reserve(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) s.samples.push_back(global_degree(g, v, mode));
  return s;
}

/// One sample per ordered (ego, neighbor) pair, egos over all nodes; an
/// undirected edge therefore contributes two samples. Per-ego tallies are
/// concatenated in ego order, so the result is independent of `workers`.
inline DegreeSampleSet personalized_degree_samples(const SnapshotGraph& g, DegreeMode mode,
                                                   std::size_t workers = 1) {
  detail::require_mode_fits(g, mode);
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::uint64_t>> per_ego(n);
  std::vector<EgoWorkspace> ws(std::max<std::size_t>(workers, 1));
  parallel_for(n, workers, [&](std::size_t ego, std::size_t w) {
    auto& mark = ws[w].side_mark;
    mark.reset(n);
    mark.mark_all(detail::personalized_ego_side(g, static_cast<NodeId>(ego), mode));
    auto& out = per_ego[ego];
    for (NodeId z : g.successors(static_cast<NodeId>(ego))) {
      std::uint64_t c = 0;
      for (NodeId x : detail::personalized_neighbor_side(g, z, mode)) c += mark.marked(x);
      out.push_back(c);
    }
  });
  DegreeSampleSet s{DegreeKind::kPersonalized, mode, {}, false};
  for (auto& v : per_ego) s.samples.insert(s.samples.end(), v.begin(), v.end());
  return s;
}

/// Applies the +1 shift iff any sample is zero.
inline DegreeSampleSet shift_for_log_scale(DegreeSampleSet s) {
  if (s.shifted) return s;
  if (std::find(s.samples.begin(), s.samples.end(), 0) != s.samples.end()) {
    for (auto& x : s.samples) ++x;
    s.shifted = true;
  }
  return s;
}

struct LogBin {
  double low = 0.0;   // inclusive
  double high = 0.0;  // exclusive, except the last bin
  double center = 0.0;
  std::size_t count = 0;
  double density = 0.0;  // count / (width * total)
};

struct BinnedDistribution {
  DegreeKind kind = DegreeKind::kGlobal;
  DegreeMode mode = DegreeMode::kUndirected;
  bool shifted = false;
  std::size_t total = 0;
  std::vector<LogBin> bins;
};

/// Geometric bin edges lo * 10^(i / bins_per_decade) spanning [min, max] of
/// the (shifted) samples. Empty bins are kept.
inline BinnedDistribution log_binned_histogram(const DegreeSampleSet& raw, int bins_per_decade = 10) {
  if (raw.samples.empty()) throw EmptyResultError("log_binned_histogram: empty sample set");
  if (bins_per_decade < 1) throw ConfigError("bins-per-decade", "must be >= 1");
  auto s = shift_for_log_scale(raw);
  auto [mn, mx] = std::minmax_element(s.samples.begin(), s.samples.end());
  const double lo = static_cast<double>(*mn);
  const double hi = static_cast<double>(*mx);
  const double b = bins_per_decade;
  auto edge = [&](std::size_t i) { return lo * std::pow(10.0, static_cast<double>(i) / b); };

  std::size_t nbins = 1;
  while (edge(nbins) < hi) ++nbins;
  std::vector<double> edges(nbins + 1);
  for (std::size_t i = 0; i <= nbins; ++i) edges[i] = edge(i);

  BinnedDistribution d{s.kind, s.mode, s.shifted, s.samples.size(), {}};
  d.bins.resize(nbins);
  for (auto x : s.samples) {
    double v = static_cast<double>(x);
    auto i = static_cast<std::size_t>(std::max(0.0, std::floor(b * std::log10(v / lo))));
    i = std::min(i, nbins - 1);
    while (i > 0 && v < edges[i]) --i;
    while (i + 1 < nbins && v >= edges[i + 1]) ++i;
    ++d.bins[i].count;
  }
  for (std::size_t i = 0; i < nbins; ++i) {
    auto& bin = d.bins[i];
    bin.low = edges[i];
    bin.high = edges[i + 1];
    bin.center = std::sqrt(bin.low * bin.high);
    bin.density = static_cast<double>(bin.count) / ((bin.high - bin.low) * static_cast<double>(d.total));
  }
  return d;
}

}  // namespace pdlink
