#pragma once

// Neighborhood link-recommendation scores for an (ego, candidate) pair:
//
//   CN     |CN(u,v)|
//   AA     sum_z 1 / log(deg_z)
//   PD-CN  sum_z log(pd_z + 2)
//   PD-AA  sum_z 1 / log(P (G-P)/G + G (G-P)/P),  P = pd_z + 1, G = deg_z + 1
//
// where z ranges over common neighbors. On directed graphs the in/out degree
// modes shift AA's degree by 2 and PD-AA's G by one more (G = deg_z + 2); the
// reciprocated mode uses the symmetrized graph's degrees.
//
// Terms are summed in sorted order so equal term multisets give bitwise equal
// scores. Logs are natural; another base rescales a method's scores by a
// single positive constant.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pdlink/common.hpp"
#include "pdlink/ego.hpp"
#include "pdlink/graph.hpp"

namespace pdlink {

enum class Method { kCN, kAA, kPDCN, kPDAA };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kCN: return "cn";
    case Method::kAA: return "aa";
    case Method::kPDCN: return "pd-cn";
    case Method::kPDAA: return "pd-aa";
  }
  return "?";
}

/// A scoring method together with its degree mode. CN carries no mode.
struct ScoringMethod {
  Method method = Method::kCN;
  DegreeMode mode = DegreeMode::kUndirected;

  std::string method_name() const { return std::string(to_string(method)); }
  std::string mode_name() const { return method == Method::kCN ? "none" : std::string(to_string(mode)); }
  /// "cn", "aa:undirected", "pd-aa:in", ...
  std::string name() const { return method == Method::kCN ? "cn" : method_name() + ":" + mode_name(); }

  friend bool operator==(const ScoringMethod& a, const ScoringMethod& b) {
    return a.method == b.method && (a.method == Method::kCN || a.mode == b.mode);
  }
};

/// Parses "cn", "aa", "pd-cn:out", ... A missing mode means undirected.
inline ScoringMethod parse_scoring_method(std::string_view s) {
  auto colon = s.find(':');
  std::string_view head = s.substr(0, colon);
  ScoringMethod m;
  if (head == "cn") {
    m.method = Method::kCN;
  } else if (head == "aa") {
    m.method = Method::kAA;
  } else if (head == "pd-cn" || head == "pdcn") {
    m.method = Method::kPDCN;
  } else if (head == "pd-aa" || head == "pdaa") {
    m.method = Method::kPDAA;
  } else {
    throw ConfigError("methods", "unknown method '" + std::string(s) + "'");
  }
  if (colon != std::string_view::npos) {
    auto tail = s.substr(colon + 1);
    if (m.method == Method::kCN && tail != "none") {
      throw ConfigError("methods", "cn takes no degree mode");
    }
    if (m.method != Method::kCN) m.mode = parse_degree_mode(tail);
  }
  return m;
}

/// Every method in every degree mode admissible on the graph kind.
inline std::vector<ScoringMethod> all_scoring_methods(bool directed) {
  std::vector<ScoringMethod> out{{Method::kCN, DegreeMode::kUndirected}};
  std::vector<DegreeMode> modes{DegreeMode::kUndirected};
  if (directed) {
    modes.push_back(DegreeMode::kIn);
    modes.push_back(DegreeMode::kOut);
  }
  for (Method m : {Method::kAA, Method::kPDCN, Method::kPDAA}) {
    for (DegreeMode d : modes) out.push_back({m, d});
  }
  return out;
}

namespace detail {

inline bool directional(const SnapshotGraph& g, DegreeMode mode) {
  return g.directed() && mode != DegreeMode::kUndirected;
}

inline double aa_term(std::size_t degree, bool directional) {
  double eff = static_cast<double>(degree) + (directional ? 2.0 : 0.0);
  double l = std::log(eff);
  if (!(l > 0.0)) throw std::logic_error("AA: effective degree must exceed 1");
  return 1.0 / l;
}

inline double pdaa_bracket(double p, double g) { return p * (g - p) / g + g * (g - p) / p; }

inline double pdaa_term(std::size_t pd, std::size_t degree, bool directional) {
  double p = static_cast<double>(pd) + 1.0;
  double g = static_cast<double>(degree) + (directional ? 2.0 : 1.0);
  double bracket = pdaa_bracket(p, g);
  if (!(bracket > 1.0)) throw std::logic_error("PD-AA: bracket must exceed 1");
  return 1.0 / std::log(bracket);
}

inline double sum_sorted(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

/// sum_i log(factors_i). Factors are multiplied exactly while the product
/// stays below 2^53 so that equal products give equal results.
inline double log_of_product(std::vector<std::uint64_t>& factors) {
  std::sort(factors.begin(), factors.end());
  constexpr double kExact = 9007199254740992.0;  // 2^53
  double total = 0.0;
  double prod = 1.0;
  for (auto f : factors) {
    double x = static_cast<double>(f);
    if (prod * x >= kExact) {
      total += std::log(prod);
      prod = 1.0;
    }
    prod *= x;
  }
  return total + std::log(prod);
}

/// Rescales a natural-log score to another base.
inline double rebase(Method m, double natural_score, double log_base) {
  if (log_base == std::numbers::e || m == Method::kCN) return natural_score;
  if (!(log_base > 0.0) || log_base == 1.0) throw ConfigError("log-base", "log base must be positive and != 1");
  double ln_b = std::log(log_base);
  // log_b x = ln x / ln b. CN-style sums of logs divide, inverse-log sums multiply.
  return m == Method::kPDCN ? natural_score / ln_b : natural_score * ln_b;
}

inline void require_candidate(const SnapshotGraph& g, NodeId ego, NodeId v, const std::vector<NodeId>& cn) {
  if (v == ego || sorted_contains(g.successors(ego), v) || cn.empty()) {
    throw PreconditionError("node " + std::to_string(v) + " is not a 2-hop candidate of ego " + std::to_string(ego));
  }
}

}  // namespace detail

/// Score of candidate v for the ego. Throws PreconditionError unless v is a
/// 2-hop candidate.
inline double score_pair(const SnapshotGraph& g, NodeId ego, NodeId v, ScoringMethod sm,
                         double log_base = std::numbers::e) {
  if (sm.method != Method::kCN) detail::require_mode_fits(g, sm.mode);
  auto cn = common_neighbors(g, ego, v);
  detail::require_candidate(g, ego, v, cn);
  const bool dir = detail::directional(g, sm.mode);
  double s = 0.0;
  switch (sm.method) {
    case Method::kCN:
      s = static_cast<double>(cn.size());
      break;
    case Method::kAA: {
      std::vector<double> terms;
      for (NodeId z : cn) terms.push_back(detail::aa_term(global_degree(g, z, sm.mode), dir));
      s = detail::sum_sorted(terms);
      break;
    }
    case Method::kPDCN: {
      std::vector<std::uint64_t> factors;
      for (NodeId z : cn) factors.push_back(detail::personalized_degree_unchecked(g, ego, z, sm.mode) + 2);
      s = detail::log_of_product(factors);
      break;
    }
    case Method::kPDAA: {
      std::vector<double> terms;
      for (NodeId z : cn) {
        terms.push_back(detail::pdaa_term(detail::personalized_degree_unchecked(g, ego, z, sm.mode),
                                          global_degree(g, z, sm.mode), dir));
      }
      s = detail::sum_sorted(terms);
      break;
    }
  }
  return detail::rebase(sm.method, s, log_base);
}

inline double score_cn(const SnapshotGraph& g, NodeId ego, NodeId v) {
  return score_pair(g, ego, v, {Method::kCN, DegreeMode::kUndirected});
}
inline double score_aa(const SnapshotGraph& g, NodeId ego, NodeId v, DegreeMode mode = DegreeMode::kUndirected) {
  return score_pair(g, ego, v, {Method::kAA, mode});
}
inline double score_pdcn(const SnapshotGraph& g, NodeId ego, NodeId v, DegreeMode mode = DegreeMode::kUndirected) {
  return score_pair(g, ego, v, {Method::kPDCN, mode});
}
inline double score_pdaa(const SnapshotGraph& g, NodeId ego, NodeId v, DegreeMode mode = DegreeMode::kUndirected) {
  return score_pair(g, ego, v, {Method::kPDAA, mode});
}

// ---------------------------------------------------------------------------

struct ScoreEntry {
  NodeId candidate = 0;
  double score = 0.0;
};

/// Scores of every candidate of one ego under one method.
struct ScoreTable {
  NodeId ego = 0;
  ScoringMethod method;
  std::vector<ScoreEntry> entries;
};

/// Scores all candidates of an EgoView; personalized degrees are computed
/// once per neighbor and cached per mode.
class EgoScorer {
 public:
  EgoScorer(const EgoView& view, EgoWorkspace& ws) : view_(&view), ws_(&ws) {}

  ScoreTable score(ScoringMethod sm, double log_base = std::numbers::e) {
    const auto& v = *view_;
    const auto& g = v.graph();
    if (sm.method != Method::kCN) detail::require_mode_fits(g, sm.mode);
    const bool dir = detail::directional(g, sm.mode);
    ScoreTable t{v.ego(), sm, {}};
    t.entries.reserve(v.candidate_count());
    const std::vector<std::uint32_t>* pd = nullptr;
    if (sm.method == Method::kPDCN || sm.method == Method::kPDAA) pd = &personalized(sm.mode);
    auto nb = v.neighbors();
    std::vector<double> terms;
    std::vector<std::uint64_t> factors;
    for (std::size_t ci = 0; ci < v.candidate_count(); ++ci) {
      auto slots = v.common_neighbor_slots(ci);
      double s = 0.0;
      switch (sm.method) {
        case Method::kCN:
          s = static_cast<double>(slots.size());
          break;
        case Method::kAA:
          terms.clear();
          for (auto i : slots) terms.push_back(detail::aa_term(global_degree(g, nb[i], sm.mode), dir));
          s = detail::sum_sorted(terms);
          break;
        case Method::kPDCN:
          factors.clear();
          for (auto i : slots) factors.push_back(std::uint64_t{(*pd)[i]} + 2);
          s = detail::log_of_product(factors);
          break;
        case Method::kPDAA:
          terms.clear();
          for (auto i : slots) terms.push_back(detail::pdaa_term((*pd)[i], global_degree(g, nb[i], sm.mode), dir));
          s = detail::sum_sorted(terms);
          break;
      }
      t.entries.push_back({v.candidates()[ci], detail::rebase(sm.method, s, log_base)});
    }
    return t;
  }

  const std::vector<std::uint32_t>& personalized(DegreeMode mode) {
    auto& slot = pd_cache_[static_cast<int>(mode)];
    if (!slot) slot = view_->personalized_degrees(mode, *ws_);
    return *slot;
  }

 private:
  const EgoView* view_;
  EgoWorkspace* ws_;
  std::array<std::optional<std::vector<std::uint32_t>>, 3> pd_cache_;
};

}  // namespace pdlink
