#pragma once

// Tabular outputs shared by the CLI: each module result maps to one Table,
// serialized as CSV or JSON.

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdlink/common.hpp"
#include "pdlink/degree_dist.hpp"
#include "pdlink/empirical.hpp"
#include "pdlink/evaluation.hpp"
#include "pdlink/graph.hpp"

namespace pdlink {

struct Table {
  std::vector<std::string> metadata;  // "key=value" entries, emitted as a leading comment row
  std::vector<std::string> header;
  std::vector<std::vector<nlohmann::json>> rows;
};

namespace detail {
inline std::string csv_cell(const nlohmann::json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return csv_quote(v.get<std::string>());
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  return v.dump();
}
}  // namespace detail

inline void write_csv(const Table& t, std::ostream& out) {
  if (!t.metadata.empty()) {
    out << '#';
    for (std::size_t i = 0; i < t.metadata.size(); ++i) out << (i ? "," : " ") << t.metadata[i];
    out << '\n';
  }
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << detail::csv_cell(row[i]);
    out << '\n';
  }
}

inline void write_json(const Table& t, std::ostream& out) {
  nlohmann::ordered_json doc;
  auto meta = nlohmann::ordered_json::object();
  for (const auto& kv : t.metadata) {
    auto eq = kv.find('=');
    meta[kv.substr(0, eq)] = eq == std::string::npos ? "" : kv.substr(eq + 1);
  }
  doc["metadata"] = meta;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.header[i]] = row[i];
    rows.push_back(obj);
  }
  doc["rows"] = rows;
  out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

inline Table snapshot_table(const SnapshotSeries& s) {
  Table t{{}, {"snapshot", "window_start", "window_end", "edges"}, {}};
  for (const auto& g : s.snapshots) {
    t.rows.push_back({g.index(), g.window_start(), g.window_end(), g.edge_count()});
  }
  return t;
}

inline Table histogram_table(const BinnedDistribution& d) {
  Table t{{"kind=" + std::string(to_string(d.kind)), "mode=" + std::string(to_string(d.mode)),
           std::string("shifted=") + (d.shifted ? "1" : "0")},
          {"bin_low", "bin_high", "bin_center", "count", "density"},
          {}};
  for (const auto& b : d.bins) t.rows.push_back({b.low, b.high, b.center, b.count, b.density});
  return t;
}

inline Table empirical_table(const EmpiricalStats& s) {
  Table t{{}, {"triad", "group", "degree_kind", "mode", "mean", "stderr", "n_egos"}, {}};
  for (const auto& r : s.rows) {
    t.rows.push_back({r.triad ? r.triad->name() : std::string(), std::string(to_string(r.group)),
                      std::string(to_string(r.kind)), std::string(to_string(r.mode)), r.mean, r.std_error,
                      r.n_egos});
  }
  return t;
}

inline Table evaluation_table(const EvalResult& r) {
  Table t{{}, {"method", "mode", "k", "mean_p_at_k", "stderr", "n_cells"}, {}};
  for (const auto& row : r.rows) {
    t.rows.push_back({row.method.method_name(), row.method.mode_name(), row.k, row.mean, row.std_error, row.n_cells});
  }
  return t;
}

inline Table improvement_table(const std::vector<Improvement>& imps) {
  Table t{{}, {"method", "mode", "k", "pct_improvement_vs_base"}, {}};
  for (const auto& i : imps) {
    t.rows.push_back({i.method.method_name(), i.method.mode_name(), i.k,
                      i.percent ? nlohmann::json(*i.percent) : nlohmann::json("NA")});
  }
  return t;
}

}  // namespace pdlink
