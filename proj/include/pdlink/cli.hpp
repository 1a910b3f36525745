#pragma once

// Command-line front end. Every flag has a same-named key in the flat
// `key=value` config file passed with --config; flags win over the file.
// PDLINK_OUTPUT_DIR overrides the file's output-dir but not the flag.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdlink/degree_dist.hpp"
#include "pdlink/empirical.hpp"
#include "pdlink/evaluation.hpp"
#include "pdlink/generators.hpp"
#include "pdlink/graph.hpp"
#include "pdlink/scorers.hpp"
#include "pdlink/table.hpp"

namespace pdlink::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kOutputDirEnv = "PDLINK_OUTPUT_DIR";

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"ingest",    "snapshots", "degree-dist", "empirical",
                                          "recommend", "evaluate",  "generate"};
  return c;
}

struct RunConfig {
  std::string command;
  std::string input;
  bool directed = false;
  std::string delimiter = "auto";
  std::string time_mode = "timestamp";
  bool drop_zero_out = false;
  double window_days = 90.0;
  std::size_t snapshot_count = 0;  // > 0 selects equal-width windows
  std::size_t ego_sample = 0;
  std::uint64_t seed = 1;
  std::size_t two_hop_cutoff = 100000;
  std::vector<std::size_t> ks{1, 3, 5, 10, 20, 30, 50};
  std::vector<std::string> methods;  // empty = every applicable method
  std::string base = "cn";
  std::string output_dir = ".";
  std::string format = "csv";
  std::size_t workers = default_workers();
  std::string analysis = "undirected";
  std::vector<std::string> degree_modes;  // empty = mode-dependent default
  std::string ego;
  long snapshot = -1;  // -1 = last
  int bins_per_decade = 10;
  bool require_max_k = true;
  bool require_formation = true;
  double log_base = std::numbers::e;
  // generate
  std::string gen_kind = "planted";
  std::size_t nodes = 1000;
  double density = 0.01;
  std::size_t attachment = 4;
  double triad_prob = 0.5;
  std::string planted = "pd-cn";
  std::size_t gen_snapshots = 3;
  double formation_rate = 0.05;
};

/// --help / --version was requested; `text` is what to print.
struct HelpRequested {
  std::string text;
};

namespace detail {

inline void build_app(CLI::App& app, RunConfig& c) {
  app.add_option("command", c.command, "Subcommand")->required()->check(CLI::IsMember(commands()));
  app.set_config("--config", "", "Flat key=value config file");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_version_flag("--version", std::string("pdlink ") + kVersion);

  app.add_option("--input", c.input, "Edge list: <src> <dst> <time> per line");
  app.add_flag("--directed,!--undirected", c.directed, "Treat edges as directed");
  app.add_option("--delimiter", c.delimiter, "auto|space|tab|comma")
      ->check(CLI::IsMember({"auto", "space", "tab", "comma"}));
  app.add_option("--time-mode", c.time_mode, "timestamp|index (index = pre-assigned snapshot)")
      ->check(CLI::IsMember({"timestamp", "index"}));
  app.add_flag("--drop-zero-out", c.drop_zero_out, "Drop nodes with out-degree zero");
  app.add_option("--window-days", c.window_days, "Snapshot window length in days");
  app.add_option("--snapshot-count", c.snapshot_count, "Split the time span into this many equal windows");
  app.add_option("--ego-sample", c.ego_sample, "Number of sampled egos (0 = all)");
  app.add_option("--seed", c.seed, "Seed for every random choice");
  app.add_option("--two-hop-cutoff", c.two_hop_cutoff, "Skip egos with more nodes within 2 hops");
  app.add_option("--k", c.ks, "Comma-separated ascending K list")->delimiter(',');
  app.add_option("--methods,--method", c.methods, "Comma-separated methods, e.g. cn,aa:in,pd-cn:out")
      ->delimiter(',');
  app.add_option("--base", c.base, "Base method for percent improvement");
  app.add_option("--output-dir", c.output_dir, "Directory for outputs");
  app.add_option("--format", c.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", c.workers, "Worker threads");
  app.add_option("--analysis", c.analysis, "undirected|per-triad")->check(CLI::IsMember({"undirected", "per-triad"}));
  app.add_option("--degree-modes", c.degree_modes, "Comma-separated subset of undirected,in,out")->delimiter(',');
  app.add_option("--ego", c.ego, "Ego label for recommend");
  app.add_option("--snapshot", c.snapshot, "Snapshot index for recommend/degree-dist (-1 = last)");
  app.add_option("--bins-per-decade", c.bins_per_decade, "Log bins per decade");
  app.add_flag("--require-max-k,!--per-k-cells", c.require_max_k,
               "Cells need >= max(K) candidates (otherwise qualify per K)");
  app.add_flag("--require-formation,!--allow-no-formation", c.require_formation,
               "Cells need at least one formed link");
  app.add_option("--log-base", c.log_base, "Logarithm base for AA/PD-CN/PD-AA");
  app.add_option("--gen-kind", c.gen_kind, "uniform|pa|planted")->check(CLI::IsMember({"uniform", "pa", "planted"}));
  app.add_option("--nodes", c.nodes, "Generator node count");
  app.add_option("--density", c.density, "Uniform generator edge probability");
  app.add_option("--attachment", c.attachment, "Edges per arriving node");
  app.add_option("--triad-prob", c.triad_prob, "Triangle-closing attachment probability");
  app.add_option("--planted", c.planted, "Planted method for the planted generator");
  app.add_option("--gen-snapshots", c.gen_snapshots, "Generator snapshot count");
  app.add_option("--formation-rate", c.formation_rate, "Planted formation rate");
}

inline bool flag_given(int argc, const char* const* argv, std::string_view flag) {
  for (int i = 1; i < argc; ++i) {
    std::string_view a = argv[i];
    if (a == flag || (a.starts_with(flag) && a.size() > flag.size() && a[flag.size()] == '=')) return true;
  }
  return false;
}

inline void validate(const RunConfig& c) {
  if (c.command != "generate") {
    if (c.input.empty()) throw ConfigError("input", "an input edge list is required");
    if (!std::filesystem::is_regular_file(c.input)) throw ConfigError("input", "file '" + c.input + "' does not exist");
  }
  if (c.ks.empty()) throw ConfigError("k", "K list is empty");
  for (std::size_t i = 0; i < c.ks.size(); ++i) {
    if (c.ks[i] == 0) throw ConfigError("k", "K values must be positive");
    if (i > 0 && c.ks[i] <= c.ks[i - 1]) throw ConfigError("k", "K list must be strictly ascending");
  }
  if (!(c.window_days > 0.0)) throw ConfigError("window-days", "must be positive");
  if (c.workers == 0) throw ConfigError("workers", "must be >= 1");
  if (c.bins_per_decade < 1) throw ConfigError("bins-per-decade", "must be >= 1");
  if (!(c.log_base > 0.0) || c.log_base == 1.0) throw ConfigError("log-base", "must be positive and != 1");
  for (const auto& m : c.methods) parse_scoring_method(m);
  for (const auto& m : c.degree_modes) parse_degree_mode(m);
  parse_scoring_method(c.base);
  parse_scoring_method(c.planted);
  if (c.command == "recommend" && c.ego.empty()) throw ConfigError("ego", "recommend needs --ego");
}

}  // namespace detail

/// Parses flags and the optional config file. Throws HelpRequested for
/// --help/--version and ConfigError for anything invalid.
inline RunConfig parse_config(int argc, const char* const* argv) {
  RunConfig c;
  CLI::App app{"Personalized-degree link recommendation and analysis", "pdlink"};
  detail::build_app(app, c);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested{app.version()};
  } catch (const CLI::ParseError& e) {
    throw ConfigError("", e.what() + std::string("\n") + app.help());
  }
  if (!detail::flag_given(argc, argv, "--output-dir")) {
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') c.output_dir = env;
  }
  detail::validate(c);
  return c;
}

/// Key/value echo of a RunConfig, loadable again with --config.
inline std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c) {
  auto join = [](const auto& v) {
    std::ostringstream s;
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
    return s.str();
  };
  std::string input = c.input.empty() ? "" : std::filesystem::absolute(c.input).string();
  return {
      {"input", input},
      {"directed", c.directed ? "true" : "false"},
      {"delimiter", c.delimiter},
      {"time-mode", c.time_mode},
      {"drop-zero-out", c.drop_zero_out ? "true" : "false"},
      {"window-days", format_double(c.window_days)},
      {"snapshot-count", std::to_string(c.snapshot_count)},
      {"ego-sample", std::to_string(c.ego_sample)},
      {"seed", std::to_string(c.seed)},
      {"two-hop-cutoff", std::to_string(c.two_hop_cutoff)},
      {"k", join(c.ks)},
      {"methods", join(c.methods)},
      {"base", c.base},
      {"output-dir", std::filesystem::absolute(c.output_dir).string()},
      {"format", c.format},
      {"workers", std::to_string(c.workers)},
      {"analysis", c.analysis},
      {"degree-modes", join(c.degree_modes)},
      {"ego", c.ego},
      {"snapshot", std::to_string(c.snapshot)},
      {"bins-per-decade", std::to_string(c.bins_per_decade)},
      {"require-max-k", c.require_max_k ? "true" : "false"},
      {"require-formation", c.require_formation ? "true" : "false"},
      {"log-base", format_double(c.log_base)},
      {"gen-kind", c.gen_kind},
      {"nodes", std::to_string(c.nodes)},
      {"density", format_double(c.density)},
      {"attachment", std::to_string(c.attachment)},
      {"triad-prob", format_double(c.triad_prob)},
      {"planted", c.planted},
      {"gen-snapshots", std::to_string(c.gen_snapshots)},
      {"formation-rate", format_double(c.formation_rate)},
  };
}

namespace detail {

class OutputSink {
 public:
  explicit OutputSink(const RunConfig& c) : dir_(c.output_dir), json_(c.format == "json") {
    std::filesystem::create_directories(dir_);
  }

  void table(const std::string& stem, const Table& t) {
    auto path = dir_ / (stem + (json_ ? ".json" : ".csv"));
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    json_ ? write_json(t, out) : write_csv(t, out);
    written_.push_back(path.filename().string());
  }

  std::ofstream raw(const std::string& name) {
    auto path = dir_ / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    written_.push_back(name);
    return out;
  }

  const std::filesystem::path& dir() const { return dir_; }
  const std::vector<std::string>& written() const { return written_; }

 private:
  std::filesystem::path dir_;
  bool json_;
  std::vector<std::string> written_;
};

inline IngestOptions ingest_options(const RunConfig& c) {
  IngestOptions o;
  o.directed = c.directed;
  o.drop_zero_out_degree = c.drop_zero_out;
  o.time_mode = c.time_mode == "index" ? TimeMode::kSnapshotIndex : TimeMode::kTimestamp;
  if (c.delimiter == "space") o.delimiter = Delimiter::kWhitespace;
  if (c.delimiter == "tab") o.delimiter = Delimiter::kTab;
  if (c.delimiter == "comma") o.delimiter = Delimiter::kComma;
  return o;
}

inline SnapshotPolicy snapshot_policy(const RunConfig& c) {
  if (c.time_mode == "index") return SnapshotPolicy::preassigned();
  if (c.snapshot_count > 0) return SnapshotPolicy::fixed_count(c.snapshot_count);
  return SnapshotPolicy::window(static_cast<std::int64_t>(std::llround(c.window_days * 86400.0)));
}

inline std::vector<DegreeMode> degree_modes(const RunConfig& c, bool directed, bool per_triad) {
  std::vector<DegreeMode> out;
  for (const auto& m : c.degree_modes) out.push_back(parse_degree_mode(m));
  if (!out.empty()) return out;
  if (!directed) return {DegreeMode::kUndirected};
  if (per_triad) return {DegreeMode::kIn, DegreeMode::kOut};
  return {DegreeMode::kUndirected, DegreeMode::kIn, DegreeMode::kOut};
}

inline std::vector<ScoringMethod> methods(const RunConfig& c, bool directed) {
  if (c.methods.empty()) return all_scoring_methods(directed);
  std::vector<ScoringMethod> out;
  for (const auto& m : c.methods) out.push_back(parse_scoring_method(m));
  return out;
}

inline std::size_t pick_snapshot(const RunConfig& c, const SnapshotSeries& s) {
  if (c.snapshot < 0) return s.size() - 1;
  if (static_cast<std::size_t>(c.snapshot) >= s.size()) {
    throw ConfigError("snapshot", "snapshot " + std::to_string(c.snapshot) + " out of range (have " +
                                      std::to_string(s.size()) + ")");
  }
  return static_cast<std::size_t>(c.snapshot);
}

inline EgoSampleSpec sample_spec(const RunConfig& c) { return {c.ego_sample, c.seed, c.two_hop_cutoff}; }

inline GeneratorSpec generator_spec(const RunConfig& c) {
  GeneratorSpec g;
  g.kind = parse_generator_kind(c.gen_kind);
  g.nodes = c.nodes;
  g.directed = c.directed;
  g.density = c.density;
  g.attachment = c.attachment;
  g.triad_probability = c.triad_prob;
  g.planted = parse_scoring_method(c.planted);
  g.snapshots = c.gen_snapshots;
  g.formation_rate = c.formation_rate;
  g.window_seconds = static_cast<std::int64_t>(std::llround(c.window_days * 86400.0));
  g.seed = c.seed;
  return g;
}

inline void execute(const RunConfig& c, OutputSink& sink, std::ostream& log) {
  if (c.command == "generate") {
    auto list = generate(generator_spec(c));
    auto out = sink.raw("generated.txt");
    write_edge_list(list, out);
    log << "generated " << list.edges.size() << " edges over " << list.node_count() << " nodes\n";
    return;
  }

  auto list = ingest_file(c.input, ingest_options(c));
  if (c.command == "ingest") {
    if (c.format == "json") {
      Table edges{{}, {"src_id", "dst_id", "time"}, {}};
      for (const auto& e : list.edges) edges.rows.push_back({e.src, e.dst, e.time});
      Table labels{{}, {"node_id", "label"}, {}};
      for (std::size_t i = 0; i < list.labels.size(); ++i) labels.rows.push_back({i, list.labels[i]});
      sink.table("edges", edges);
      sink.table("labels", labels);
    } else {
      auto edges = sink.raw("edges.csv");
      auto labels = sink.raw("labels.csv");
      write_normalized(list, edges, labels);
    }
    log << "ingested " << list.edges.size() << " edges over " << list.node_count() << " nodes\n";
    return;
  }

  auto series = build_snapshots(list, snapshot_policy(c));
  if (c.command == "snapshots") {
    sink.table("snapshots", snapshot_table(series));
    return;
  }
  if (c.command == "degree-dist") {
    const auto& g = series[pick_snapshot(c, series)];
    for (auto mode : degree_modes(c, list.directed, false)) {
      auto stem = [&](DegreeKind k) {
        return "degree_dist_" + std::string(to_string(k)) + "_" + std::string(to_string(mode));
      };
      auto global = global_degree_samples(g, mode);
      auto personal = personalized_degree_samples(g, mode, c.workers);
      if (!global.samples.empty()) {
        sink.table(stem(DegreeKind::kGlobal), histogram_table(log_binned_histogram(global, c.bins_per_decade)));
      }
      if (!personal.samples.empty()) {
        sink.table(stem(DegreeKind::kPersonalized),
                   histogram_table(log_binned_histogram(personal, c.bins_per_decade)));
      }
    }
    return;
  }
  if (c.command == "empirical") {
    if (series.size() < 2) {
      throw ConfigError("snapshots", "empirical analysis needs at least 2 snapshots, got " +
                                         std::to_string(series.size()));
    }
    auto analysis = parse_analysis_mode(c.analysis);
    std::vector<NodeId> egos;
    if (c.ego_sample == 0) {
      egos.resize(series.node_count);
      std::iota(egos.begin(), egos.end(), NodeId{0});
    } else {
      egos = sample_egos(series, sample_spec(c));
    }
    auto modes = degree_modes(c, list.directed, analysis == AnalysisMode::kPerTriad);
    auto stats = aggregate_empirical(series, egos, analysis, modes, c.workers);
    sink.table("empirical", empirical_table(stats));
    log << "egos used " << stats.egos_used << " of " << stats.egos_requested << "\n";
    return;
  }
  if (c.command == "recommend") {
    auto it = std::find(list.labels.begin(), list.labels.end(), c.ego);
    if (it == list.labels.end()) throw ConfigError("ego", "unknown ego label '" + c.ego + "'");
    auto ego = static_cast<NodeId>(it - list.labels.begin());
    auto ms = c.methods.empty() ? std::vector<ScoringMethod>{{Method::kPDAA, DegreeMode::kUndirected}}
                                : methods(c, list.directed);
    if (ms.size() != 1) throw ConfigError("methods", "recommend takes exactly one method");
    const auto& g = series[pick_snapshot(c, series)];
    EgoWorkspace ws;
    EgoView view(g, ego, ws);
    EgoScorer scorer(view, ws);
    auto table = scorer.score(ms.front(), c.log_base);
    auto ranked = rank_candidates(table);
    std::map<NodeId, double> score_of;
    for (const auto& e : table.entries) score_of[e.candidate] = e.score;
    Table t{{"ego=" + c.ego, "method=" + ms.front().name(), "snapshot=" + std::to_string(g.index())},
            {"rank", "node_id", "label", "score"},
            {}};
    std::size_t top = std::min(c.ks.back(), ranked.order.size());
    for (std::size_t i = 0; i < top; ++i) {
      NodeId v = ranked.order[i];
      t.rows.push_back({i + 1, v, list.labels[v], score_of[v]});
    }
    sink.table("recommend", t);
    return;
  }
  if (c.command == "evaluate") {
    EvalConfig ec;
    ec.sample = sample_spec(c);
    ec.methods = methods(c, list.directed);
    ec.ks = c.ks;
    ec.cells = {c.require_max_k, c.require_formation};
    ec.workers = c.workers;
    ec.log_base = c.log_base;
    auto result = evaluate_methods(series, ec);
    sink.table("evaluation", evaluation_table(result));
    auto base = parse_scoring_method(c.base);
    if (std::find(ec.methods.begin(), ec.methods.end(), base) != ec.methods.end()) {
      sink.table("improvement", improvement_table(percent_improvement(result, base)));
    }
    log << "egos evaluated " << result.egos_evaluated << " of " << result.egos_sampled << " sampled ("
        << result.egos_skipped_cutoff << " over the 2-hop cutoff)\n";
    return;
  }
  throw ConfigError("command", "unknown command '" + c.command + "'");
}

inline void write_manifest(const RunConfig& c, OutputSink& sink, double seconds) {
  nlohmann::ordered_json m;
  m["command"] = c.command;
  m["version"] = kVersion;
  m["seed"] = c.seed;
  auto cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config_entries(c)) cfg[k] = v;
  m["config"] = cfg;
  m["outputs"] = sink.written();
  m["wall_time_seconds"] = seconds;
  m["rerun"] = "pdlink " + c.command + " --config manifest.conf";
  {
    std::ofstream out(sink.dir() / "manifest.json");
    out << m.dump(2) << '\n';
  }
  std::ofstream conf(sink.dir() / "manifest.conf");
  conf << "# pdlink " << kVersion << " " << c.command << "\n";
  for (const auto& [k, v] : config_entries(c)) {
    if (v.empty()) continue;
    bool quote = v.find_first_of(" #=\"") != std::string::npos;
    conf << k << "=" << (quote ? "\"" + v + "\"" : v) << "\n";
  }
}

}  // namespace detail

/// Executes a validated configuration. Returns 0 on success, 1 for invalid
/// configuration discovered while running, 2 for runtime failures.
inline int run(const RunConfig& c, std::ostream& log = std::cerr) {
  auto start = std::chrono::steady_clock::now();
  try {
    detail::OutputSink sink(c);
    detail::execute(c, sink, log);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    detail::write_manifest(c, sink, secs);
    return 0;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
}

/// Full entry point: parse, validate, run.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& log = std::cerr) {
  RunConfig c;
  try {
    c = parse_config(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.text << "\n";
    return 0;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
  return run(c, log);
}

}  // namespace pdlink::cli
