#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace pdlink {

/// Dense node identifier assigned at ingestion, contiguous from 0.
using NodeId = std::uint32_t;

/// Malformed input line. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid option or configuration value. `key()` names the offending setting.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A documented operation precondition was violated by the caller.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A pipeline produced nothing to aggregate (every ego/cell was excluded).
class EmptyResultError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Degree flavour. On undirected graphs only kUndirected is admissible; on
/// directed graphs kUndirected means "computed on the reciprocated graph".
enum class DegreeMode { kUndirected, kIn, kOut };

inline std::string_view to_string(DegreeMode m) {
  switch (m) {
    case DegreeMode::kUndirected: return "undirected";
    case DegreeMode::kIn: return "in";
    case DegreeMode::kOut: return "out";
  }
  return "?";
}

inline DegreeMode parse_degree_mode(std::string_view s) {
  if (s == "undirected" || s == "reciprocated") return DegreeMode::kUndirected;
  if (s == "in") return DegreeMode::kIn;
  if (s == "out") return DegreeMode::kOut;
  throw ConfigError("mode", "unknown degree mode '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Sorted-range set arithmetic. All inputs are strictly ascending.

inline bool sorted_contains(std::span<const NodeId> s, NodeId v) {
  return std::binary_search(s.begin(), s.end(), v);
}

inline std::size_t intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

inline std::vector<NodeId> intersection(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::vector<NodeId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Epoch-stamped membership marker over [0, n). Reset is O(1) amortized.
class NodeMarker {
 public:
  void reset(std::size_t n) {
    if (stamp_.size() < n) stamp_.resize(n, 0);
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }
  void mark(NodeId v) { stamp_[v] = epoch_; }
  bool marked(NodeId v) const { return stamp_[v] == epoch_; }
  template <class Range>
  void mark_all(const Range& r) {
    for (NodeId v : r) mark(v);
  }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

// ---------------------------------------------------------------------------
// Parallelism. Work items are claimed dynamically but every item writes only
// its own output slot, so results never depend on the worker count.

inline std::size_t default_workers() {
  auto hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Calls fn(index, worker) for index in [0, count). Rethrows the first
/// exception raised by any worker after all workers have joined.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  if (workers == 0) workers = 1;
  workers = std::min(workers, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i, std::size_t{0});
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i, w);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Numeric helpers.

/// Shortest round-trip decimal representation; stable across runs.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Mean and standard error (sample sd / sqrt(n)) accumulated in input order.
/// A single value has standard error 0.
inline MeanStderr mean_stderr(std::span<const double> xs) {
  MeanStderr r;
  r.n = xs.size();
  if (xs.empty()) return r;
  double sum = 0.0;
  for (double x : xs) sum += x;
  r.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    r.std_error = sd / std::sqrt(static_cast<double>(xs.size()));
  }
  return r;
}

}  // namespace pdlink
