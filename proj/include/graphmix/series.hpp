#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphmix/error.hpp"
#include "graphmix/graph.hpp"
#include "graphmix/rewire.hpp"

namespace graphmix {

/// Binary occupancy series Z_0..Z_{L-1} of one vertex pair.
///
/// Stored as the first value plus the sorted indices t > 0 where
/// Z_t != Z_{t-1}, so a K-step chain costs memory proportional to the number
/// of times the pair flips rather than to K.
class EdgeSeries {
 public:
  EdgeSeries() = default;

  /// From explicit bits. Any nonzero byte counts as 1.
  EdgeSeries(Edge pair, std::span<const std::uint8_t> bits) : pair_(pair), length_(bits.size()) {
    if (bits.empty()) return;
    first_ = bits[0] != 0;
    for (std::size_t t = 1; t < bits.size(); ++t) {
      if ((bits[t] != 0) != (bits[t - 1] != 0)) flips_.push_back(t);
    }
  }

  /// From run-length form. `flips` must be strictly increasing and < length.
  EdgeSeries(Edge pair, std::uint64_t length, bool first, std::vector<std::uint64_t> flips)
      : pair_(pair), length_(length), first_(first), flips_(std::move(flips)) {
    if (length_ == 0 && !flips_.empty()) throw InvalidInput("empty series cannot flip");
    for (std::size_t i = 0; i < flips_.size(); ++i) {
      if (flips_[i] == 0 || flips_[i] >= length_ || (i > 0 && flips_[i] <= flips_[i - 1])) {
        throw InvalidInput("flip positions must be strictly increasing within (0, length)");
      }
    }
  }

  const Edge& pair() const noexcept { return pair_; }
  std::uint64_t size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }
  bool first() const noexcept { return first_; }
  std::span<const std::uint64_t> flips() const noexcept { return flips_; }
  std::size_t run_count() const noexcept { return length_ == 0 ? 0 : flips_.size() + 1; }
  bool constant() const noexcept { return flips_.empty(); }

  bool operator[](std::uint64_t t) const noexcept {
    const auto before = std::upper_bound(flips_.begin(), flips_.end(), t) - flips_.begin();
    return first_ != (before % 2 == 1);
  }

  /// Number of ones among indices [begin, end).
  std::uint64_t count_ones(std::uint64_t begin, std::uint64_t end) const noexcept {
    end = std::min(end, length_);
    std::uint64_t ones = 0;
    for_each_run([&](std::uint64_t s, std::uint64_t e, bool v) {
      if (!v) return;
      const auto lo = std::max(s, begin), hi = std::min(e, end);
      if (hi > lo) ones += hi - lo;
    });
    return ones;
  }

  double mean() const noexcept {
    return length_ == 0 ? 0.0 : static_cast<double>(count_ones(0, length_)) / static_cast<double>(length_);
  }

  std::vector<std::uint8_t> bits() const {
    std::vector<std::uint8_t> out(length_);
    for_each_run([&](std::uint64_t s, std::uint64_t e, bool v) { std::fill(out.begin() + s, out.begin() + e, v); });
    return out;
  }

  /// Calls fn(begin, end, value) for each maximal constant run, in order.
  template <class Fn>
  void for_each_run(Fn&& fn) const {
    if (length_ == 0) return;
    std::uint64_t start = 0;
    bool value = first_;
    for (auto flip : flips_) {
      fn(start, flip, value);
      start = flip;
      value = !value;
    }
    fn(start, length_, value);
  }

  friend bool operator==(const EdgeSeries&, const EdgeSeries&) = default;

 private:
  Edge pair_{};
  std::uint64_t length_ = 0;
  bool first_ = false;
  std::vector<std::uint64_t> flips_;
};

/// Keeps Z_0, Z_k, Z_2k, ...: floor(L/k) elements.
inline EdgeSeries thin(const EdgeSeries& series, std::uint64_t k) {
  if (k == 0) throw InvalidInput("thinning factor must be at least 1");
  if (k == 1) return series;
  const std::uint64_t out_len = series.size() / k;
  const std::uint64_t limit = out_len * k;
  std::vector<std::uint64_t> flips;
  bool first = false;
  bool have_value = false;
  bool last = false;
  series.for_each_run([&](std::uint64_t s, std::uint64_t e, bool v) {
    e = std::min(e, limit);
    if (s >= e) return;
    const std::uint64_t lo = (s + k - 1) / k;  // first sample index inside the run
    const std::uint64_t hi = (e + k - 1) / k;  // one past the last
    if (lo >= hi) return;
    if (!have_value) {
      first = v;
      have_value = true;
    } else if (v != last) {
      flips.push_back(lo);
    }
    last = v;
  });
  return EdgeSeries(series.pair(), out_len, first, std::move(flips));
}

/// Records one EdgeSeries per tracked pair while a chain runs.
///
/// Use as a run_chain observer. Bit t of each series is the pair's
/// occupancy after step t; bit 0 is the initial state. Updates cost O(1)
/// per applied step regardless of how many pairs are tracked.
class SeriesRecorder {
 public:
  SeriesRecorder(const Graph& g, std::span<const Edge> pairs) : pairs_(pairs.begin(), pairs.end()) {
    index_.reserve(pairs_.size() * 2);
    initial_.resize(pairs_.size());
    state_.resize(pairs_.size());
    flips_.resize(pairs_.size());
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      const auto [u, v] = pairs_[i];
      if (u >= g.vertex_count() || v >= g.vertex_count() || u == v) {
        throw InvalidInput("tracked pair must name two distinct vertices of the graph");
      }
      if (!index_.emplace(pair_key(u, v), i).second) throw InvalidInput("pair tracked twice");
      initial_[i] = state_[i] = g.has_edge(u, v);
    }
  }

  void operator()(const Graph&, const StepEvent& event) {
    steps_ = event.step;
    if (event.outcome != StepOutcome::applied) return;
    for (const auto& e : event.delta.removed) touch(e, false, event.step);
    for (const auto& e : event.delta.added) touch(e, true, event.step);
  }

  std::uint64_t steps() const noexcept { return steps_; }

  /// Series of length steps() + 1 for every tracked pair, in input order.
  std::vector<EdgeSeries> series() const {
    std::vector<EdgeSeries> out;
    out.reserve(pairs_.size());
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      out.emplace_back(pairs_[i], steps_ + 1, initial_[i] != 0, flips_[i]);
    }
    return out;
  }

 private:
  void touch(const Edge& e, bool present, std::uint64_t step) {
    const auto it = index_.find(pair_key(e.u, e.v));
    if (it == index_.end()) return;
    const std::size_t i = it->second;
    if ((state_[i] != 0) == present) return;
    state_[i] = present;
    flips_[i].push_back(step);
  }

  std::vector<Edge> pairs_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::uint8_t> initial_;
  std::vector<std::uint8_t> state_;
  std::vector<std::vector<std::uint64_t>> flips_;
  std::uint64_t steps_ = 0;
};

// ---------------------------------------------------------------------------
// Series text format:
//   # pair u v K
//   0110...   (K + 1 characters)

inline void write_series(std::ostream& out, const EdgeSeries& series) {
  const std::uint64_t k = series.empty() ? 0 : series.size() - 1;
  out << "# pair " << series.pair().u << ' ' << series.pair().v << ' ' << k << '\n';
  std::string line(series.size(), '0');
  series.for_each_run([&](std::uint64_t s, std::uint64_t e, bool v) {
    if (v) std::fill(line.begin() + static_cast<std::ptrdiff_t>(s), line.begin() + static_cast<std::ptrdiff_t>(e), '1');
  });
  out << line << '\n';
}

inline std::vector<EdgeSeries> read_series(std::istream& in) {
  std::vector<EdgeSeries> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream header(line);
    std::string hash, word;
    std::uint64_t u = 0, v = 0, k = 0;
    if (!(header >> hash >> word >> u >> v >> k) || hash != "#" || word != "pair") {
      throw ParseError(lineno, "expected header '# pair u v K'");
    }
    if (u > std::numeric_limits<Vertex>::max() || v > std::numeric_limits<Vertex>::max()) {
      throw ParseError(lineno, "pair id out of range");
    }
    if (!std::getline(in, line)) throw ParseError(lineno + 1, "missing series line");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() != k + 1) {
      throw ParseError(lineno, "series has " + std::to_string(line.size()) + " values, header declares " +
                                   std::to_string(k + 1));
    }
    std::vector<std::uint64_t> flips;
    for (std::size_t t = 0; t < line.size(); ++t) {
      if (line[t] != '0' && line[t] != '1') throw ParseError(lineno, "series values must be '0' or '1'");
      if (t > 0 && line[t] != line[t - 1]) flips.push_back(t);
    }
    out.emplace_back(Edge{static_cast<Vertex>(u), static_cast<Vertex>(v)}, line.size(), line[0] == '1',
                     std::move(flips));
  }
  return out;
}

}  // namespace graphmix
