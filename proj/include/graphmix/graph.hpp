#pragma once

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphmix/error.hpp"
#include "graphmix/random.hpp"

namespace graphmix {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;
using Degree = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  /// Same edge with the smaller id first.
  constexpr Edge canonical() const noexcept { return u < v ? Edge{u, v} : Edge{v, u}; }
  friend constexpr bool operator==(const Edge&, const Edge&) = default;
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Order-independent key of an unordered vertex pair.
constexpr std::uint64_t pair_key(Vertex a, Vertex b) noexcept {
  return a < b ? (std::uint64_t{a} << 32) | b : (std::uint64_t{b} << 32) | a;
}

constexpr Edge pair_from_key(std::uint64_t key) noexcept {
  return {static_cast<Vertex>(key >> 32), static_cast<Vertex>(key & 0xffffffffULL)};
}

/// One end of one edge. Slot `2e` is the first stored end of edge `e`, slot
/// `2e + 1` the second; there are exactly 2m slots.
struct EndpointSlot {
  std::uint32_t slot = 0;

  constexpr EdgeId edge() const noexcept { return slot >> 1; }
  constexpr unsigned end() const noexcept { return slot & 1U; }
  constexpr EndpointSlot opposite() const noexcept { return {slot ^ 1U}; }
  friend constexpr bool operator==(const EndpointSlot&, const EndpointSlot&) = default;
};

namespace detail {

// Open-addressing set of pair keys. Key 0 encodes (0,0), a self-loop that is
// never stored, so it doubles as the empty marker.
class PairSet {
 public:
  PairSet() = default;

  explicit PairSet(std::size_t expected) { reserve(expected); }

  void reserve(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < expected * 2 + 2) cap <<= 1;
    if (cap > table_.size()) rehash(cap);
  }

  std::size_t size() const noexcept { return size_; }

  bool contains(std::uint64_t key) const noexcept {
    if (table_.empty()) return false;
    for (std::size_t i = index_of(key);; i = (i + 1) & mask_) {
      if (table_[i] == key) return true;
      if (table_[i] == 0) return false;
    }
  }

  bool insert(std::uint64_t key) {
    if ((size_ + 1) * 2 > table_.size()) rehash(std::max<std::size_t>(16, table_.size() * 2));
    std::size_t i = index_of(key);
    for (; table_[i] != 0; i = (i + 1) & mask_) {
      if (table_[i] == key) return false;
    }
    table_[i] = key;
    ++size_;
    return true;
  }

  bool erase(std::uint64_t key) noexcept {
    if (table_.empty()) return false;
    std::size_t i = index_of(key);
    for (; table_[i] != key; i = (i + 1) & mask_) {
      if (table_[i] == 0) return false;
    }
    // Backward-shift deletion keeps probe chains intact without tombstones.
    std::size_t hole = i;
    for (std::size_t j = (hole + 1) & mask_; table_[j] != 0; j = (j + 1) & mask_) {
      const std::size_t home = index_of(table_[j]);
      const bool movable = (j > hole) ? (home <= hole || home > j) : (home <= hole && home > j);
      if (movable) {
        table_[hole] = table_[j];
        hole = j;
      }
    }
    table_[hole] = 0;
    --size_;
    return true;
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (auto key : table_) {
      if (key != 0) fn(key);
    }
  }

 private:
  std::size_t index_of(std::uint64_t key) const noexcept { return mix64(key) & mask_; }

  void rehash(std::size_t capacity) {
    std::vector<std::uint64_t> old = std::move(table_);
    table_.assign(capacity, 0);
    mask_ = capacity - 1;
    size_ = 0;
    for (auto key : old) {
      if (key != 0) insert(key);
    }
  }

  std::vector<std::uint64_t> table_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace detail

/// Compressed sorted adjacency snapshot for read-only algorithms.
struct Csr {
  std::vector<std::size_t> offsets;  // n + 1 entries
  std::vector<Vertex> targets;       // 2m entries, sorted within each vertex

  std::size_t vertex_count() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
  }
};

/// Undirected simple graph with a degree-indexed endpoint directory.
///
/// Every vertex owns a contiguous block of `degree(v)` endpoint slots inside
/// an incidence array ordered by (degree, vertex id), so all slots incident
/// to degree-d vertices form one contiguous span. Edge swaps exchange the
/// vertices stored in two slots; degrees never change, so the block layout is
/// fixed for the lifetime of the graph and only slot contents move.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph on vertices 0..n-1. Throws InvalidInput on self-loops,
  /// parallel edges or out-of-range endpoints.
  Graph(std::size_t n, std::span<const Edge> edge_list, std::vector<std::uint64_t> original_ids = {})
      : n_(n) {
    if (n > std::numeric_limits<Vertex>::max() || edge_list.size() * 2 > std::numeric_limits<std::uint32_t>::max()) {
      throw InvalidInput("graph too large for 32-bit vertex and slot ids");
    }
    if (original_ids.empty()) {
      original_ids.resize(n);
      std::iota(original_ids.begin(), original_ids.end(), std::uint64_t{0});
    }
    if (original_ids.size() != n) throw InvalidInput("id map size does not match vertex count");
    ids_ = std::move(original_ids);

    const std::size_t m = edge_list.size();
    ends_.resize(2 * m);
    degree_.assign(n, 0);
    edge_set_.reserve(m);
    for (std::size_t e = 0; e < m; ++e) {
      const auto [u, v] = edge_list[e];
      if (u >= n || v >= n) throw InvalidInput("edge endpoint out of range");
      if (u == v) throw InvalidInput("self-loop " + std::to_string(u));
      if (!edge_set_.insert(pair_key(u, v))) {
        throw InvalidInput("parallel edge " + std::to_string(u) + "-" + std::to_string(v));
      }
      ends_[2 * e] = u;
      ends_[2 * e + 1] = v;
      ++degree_[u];
      ++degree_[v];
    }
    build_index();
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return ends_.size() / 2; }
  std::size_t slot_count() const noexcept { return ends_.size(); }

  Degree degree(Vertex v) const noexcept { return degree_[v]; }
  Degree max_degree() const noexcept { return class_vertex_begin_.empty() ? 0 : static_cast<Degree>(class_vertex_begin_.size() - 2); }

  bool has_edge(Vertex a, Vertex b) const noexcept { return a != b && edge_set_.contains(pair_key(a, b)); }

  Edge edge(EdgeId e) const noexcept { return {ends_[2 * e], ends_[2 * e + 1]}; }
  Vertex vertex_at(EndpointSlot s) const noexcept { return ends_[s.slot]; }
  Vertex other_at(EndpointSlot s) const noexcept { return ends_[s.slot ^ 1U]; }

  /// Endpoint slots occupied by `v`; each names an incident edge.
  std::span<const std::uint32_t> incident_slots(Vertex v) const noexcept {
    return {incidence_.data() + vertex_slot_begin_[v], degree_[v]};
  }

  /// Vertices of degree `d`, in ascending id order. f(d) is its size.
  std::span<const Vertex> vertices_of_degree(Degree d) const noexcept {
    if (d > max_degree()) return {};
    return {order_.data() + class_vertex_begin_[d], order_.data() + class_vertex_begin_[d + 1]};
  }

  /// Endpoint slots whose vertex has degree `d` (d * f(d) of them).
  std::span<const std::uint32_t> endpoint_slots_of_degree(Degree d) const noexcept {
    if (d > max_degree()) return {};
    return {incidence_.data() + class_slot_begin_[d], incidence_.data() + class_slot_begin_[d + 1]};
  }

  std::size_t degree_class_size(Degree d) const noexcept { return vertices_of_degree(d).size(); }

  /// Original (input) id of a compacted vertex.
  std::uint64_t original_id(Vertex v) const noexcept { return ids_[v]; }
  const std::vector<std::uint64_t>& original_ids() const noexcept { return ids_; }

  /// Uniform draw over all 2m endpoint slots.
  EndpointSlot sample_uniform_edge_endpoint(Rng& rng) const {
    if (ends_.empty()) throw InvalidState("cannot sample an endpoint of an empty graph");
    return {static_cast<std::uint32_t>(rng.below(ends_.size()))};
  }

  /// Uniform draw over endpoint slots of degree-d vertices other than
  /// `exclude`. The slot's vertex is the drawn degree-d vertex, its opposite
  /// the drawn neighbor. Returns nullopt when nothing qualifies.
  std::optional<EndpointSlot> try_sample_edge_at_degree(Degree d, std::optional<Vertex> exclude, Rng& rng) const {
    if (d == 0 || d > max_degree()) return std::nullopt;
    const std::size_t begin = class_slot_begin_[d];
    std::size_t count = class_slot_begin_[d + 1] - begin;
    const bool skip = exclude && *exclude < n_ && degree_[*exclude] == d;
    if (skip) count -= d;
    if (count == 0) return std::nullopt;
    std::size_t idx = begin + rng.below(count);
    if (skip && idx >= vertex_slot_begin_[*exclude]) idx += d;
    return EndpointSlot{incidence_[idx]};
  }

  /// Throwing variant of try_sample_edge_at_degree.
  EndpointSlot sample_edge_at_degree(Degree d, std::optional<Vertex> exclude, Rng& rng) const {
    if (auto s = try_sample_edge_at_degree(d, exclude, rng)) return *s;
    throw SamplingExhausted("no endpoint slot of degree " + std::to_string(d) + " outside the exclusion");
  }

  /// True when exchanging the vertices held by slots `a` and `b` keeps the
  /// graph simple. Edge {p, x} with x at `a` and edge {q, y} with y at `b`
  /// would become {p, y} and {q, x}.
  bool can_exchange(EndpointSlot a, EndpointSlot b) const noexcept {
    if (a.edge() == b.edge()) return false;
    const Vertex x = ends_[a.slot], p = ends_[a.slot ^ 1U];
    const Vertex y = ends_[b.slot], q = ends_[b.slot ^ 1U];
    if (p == y || q == x) return false;
    return !edge_set_.contains(pair_key(p, y)) && !edge_set_.contains(pair_key(q, x));
  }

  /// Exchanges the vertices held by two slots. Requires can_exchange(a, b).
  void exchange(EndpointSlot a, EndpointSlot b) noexcept {
    assert(can_exchange(a, b));
    const Vertex x = ends_[a.slot], p = ends_[a.slot ^ 1U];
    const Vertex y = ends_[b.slot], q = ends_[b.slot ^ 1U];
    edge_set_.erase(pair_key(p, x));
    edge_set_.erase(pair_key(q, y));
    edge_set_.insert(pair_key(p, y));
    edge_set_.insert(pair_key(q, x));
    ends_[a.slot] = y;
    ends_[b.slot] = x;
    // x now sits in slot b and y in slot a; positions travel with the vertex.
    incidence_[slot_pos_[a.slot]] = b.slot;
    incidence_[slot_pos_[b.slot]] = a.slot;
    std::swap(slot_pos_[a.slot], slot_pos_[b.slot]);
  }

  /// Edges with the smaller id first, sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out(edge_count());
    for (std::size_t e = 0; e < out.size(); ++e) out[e] = edge(static_cast<EdgeId>(e)).canonical();
    std::sort(out.begin(), out.end());
    return out;
  }

  Csr csr() const {
    Csr out;
    out.offsets.resize(n_ + 1, 0);
    for (Vertex v = 0; v < n_; ++v) out.offsets[v + 1] = out.offsets[v] + degree_[v];
    out.targets.resize(ends_.size());
    for (Vertex v = 0; v < n_; ++v) {
      auto* dst = out.targets.data() + out.offsets[v];
      std::size_t i = 0;
      for (auto s : incident_slots(v)) dst[i++] = ends_[s ^ 1U];
      std::sort(dst, dst + degree_[v]);
    }
    return out;
  }

  /// Rebuilds the degree index from the edge array and compares it with the
  /// maintained one. Also checks the simple-graph property.
  bool index_consistent() const {
    if (edge_set_.size() != edge_count()) return false;
    for (std::size_t s = 0; s < ends_.size(); ++s) {
      const Vertex v = ends_[s];
      if (v >= n_ || v == ends_[s ^ 1U]) return false;
      if (!edge_set_.contains(pair_key(v, ends_[s ^ 1U]))) return false;
      const std::size_t pos = slot_pos_[s];
      if (incidence_[pos] != s) return false;
      if (pos < vertex_slot_begin_[v] || pos >= vertex_slot_begin_[v] + degree_[v]) return false;
    }
    Graph rebuilt(n_, edges(), ids_);
    if (rebuilt.degree_ != degree_ || rebuilt.order_ != order_) return false;
    if (rebuilt.class_slot_begin_ != class_slot_begin_ || rebuilt.vertex_slot_begin_ != vertex_slot_begin_) return false;
    for (Vertex v = 0; v < n_; ++v) {
      auto mine = neighbor_set(v);
      auto theirs = rebuilt.neighbor_set(v);
      if (mine != theirs) return false;
    }
    return true;
  }

 private:
  std::vector<Vertex> neighbor_set(Vertex v) const {
    std::vector<Vertex> out;
    for (auto s : incident_slots(v)) out.push_back(ends_[s ^ 1U]);
    std::sort(out.begin(), out.end());
    return out;
  }

  void build_index() {
    const Degree dmax = degree_.empty() ? 0 : *std::max_element(degree_.begin(), degree_.end());
    class_vertex_begin_.assign(static_cast<std::size_t>(dmax) + 2, 0);
    for (auto d : degree_) ++class_vertex_begin_[d + 1];
    for (std::size_t d = 1; d < class_vertex_begin_.size(); ++d) class_vertex_begin_[d] += class_vertex_begin_[d - 1];

    order_.resize(n_);
    std::vector<std::size_t> fill(class_vertex_begin_.begin(), class_vertex_begin_.end() - 1);
    for (Vertex v = 0; v < n_; ++v) order_[fill[degree_[v]]++] = v;

    vertex_slot_begin_.assign(n_, 0);
    class_slot_begin_.assign(class_vertex_begin_.size(), 0);
    std::size_t cursor = 0;
    for (Degree d = 0; d <= dmax; ++d) {
      class_slot_begin_[d] = cursor;
      for (auto i = class_vertex_begin_[d]; i < class_vertex_begin_[d + 1]; ++i) {
        vertex_slot_begin_[order_[i]] = cursor;
        cursor += d;
      }
    }
    class_slot_begin_[dmax + 1] = cursor;

    incidence_.assign(ends_.size(), 0);
    slot_pos_.assign(ends_.size(), 0);
    std::vector<std::size_t> next(vertex_slot_begin_);
    for (std::uint32_t s = 0; s < ends_.size(); ++s) {
      const std::size_t pos = next[ends_[s]]++;
      incidence_[pos] = s;
      slot_pos_[s] = static_cast<std::uint32_t>(pos);
    }
  }

  std::size_t n_ = 0;
  std::vector<Vertex> ends_;                    // 2m: vertex held by each slot
  std::vector<Degree> degree_;                  // n
  std::vector<Vertex> order_;                   // n: vertices by (degree, id)
  std::vector<std::size_t> class_vertex_begin_; // dmax + 2 offsets into order_
  std::vector<std::size_t> class_slot_begin_;   // dmax + 2 offsets into incidence_
  std::vector<std::size_t> vertex_slot_begin_;  // n offsets into incidence_
  std::vector<std::uint32_t> incidence_;        // 2m slots grouped by vertex
  std::vector<std::uint32_t> slot_pos_;         // 2m: index of each slot in incidence_
  std::vector<std::uint64_t> ids_;
  detail::PairSet edge_set_;
};

// ---------------------------------------------------------------------------
// Degree distribution and joint degree matrix

struct DegreeProfile {
  std::vector<std::size_t> f;                                 // f[d] = #vertices of degree d
  std::map<std::pair<Degree, Degree>, std::size_t> joint;     // (min, max) -> #edges

  std::size_t f_at(Degree d) const noexcept { return d < f.size() ? f[d] : 0; }

  /// J(i, j) = J(j, i).
  std::size_t J(Degree i, Degree j) const {
    auto it = joint.find(std::minmax(i, j));
    return it == joint.end() ? 0 : it->second;
  }

  friend bool operator==(const DegreeProfile&, const DegreeProfile&) = default;
};

inline DegreeProfile degree_profile(const Graph& g) {
  DegreeProfile p;
  p.f.assign(static_cast<std::size_t>(g.max_degree()) + 1, 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) ++p.f[g.degree(v)];
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto [u, v] = g.edge(e);
    ++p.joint[std::minmax(g.degree(u), g.degree(v))];
  }
  return p;
}

// ---------------------------------------------------------------------------
// Edge-list text format

struct LoadReport {
  std::size_t lines = 0;
  std::size_t pairs = 0;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
  std::size_t isolated_vertices = 0;  // ids seen only in dropped self-loops
};

namespace detail {

inline std::uint64_t parse_id(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(line, "expected a non-negative integer vertex id, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace detail

/// Parses "u v" lines ('#' starts a comment line). Vertex ids are compacted
/// to 0..n-1 in ascending original-id order. Self-loops are dropped and
/// repeated pairs collapsed, both counted in `report`.
///
/// With `symmetrize`, (u,v) and (v,u) name the same undirected edge and the
/// second occurrence counts as a duplicate. Without it, the input claims to
/// be an undirected list already, and a reversed pair is rejected.
inline Graph parse_edge_list(std::istream& in, bool symmetrize, LoadReport* report = nullptr) {
  LoadReport rep;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::vector<std::uint64_t> ids;
  std::string line;
  while (std::getline(in, line)) {
    ++rep.lines;
    std::string_view view(line);
    const auto first = view.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || view[first] == '#') continue;
    view.remove_prefix(first);
    std::string_view tokens[2];
    std::size_t count = 0;
    while (!view.empty()) {
      const auto end = view.find_first_of(" \t\r");
      const auto token = view.substr(0, end);
      if (count >= 2) throw ParseError(rep.lines, "expected exactly two vertex ids");
      tokens[count++] = token;
      if (end == std::string_view::npos) break;
      view.remove_prefix(end);
      const auto next = view.find_first_not_of(" \t\r");
      if (next == std::string_view::npos) break;
      view.remove_prefix(next);
    }
    if (count != 2) throw ParseError(rep.lines, "expected exactly two vertex ids");
    const auto a = detail::parse_id(tokens[0], rep.lines);
    const auto b = detail::parse_id(tokens[1], rep.lines);
    ++rep.pairs;
    ids.push_back(a);
    ids.push_back(b);
    if (a == b) {
      ++rep.self_loops;
      continue;
    }
    raw.emplace_back(a, b);
  }

  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto dense = [&](std::uint64_t id) {
    return static_cast<Vertex>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  if (!symmetrize) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> directed(raw);
    std::sort(directed.begin(), directed.end());
    for (const auto& [a, b] : raw) {
      if (a < b && std::binary_search(directed.begin(), directed.end(), std::make_pair(b, a))) {
        throw InvalidInput("pair " + std::to_string(a) + " " + std::to_string(b) +
                           " appears in both directions; load with symmetrization");
      }
    }
  }

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const auto& [a, b] : raw) edges.push_back(Edge{dense(a), dense(b)}.canonical());
  std::sort(edges.begin(), edges.end());
  const auto unique_end = std::unique(edges.begin(), edges.end());
  rep.duplicates = static_cast<std::size_t>(edges.end() - unique_end);
  edges.erase(unique_end, edges.end());
  if (edges.empty()) throw InvalidInput("edge list contains no edges");

  const std::size_t n = ids.size();
  Graph g(n, edges, std::move(ids));
  for (Vertex v = 0; v < g.vertex_count(); ++v) rep.isolated_vertices += g.degree(v) == 0;
  if (report) *report = rep;
  return g;
}

inline Graph load_graph(const std::string& path, bool symmetrize, LoadReport* report = nullptr) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return parse_edge_list(in, symmetrize, report);
}

/// Writes "u v" lines using original ids, smaller id first, sorted.
inline void write_edge_list(std::ostream& out, const Graph& g) {
  // Dense ids are assigned in ascending original-id order, so sorting dense
  // pairs sorts original pairs too.
  for (const auto& e : g.edges()) out << g.original_id(e.u) << ' ' << g.original_id(e.v) << '\n';
}

inline void save_graph(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  write_edge_list(out, g);
  if (!out) throw InvalidInput("write failed for " + path);
}

}  // namespace graphmix
