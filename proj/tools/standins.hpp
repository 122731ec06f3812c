#pragma once

// Deterministic synthetic graphs with the vertex and edge counts of the
// reference corpus. They are built with strong locality so that an
// unconverged swap chain still remembers the starting graph.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "graphmix/graph.hpp"
#include "graphmix/random.hpp"

namespace standins {

using graphmix::Edge;
using graphmix::Graph;
using graphmix::Rng;
using graphmix::Vertex;

struct Spec {
  std::string name;
  std::size_t n;
  std::size_t m;
};

inline const std::vector<Spec>& corpus() {
  static const std::vector<Spec> specs = {
      {"celegans-like", 297, 4296},
      {"netscience-like", 1461, 5484},
      {"power-like", 4941, 13188},
  };
  return specs;
}

namespace detail {

struct Builder {
  std::size_t n;
  graphmix::detail::PairSet seen;
  std::vector<Edge> edges;

  explicit Builder(std::size_t vertices) : n(vertices) {}

  bool add(Vertex a, Vertex b) {
    if (a == b) return false;
    if (!seen.insert(graphmix::pair_key(a, b))) return false;
    edges.push_back(Edge{a, b}.canonical());
    return true;
  }

  Graph finish() {
    std::sort(edges.begin(), edges.end());
    return Graph(n, edges);
  }
};

}  // namespace detail

/// Ring of n vertices with heavy-tailed weights; edges join a weighted
/// random vertex to a nearby one on the ring.
inline Graph ring_local(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> cumulative(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += std::pow(1.0 - rng.uniform(), -1.0 / 1.6);  // Pareto, shape 1.6
    cumulative[i] = total;
  }
  auto pick = [&] {
    const double x = rng.uniform() * total;
    return static_cast<Vertex>(std::upper_bound(cumulative.begin(), cumulative.end(), x) - cumulative.begin());
  };
  detail::Builder b(n);
  for (Vertex v = 0; v < n; ++v) b.add(v, static_cast<Vertex>((v + 1) % n));
  while (b.edges.size() < m) {
    const Vertex a = pick();
    const auto offset = 1 + static_cast<std::int64_t>(std::floor(std::pow(1.0 - rng.uniform(), -1.0) * 2.0)) % 40;
    const auto sign = rng.below(2) == 0 ? 1 : -1;
    const auto c = static_cast<Vertex>(((static_cast<std::int64_t>(a) + sign * offset) % static_cast<std::int64_t>(n) +
                                        static_cast<std::int64_t>(n)) %
                                       static_cast<std::int64_t>(n));
    b.add(a, c);
  }
  return b.finish();
}

/// Collaboration-style graph: small cliques (joint works) over windows of a
/// line of authors, until every author is covered and m edges exist.
inline Graph local_cliques(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  detail::Builder b(n);
  std::vector<std::uint8_t> covered(n, 0);
  std::size_t uncovered = n;
  auto work = [&](Vertex anchor) {
    const std::size_t size = 2 + rng.below(4);  // 2..5 authors
    std::vector<Vertex> authors{anchor};
    while (authors.size() < size) {
      const auto offset = static_cast<std::int64_t>(rng.below(13)) - 6;
      const auto v = static_cast<std::int64_t>(anchor) + offset;
      if (v < 0 || v >= static_cast<std::int64_t>(n)) continue;
      if (std::find(authors.begin(), authors.end(), static_cast<Vertex>(v)) == authors.end()) {
        authors.push_back(static_cast<Vertex>(v));
      }
    }
    for (std::size_t i = 0; i < authors.size() && b.edges.size() < m; ++i) {
      for (std::size_t j = i + 1; j < authors.size() && b.edges.size() < m; ++j) b.add(authors[i], authors[j]);
    }
    for (Vertex v : authors) {
      if (!covered[v]) {
        covered[v] = 1;
        --uncovered;
      }
    }
  };
  for (Vertex v = 0; v < n && b.edges.size() < m; v += 2) work(v);
  while (b.edges.size() < m) work(static_cast<Vertex>(rng.below(n)));
  // Any author still alone gets one co-author so no vertex is isolated.
  for (Vertex v = 0; v < n && uncovered > 0; ++v) {
    if (covered[v]) continue;
    const Vertex w = v + 1 < n ? v + 1 : v - 1;
    b.add(v, w);
    covered[v] = 1;
    --uncovered;
  }
  // Trim back to m without isolating anyone.
  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : b.edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  while (b.edges.size() > m) {
    const std::size_t i = rng.below(b.edges.size());
    const Edge e = b.edges[i];
    if (degree[e.u] < 2 || degree[e.v] < 2) continue;
    --degree[e.u];
    --degree[e.v];
    b.edges[i] = b.edges.back();
    b.edges.pop_back();
  }
  return b.finish();
}

/// Random geometric graph in the unit square: every point joins its nearest
/// neighbor, then the shortest remaining pairs are added until m edges.
inline Graph geometric(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.uniform();
    y[i] = rng.uniform();
  }
  // Grid buckets for neighbor search.
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::floor(std::sqrt(static_cast<double>(n) / 4.0))));
  std::vector<std::vector<Vertex>> grid(cells * cells);
  auto cell_of = [&](double c) { return std::min(cells - 1, static_cast<std::size_t>(c * static_cast<double>(cells))); };
  for (Vertex v = 0; v < n; ++v) grid[cell_of(y[v]) * cells + cell_of(x[v])].push_back(v);

  struct Candidate {
    double d2;
    Vertex a, b;
  };
  std::vector<Candidate> candidates;
  std::vector<Vertex> nearest(n);
  constexpr std::size_t per_vertex = 12;
  for (Vertex v = 0; v < n; ++v) {
    std::vector<std::pair<double, Vertex>> local;
    const auto cx = static_cast<std::int64_t>(cell_of(x[v])), cy = static_cast<std::int64_t>(cell_of(y[v]));
    for (std::int64_t r = 1; local.size() < per_vertex + 1; ++r) {
      local.clear();
      for (std::int64_t gy = cy - r; gy <= cy + r; ++gy) {
        for (std::int64_t gx = cx - r; gx <= cx + r; ++gx) {
          if (gx < 0 || gy < 0 || gx >= static_cast<std::int64_t>(cells) || gy >= static_cast<std::int64_t>(cells)) continue;
          for (Vertex w : grid[static_cast<std::size_t>(gy) * cells + static_cast<std::size_t>(gx)]) {
            if (w == v) continue;
            const double dx = x[v] - x[w], dy = y[v] - y[w];
            local.emplace_back(dx * dx + dy * dy, w);
          }
        }
      }
      if (r > static_cast<std::int64_t>(cells)) break;
    }
    std::sort(local.begin(), local.end());
    if (local.size() > per_vertex) local.resize(per_vertex);
    nearest[v] = local.front().second;
    for (const auto& [d2, w] : local) {
      if (v < w) candidates.push_back({d2, v, w});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& p, const Candidate& q) { return p.d2 != q.d2 ? p.d2 < q.d2 : std::tie(p.a, p.b) < std::tie(q.a, q.b); });
  detail::Builder b(n);
  for (Vertex v = 0; v < n; ++v) b.add(v, nearest[v]);
  for (const auto& c : candidates) {
    if (b.edges.size() >= m) break;
    b.add(c.a, c.b);
  }
  return b.finish();
}

inline Graph build(const Spec& spec, std::uint64_t seed = 20240101) {
  if (spec.name == "celegans-like") return ring_local(spec.n, spec.m, seed);
  if (spec.name == "netscience-like") return local_cliques(spec.n, spec.m, seed);
  return geometric(spec.n, spec.m, seed);
}

}  // namespace standins
