#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "graphmix/error.hpp"
#include "graphmix/graph.hpp"

namespace graphmix {

/// 3 * triangles / wedges, wedges = sum_v C(d_v, 2).
inline double global_clustering(const Csr& adj) {
  const std::size_t n = adj.vertex_count();
  double wedges = 0.0;
  for (Vertex v = 0; v < n; ++v) {
    const double d = static_cast<double>(adj.neighbors(v).size());
    wedges += d * (d - 1.0) / 2.0;
  }
  if (wedges == 0.0) throw UndefinedMetric("clustering is undefined on a graph without wedges");

  // Orient each edge from lower to higher (degree, id) rank and intersect
  // the forward lists; every triangle is found exactly once.
  auto rank_less = [&](Vertex a, Vertex b) {
    const auto da = adj.neighbors(a).size(), db = adj.neighbors(b).size();
    return da != db ? da < db : a < b;
  };
  std::vector<std::vector<Vertex>> forward(n);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : adj.neighbors(v)) {
      if (rank_less(v, w)) forward[v].push_back(w);
    }
  }
  std::uint64_t triangles = 0;
  for (Vertex v = 0; v < n; ++v) {
    const auto& fv = forward[v];
    for (Vertex w : fv) {
      const auto& fw = forward[w];
      auto i = fv.begin();
      auto j = fw.begin();
      while (i != fv.end() && j != fw.end()) {
        if (*i < *j) {
          ++i;
        } else if (*j < *i) {
          ++j;
        } else {
          ++triangles;
          ++i;
          ++j;
        }
      }
    }
  }
  return 3.0 * static_cast<double>(triangles) / wedges;
}

inline double global_clustering(const Graph& g) { return global_clustering(g.csr()); }

struct DiameterResult {
  std::uint32_t value = 0;
  bool exact = true;  // false: value is a lower bound
};

struct DiameterOptions {
  // Components up to this size are solved by BFS from every vertex.
  std::size_t all_pairs_limit = 5000;
  // BFS budget for the fringe refinement on larger components.
  std::size_t max_bfs = 2000;
};

namespace detail {

constexpr std::uint32_t unreached = std::numeric_limits<std::uint32_t>::max();

// Fills dist (reset by the caller to `unreached` on the touched set) and
// returns the eccentricity of `source`, with `far` one of the farthest vertices.
inline std::uint32_t bfs(const Csr& adj, Vertex source, std::vector<std::uint32_t>& dist,
                         std::vector<Vertex>& queue, Vertex* far = nullptr) {
  queue.clear();
  queue.push_back(source);
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    for (Vertex w : adj.neighbors(v)) {
      if (dist[w] == unreached) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  if (far) *far = queue.back();
  const std::uint32_t ecc = dist[queue.back()];
  return ecc;
}

inline void reset(std::vector<std::uint32_t>& dist, const std::vector<Vertex>& touched) {
  for (Vertex v : touched) dist[v] = unreached;
}

}  // namespace detail

/// Vertices of the largest connected component (ties: the one holding the
/// smallest vertex id), in BFS order from its smallest vertex.
inline std::vector<Vertex> largest_component(const Csr& adj) {
  const std::size_t n = adj.vertex_count();
  std::vector<std::uint32_t> dist(n, detail::unreached);
  std::vector<Vertex> queue, best;
  for (Vertex s = 0; s < n; ++s) {
    if (dist[s] != detail::unreached) continue;
    detail::bfs(adj, s, dist, queue);
    if (queue.size() > best.size()) best = queue;
  }
  return best;
}

/// Longest shortest path inside the largest connected component.
///
/// Small components: BFS from every vertex. Larger ones: iFUB from a
/// four-sweep center, exact when it closes the gap within the BFS budget,
/// otherwise the best lower bound found.
inline DiameterResult diameter(const Csr& adj, const DiameterOptions& opt = {}) {
  const std::size_t n = adj.vertex_count();
  DiameterResult out;
  if (n == 0) return out;
  const auto comp = largest_component(adj);
  if (comp.size() <= 1) return out;

  std::vector<std::uint32_t> dist(n, detail::unreached);
  std::vector<Vertex> queue;
  auto ecc = [&](Vertex s, Vertex* far = nullptr) {
    const auto e = detail::bfs(adj, s, dist, queue, far);
    detail::reset(dist, queue);
    return e;
  };

  if (comp.size() <= opt.all_pairs_limit) {
    std::uint32_t best = 0;
    for (Vertex s : comp) best = std::max(best, ecc(s));
    out.value = best;
    return out;
  }

  // Four-sweep: two double sweeps, each ending at the midpoint of the path.
  std::size_t budget = opt.max_bfs;
  std::uint32_t lower = 0;
  auto midpoint = [&](Vertex a, Vertex b) {
    // BFS from a, walk back from b half the distance.
    detail::bfs(adj, a, dist, queue);
    const std::uint32_t d = dist[b];
    Vertex cur = b;
    while (dist[cur] > d / 2) {
      for (Vertex w : adj.neighbors(cur)) {
        if (dist[w] + 1 == dist[cur]) {
          cur = w;
          break;
        }
      }
    }
    detail::reset(dist, queue);
    return cur;
  };
  Vertex start = comp.front();
  for (Vertex v : comp) {
    if (adj.neighbors(v).size() > adj.neighbors(start).size()) start = v;
  }
  Vertex a1, b1, a2, b2;
  lower = std::max(lower, ecc(start, &a1));
  lower = std::max(lower, ecc(a1, &b1));
  const Vertex r2 = midpoint(a1, b1);
  lower = std::max(lower, ecc(r2, &a2));
  lower = std::max(lower, ecc(a2, &b2));
  const Vertex center = midpoint(a2, b2);
  budget = budget > 6 ? budget - 6 : 0;  // sweeps so far

  // Levels around the center.
  detail::bfs(adj, center, dist, queue);
  std::vector<std::uint32_t> level(n, detail::unreached);
  for (Vertex v : queue) level[v] = dist[v];
  const std::uint32_t center_ecc = dist[queue.back()];
  std::vector<Vertex> by_level = queue;  // already sorted by level
  detail::reset(dist, queue);
  lower = std::max(lower, center_ecc);
  std::uint32_t upper = 2 * center_ecc;

  std::size_t pos = by_level.size();
  for (std::uint32_t i = center_ecc; i >= 1 && upper > lower; --i) {
    std::uint32_t fringe_max = 0;
    while (pos > 0 && level[by_level[pos - 1]] == i) {
      if (budget == 0) {
        out.value = lower;
        out.exact = false;
        return out;
      }
      --budget;
      fringe_max = std::max(fringe_max, ecc(by_level[--pos]));
    }
    lower = std::max(lower, fringe_max);
    if (lower > 2 * (i - 1)) break;
    upper = 2 * (i - 1);
  }
  out.value = lower;
  return out;
}

inline DiameterResult diameter(const Graph& g, const DiameterOptions& opt = {}) { return diameter(g.csr(), opt); }

struct EigenOptions {
  double tol = 1e-8;
  std::size_t max_iterations = 200000;
};

/// Largest eigenvalue of L = D - A by power iteration.
///
/// Iterates on L - (d_max/2) I, whose dominant eigenvalue is lambda_max -
/// d_max/2 because lambda_max >= d_max + 1 on any graph with an edge. Stops
/// when ||L x - lambda x|| <= tol * lambda. The start vector is fixed, so the
/// result is bit-stable.
inline double max_laplacian_eigenvalue(const Csr& adj, const EigenOptions& opt = {}) {
  const std::size_t n = adj.vertex_count();
  if (n < 2) throw InvalidInput("Laplacian eigenvalue needs at least two vertices");
  std::size_t dmax = 0;
  for (Vertex v = 0; v < n; ++v) dmax = std::max(dmax, adj.neighbors(v).size());
  if (dmax == 0) return 0.0;
  const double shift = 0.5 * static_cast<double>(dmax);

  auto apply_laplacian = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (Vertex v = 0; v < n; ++v) {
      const auto nb = adj.neighbors(v);
      double s = static_cast<double>(nb.size()) * x[v];
      for (Vertex w : nb) s -= x[w];
      y[v] = s;
    }
  };
  auto normalize = [](std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    s = std::sqrt(s);
    for (double& v : x) v /= s;
  };

  std::vector<double> x(n), lx(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + static_cast<double>(i % 97) / 97.0 - 0.5 * static_cast<double>(i % 2);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : x) v -= mean;  // drop the constant null vector
  normalize(x);

  double lambda = 0.0;
  double best_residual = std::numeric_limits<double>::infinity();
  double best_lambda = 0.0;
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    apply_laplacian(x, lx);
    lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) lambda += x[i] * lx[i];
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = lx[i] - lambda * x[i];
      res += r * r;
    }
    res = std::sqrt(res);
    if (res < best_residual) {
      best_residual = res;
      best_lambda = lambda;
    }
    if (res <= opt.tol * lambda) return lambda;
    for (std::size_t i = 0; i < n; ++i) x[i] = lx[i] - shift * x[i];
    normalize(x);
  }
  throw ConvergenceError("power iteration did not reach the residual tolerance", best_lambda);
}

inline double max_laplacian_eigenvalue(const Graph& g, const EigenOptions& opt = {}) {
  return max_laplacian_eigenvalue(g.csr(), opt);
}

}  // namespace graphmix
