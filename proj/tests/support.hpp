#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "graphmix/graph.hpp"
#include "graphmix/random.hpp"

namespace testing_support {

using graphmix::Edge;
using graphmix::Graph;
using graphmix::Rng;
using graphmix::Vertex;

inline Graph make_graph(std::size_t n, std::initializer_list<Edge> edges) {
  std::vector<Edge> list(edges);
  return Graph(n, list);
}

inline Graph triangle() { return make_graph(3, {{0, 1}, {1, 2}, {0, 2}}); }
inline Graph star3() { return make_graph(4, {{0, 1}, {0, 2}, {0, 3}}); }
inline Graph k4() { return make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }
inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  return Graph(n, e);
}
inline Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex v = 0; v < n; ++v) e.push_back({v, static_cast<Vertex>((v + 1) % n)});
  return Graph(n, e);
}

inline Graph parse(const std::string& text, bool symmetrize = true, graphmix::LoadReport* report = nullptr) {
  std::istringstream in(text);
  return graphmix::parse_edge_list(in, symmetrize, report);
}

/// Erdos-Renyi G(n, m) without loops or repeats.
inline Graph random_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  graphmix::detail::PairSet seen;
  std::vector<Edge> edges;
  while (edges.size() < m) {
    const auto a = static_cast<Vertex>(rng.below(n)), b = static_cast<Vertex>(rng.below(n));
    if (a == b || !seen.insert(graphmix::pair_key(a, b))) continue;
    edges.push_back({a, b});
  }
  return Graph(n, edges);
}

/// Random relabeling of a graph.
inline Graph permuted(const Graph& g, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vertex> perm(g.vertex_count());
  for (Vertex v = 0; v < perm.size(); ++v) perm[v] = v;
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) edges.push_back({perm[e.u], perm[e.v]});
  return Graph(g.vertex_count(), edges);
}

/// Two-state Markov series with P(0->1) = alpha, P(1->0) = beta, started
/// from stationarity.
inline std::vector<std::uint8_t> markov_bits(std::size_t length, double alpha, double beta, Rng& rng) {
  std::vector<std::uint8_t> out(length);
  bool state = rng.bernoulli(alpha / (alpha + beta));
  for (auto& b : out) {
    b = state;
    state = state ? !rng.bernoulli(beta) : rng.bernoulli(alpha);
  }
  return out;
}

inline std::vector<std::uint8_t> bernoulli_bits(std::size_t length, double p, Rng& rng) {
  std::vector<std::uint8_t> out(length);
  for (auto& b : out) b = rng.bernoulli(p);
  return out;
}

}  // namespace testing_support
