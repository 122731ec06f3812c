#include <gtest/gtest.h>

#include <map>

#include "graphmix/graph.hpp"
#include "graphmix/rewire.hpp"
#include "support.hpp"

using namespace graphmix;
using namespace testing_support;

TEST(DdSwap, ManualSwapOnPathPlusEdge) {
  // Edges: 0:(0,1) 1:(1,2) 2:(3,4). e = (0,1), e' = (3,4).
  auto g = make_graph(5, {{0, 1}, {1, 2}, {3, 4}});
  const auto before = degree_profile(g).f;
  const EndpointSlot a{0}, c{4};  // slot 0 holds 0, slot 4 holds 3
  ASSERT_EQ(g.vertex_at(a), 0u);
  ASSERT_EQ(g.vertex_at(c), 3u);
  EdgeDelta delta;
  ASSERT_EQ(detail::apply_exchange(g, a.opposite(), c.opposite(), &delta), StepOutcome::applied);
  EXPECT_TRUE(g.has_edge(0, 4));
  EXPECT_TRUE(g.has_edge(3, 1));
  EXPECT_FALSE(g.has_edge(0, 1));
  EXPECT_FALSE(g.has_edge(3, 4));
  EXPECT_EQ(degree_profile(g).f, before);
  EXPECT_EQ(delta.removed[0], (Edge{0, 1}));
  EXPECT_EQ(delta.removed[1], (Edge{3, 4}));
  EXPECT_EQ(delta.added[0], (Edge{0, 4}));
  EXPECT_EQ(delta.added[1], (Edge{1, 3}));
  EXPECT_TRUE(g.index_consistent());
}

TEST(DdSwap, SelfLoopProposalRejected) {
  // e = (0,1), e' = (1,2): proposal (0,2), (1,1).
  auto g = path(3);
  const auto edges = g.edges();
  ASSERT_EQ(g.vertex_at({0}), 0u);
  ASSERT_EQ(g.vertex_at({2}), 1u);
  EXPECT_EQ(detail::apply_exchange(g, EndpointSlot{0}.opposite(), EndpointSlot{2}.opposite(), nullptr),
            StepOutcome::rejected);
  EXPECT_EQ(g.edges(), edges);
}

TEST(DdSwap, ParallelEdgeProposalRejected) {
  // e = (0,1), e' = (2,3) with (0,3) already present.
  auto g = make_graph(4, {{0, 1}, {2, 3}, {0, 3}});
  const auto edges = g.edges();
  EXPECT_EQ(detail::apply_exchange(g, EndpointSlot{1}, EndpointSlot{3}, nullptr), StepOutcome::rejected);
  EXPECT_EQ(g.edges(), edges);
}

TEST(DdSwap, SameEdgeTwiceRejected) {
  auto g = make_graph(4, {{0, 1}, {2, 3}});
  EXPECT_FALSE(g.can_exchange(EndpointSlot{0}, EndpointSlot{1}));
  EXPECT_FALSE(g.can_exchange(EndpointSlot{1}, EndpointSlot{1}));
}

TEST(DdSwap, NeedsTwoEdges) {
  auto g = make_graph(2, {{0, 1}});
  Rng rng(1);
  EXPECT_THROW(dd_swap_step(g, rng), InvalidState);
  EXPECT_THROW(jdd_swap_step(g, rng), InvalidState);
  EXPECT_THROW(run_chain(g, SwapMode::dd, 1, rng), InvalidState);
}

TEST(JddSwap, UniqueDegreeClassAlwaysRejected) {
  // The hub is alone in its class and leaves can only trade the hub.
  auto g = star3();
  const auto edges = g.edges();
  Rng rng(2);
  const auto stats = run_chain(g, SwapMode::jdd, 5000, rng);
  EXPECT_EQ(stats.applied, 0u);
  EXPECT_EQ(stats.rejected, 5000u);
  EXPECT_EQ(g.edges(), edges);
}

TEST(JddSwap, TwoDisjointEdges) {
  auto g = make_graph(4, {{0, 1}, {2, 3}});
  // u1 = 0 with (0,1); u2 = 2 with neighbor 3: exchange 1 and 3.
  ASSERT_EQ(detail::apply_exchange(g, EndpointSlot{1}, EndpointSlot{3}, nullptr), StepOutcome::applied);
  EXPECT_TRUE(g.has_edge(0, 3));
  EXPECT_TRUE(g.has_edge(2, 1));
  EXPECT_EQ(degree_profile(g).J(1, 1), 2u);

  // The chain itself reaches all three perfect matchings of 4 vertices.
  Rng rng(3);
  std::map<std::vector<Edge>, int> seen;
  for (int i = 0; i < 3000; ++i) {
    jdd_swap_step(g, rng);
    ++seen[g.edges()];
    ASSERT_EQ(degree_profile(g).J(1, 1), 2u);
  }
  EXPECT_EQ(seen.size(), 3u);
}

TEST(RunChain, ZeroStepsLeavesGraph) {
  auto g = random_graph(20, 40, 1);
  const auto edges = g.edges();
  Rng rng(1);
  const auto stats = run_chain(g, SwapMode::dd, 0, rng);
  EXPECT_EQ(stats.steps, 0u);
  EXPECT_EQ(g.edges(), edges);
}

TEST(RunChain, DdPreservesDegreesPerStep) {
  auto g = random_graph(60, 180, 2);
  const auto f = degree_profile(g).f;
  std::vector<Degree> deg(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) deg[v] = g.degree(v);
  Rng rng(5);
  std::uint64_t calls = 0;
  const auto stats = run_chain(g, SwapMode::dd, 20000, rng, [&](const Graph& h, const StepEvent& ev) {
    ++calls;
    ASSERT_EQ(ev.step, calls);
    if (ev.outcome == StepOutcome::applied) {
      for (const auto& e : ev.delta.removed) ASSERT_FALSE(h.has_edge(e.u, e.v));
      for (const auto& e : ev.delta.added) ASSERT_TRUE(h.has_edge(e.u, e.v));
    }
  });
  EXPECT_EQ(calls, 20000u);
  EXPECT_EQ(stats.steps, 20000u);
  EXPECT_EQ(stats.applied + stats.rejected, stats.steps);
  EXPECT_GT(stats.applied, 0u);
  EXPECT_EQ(degree_profile(g).f, f);
  for (Vertex v = 0; v < g.vertex_count(); ++v) EXPECT_EQ(g.degree(v), deg[v]);
  EXPECT_EQ(g.edge_count(), 180u);
  EXPECT_TRUE(g.index_consistent());
}

TEST(RunChain, JddPreservesJointDegrees) {
  auto g = random_graph(60, 180, 3);
  const auto before = degree_profile(g);
  Rng rng(6);
  const auto stats = run_chain(g, SwapMode::jdd, 20000, rng);
  EXPECT_GT(stats.applied, 0u);
  EXPECT_EQ(degree_profile(g), before);
  EXPECT_TRUE(g.index_consistent());
}

TEST(RunChain, FixedSeedBitReproducible) {
  for (auto mode : {SwapMode::dd, SwapMode::jdd}) {
    auto a = random_graph(50, 150, 4), b = random_graph(50, 150, 4);
    const auto sa = run_chain_seeded(a, mode, 10000, 99);
    const auto sb = run_chain_seeded(b, mode, 10000, 99);
    EXPECT_EQ(sa, sb);
    EXPECT_EQ(sa.seed, 99u);
    EXPECT_EQ(a.edges(), b.edges());
  }
}

namespace {

// Visits per reachable graph, sampling every `gap` steps.
std::map<std::vector<Edge>, long> visit_counts(Graph g, SwapMode mode, long samples, long gap, std::uint64_t seed) {
  Rng rng(seed);
  std::map<std::vector<Edge>, long> counts;
  run_chain(g, mode, 1000, rng);
  for (long i = 0; i < samples; ++i) {
    run_chain(g, mode, static_cast<std::uint64_t>(gap), rng);
    ++counts[g.edges()];
  }
  return counts;
}

double chi_square_uniform(const std::map<std::vector<Edge>, long>& counts, long samples) {
  const double expected = static_cast<double>(samples) / static_cast<double>(counts.size());
  double chi2 = 0.0;
  for (const auto& [graph, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  return chi2;
}

}  // namespace

TEST(RunChain, FourCycleDdStationaryIsUniform) {
  // Brute-force enumeration: 3 labeled simple graphs have degrees (2,2,2,2).
  const long samples = 30000;
  const auto counts = visit_counts(cycle(4), SwapMode::dd, samples, 50, 8);
  ASSERT_EQ(counts.size(), 3u);
  EXPECT_LT(chi_square_uniform(counts, samples), 9.21034037197618);  // 0.99, 2 dof
}

TEST(RunChain, SixVertexDdStationaryIsUniform) {
  // Brute-force enumeration: 17 labeled simple graphs with degrees (3,3,2,2,1,1).
  const auto g = make_graph(6, {{0, 1}, {0, 2}, {0, 4}, {1, 3}, {1, 5}, {2, 3}});
  const long samples = 34000;
  const auto counts = visit_counts(g, SwapMode::dd, samples, 100, 9);
  ASSERT_EQ(counts.size(), 17u);
  EXPECT_LT(chi_square_uniform(counts, samples), 31.999926908815176);  // 0.99, 16 dof
}

TEST(SwapMode, ParseAndPrint) {
  EXPECT_EQ(parse_swap_mode("dd"), SwapMode::dd);
  EXPECT_EQ(parse_swap_mode("jdd"), SwapMode::jdd);
  EXPECT_EQ(to_string(SwapMode::jdd), "jdd");
  EXPECT_THROW(parse_swap_mode("xdd"), InvalidInput);
}
