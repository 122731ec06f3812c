#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "graphmix/error.hpp"
#include "graphmix/graph.hpp"
#include "graphmix/random.hpp"

namespace graphmix {

enum class SwapMode { dd, jdd };

inline std::string_view to_string(SwapMode mode) noexcept { return mode == SwapMode::dd ? "dd" : "jdd"; }

inline SwapMode parse_swap_mode(std::string_view text) {
  if (text == "dd") return SwapMode::dd;
  if (text == "jdd") return SwapMode::jdd;
  throw InvalidInput("unknown swap mode '" + std::string(text) + "' (expected dd or jdd)");
}

enum class StepOutcome { applied, rejected };

/// Edges removed and added by one applied swap, smaller id first.
struct EdgeDelta {
  Edge removed[2];
  Edge added[2];
};

/// What observers see after each chain step. `delta` is meaningful only when
/// the step was applied.
struct StepEvent {
  std::uint64_t step = 0;  // 1-based index of the step just taken
  StepOutcome outcome = StepOutcome::rejected;
  EdgeDelta delta{};
};

struct ChainStats {
  std::uint64_t steps = 0;
  std::uint64_t applied = 0;
  std::uint64_t rejected = 0;
  SwapMode mode = SwapMode::dd;
  std::uint64_t seed = 0;

  friend bool operator==(const ChainStats&, const ChainStats&) = default;
};

namespace detail {

inline StepOutcome apply_exchange(Graph& g, EndpointSlot a, EndpointSlot b, EdgeDelta* delta) {
  if (!g.can_exchange(a, b)) return StepOutcome::rejected;
  if (delta) {
    delta->removed[0] = g.edge(a.edge()).canonical();
    delta->removed[1] = g.edge(b.edge()).canonical();
  }
  g.exchange(a, b);
  if (delta) {
    delta->added[0] = g.edge(a.edge()).canonical();
    delta->added[1] = g.edge(b.edge()).canonical();
  }
  return StepOutcome::applied;
}

}  // namespace detail

/// One degree-preserving swap attempt.
///
/// Draws two oriented edges e = (a,b) and e' = (c,d) independently and
/// uniformly over the 2m orientations, then proposes (a,d) and (c,b). The
/// proposal is rejected (graph untouched, step still counted) when e == e',
/// or when it would create a self-loop or a parallel edge.
inline StepOutcome dd_swap_step(Graph& g, Rng& rng, EdgeDelta* delta = nullptr) {
  if (g.edge_count() < 2) throw InvalidState("degree-preserving swap needs at least two edges");
  const EndpointSlot first = g.sample_uniform_edge_endpoint(rng);   // a at first, b opposite
  const EndpointSlot second = g.sample_uniform_edge_endpoint(rng);  // c at second, d opposite
  // Exchanging b and d yields {a,d} and {c,b}.
  return detail::apply_exchange(g, first.opposite(), second.opposite(), delta);
}

/// One joint-degree-preserving swap attempt.
///
/// u1 is a uniform endpoint with incident edge (u1,v). u2 is a uniform vertex
/// of degree d(u1) (u1 itself included) with a uniform neighbor w. The
/// proposal (u1,w), (u2,v) is rejected when u2 == u1 or when it would create
/// a self-loop or parallel edge.
inline StepOutcome jdd_swap_step(Graph& g, Rng& rng, EdgeDelta* delta = nullptr) {
  if (g.edge_count() < 2) throw InvalidState("joint-degree-preserving swap needs at least two edges");
  const EndpointSlot first = g.sample_uniform_edge_endpoint(rng);
  const Vertex u1 = g.vertex_at(first);
  // Degree class of u1 is never empty, so the draw always succeeds.
  const EndpointSlot second = *g.try_sample_edge_at_degree(g.degree(u1), std::nullopt, rng);
  if (g.vertex_at(second) == u1) return StepOutcome::rejected;
  // Exchanging v and w yields {u1,w} and {u2,v}.
  return detail::apply_exchange(g, first.opposite(), second.opposite(), delta);
}

inline StepOutcome swap_step(Graph& g, SwapMode mode, Rng& rng, EdgeDelta* delta = nullptr) {
  return mode == SwapMode::dd ? dd_swap_step(g, rng, delta) : jdd_swap_step(g, rng, delta);
}

/// Runs exactly `steps` swap attempts, rejections included. Each observer is
/// called once per step as `obs(const Graph&, const StepEvent&)`.
template <class... Observers>
ChainStats run_chain(Graph& g, SwapMode mode, std::uint64_t steps, Rng& rng, Observers&&... observers) {
  ChainStats stats;
  stats.mode = mode;
  if (steps == 0) return stats;
  if (g.edge_count() < 2) throw InvalidState("swap chain needs at least two edges");
  StepEvent event;
  for (std::uint64_t t = 1; t <= steps; ++t) {
    event.step = t;
    event.outcome = swap_step(g, mode, rng, sizeof...(Observers) > 0 ? &event.delta : nullptr);
    if (event.outcome == StepOutcome::applied) {
      ++stats.applied;
    } else {
      ++stats.rejected;
    }
    (observers(static_cast<const Graph&>(g), static_cast<const StepEvent&>(event)), ...);
  }
  stats.steps = steps;
  return stats;
}

/// Convenience overload owning its generator; records `seed` in the stats.
template <class... Observers>
ChainStats run_chain_seeded(Graph& g, SwapMode mode, std::uint64_t steps, std::uint64_t seed, Observers&&... observers) {
  Rng rng(seed);
  ChainStats stats = run_chain(g, mode, steps, rng, std::forward<Observers>(observers)...);
  stats.seed = seed;
  return stats;
}

}  // namespace graphmix
