#pragma once

#include <array>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>

#include "graphmix/error.hpp"
#include "graphmix/graph.hpp"
#include "graphmix/rewire.hpp"

namespace graphmix {

/// Per-step transition probabilities of the two-state chain followed by one
/// labeled vertex pair. State 0 means the edge is absent.
struct TransitionRates {
  double alpha = 0.0;  // 0 -> 1, edge appears
  double beta = 0.0;   // 1 -> 0, edge removed
};

/// Two-state chain for one vertex pair under a swap chain.
struct EdgeChainModel {
  double alpha = 0.0;
  double beta = 0.0;
  SwapMode mode = SwapMode::dd;
  Degree du = 0;
  Degree dv = 0;
  std::size_t m = 0;
  // Joint-degree context; zero in dd mode.
  std::size_t f_du = 0;
  std::size_t f_dv = 0;
  std::size_t j_dudv = 0;
  // Joint-degree mode with f(du) = f(dv) = 1: the edge can never move.
  bool frozen = false;

  double gamma() const noexcept { return alpha + beta; }
  /// Second eigenvalue of T; the first is 1.
  double decay_rate() const noexcept { return 1.0 - gamma(); }

  /// T(i, j) = Pr[next = j | current = i].
  double transition(int from, int to) const noexcept {
    if (from == 0) return to == 0 ? 1.0 - alpha : alpha;
    return to == 0 ? beta : 1.0 - beta;
  }
};

/// alpha = du dv / (2 m^2), beta = 1 - (1 - 1/m)^2.
inline TransitionRates dd_alpha_beta(Degree du, Degree dv, std::size_t m) {
  if (m == 0) throw InvalidInput("edge count must be positive");
  if (du == 0 || dv == 0) throw InvalidInput("degrees must be positive");
  const double md = static_cast<double>(m);
  // 1 - (1 - 1/m)^2 expanded as (2m - 1) / m^2 to avoid cancellation.
  return {static_cast<double>(du) * static_cast<double>(dv) / (2.0 * md * md), (2.0 * md - 1.0) / (md * md)};
}

/// beta = 1/m + (f_du - 1)/(2 m f_du) + (f_dv - 1)/(2 m f_dv) and the
/// heuristic alpha = 2 J(du,dv) / (m f_du f_dv).
inline TransitionRates jdd_alpha_beta(std::size_t m, std::size_t f_du, std::size_t f_dv, std::size_t j_dudv) {
  if (m == 0) throw InvalidInput("edge count must be positive");
  if (f_du == 0 || f_dv == 0) throw InvalidInput("degree class sizes must be positive");
  const double md = static_cast<double>(m);
  const double fu = static_cast<double>(f_du);
  const double fv = static_cast<double>(f_dv);
  const double beta = 1.0 / md + (fu - 1.0) / (2.0 * md * fu) + (fv - 1.0) / (2.0 * md * fv);
  const double alpha = 2.0 * static_cast<double>(j_dudv) / (md * fu * fv);
  return {alpha, beta};
}

inline EdgeChainModel dd_model(Degree du, Degree dv, std::size_t m) {
  const auto r = dd_alpha_beta(du, dv, m);
  EdgeChainModel model;
  model.alpha = r.alpha;
  model.beta = r.beta;
  model.mode = SwapMode::dd;
  model.du = du;
  model.dv = dv;
  model.m = m;
  return model;
}

inline EdgeChainModel jdd_model(Degree du, Degree dv, std::size_t m, std::size_t f_du, std::size_t f_dv,
                                std::size_t j_dudv) {
  const auto r = jdd_alpha_beta(m, f_du, f_dv, j_dudv);
  EdgeChainModel model;
  model.alpha = r.alpha;
  model.beta = r.beta;
  model.mode = SwapMode::jdd;
  model.du = du;
  model.dv = dv;
  model.m = m;
  model.f_du = f_du;
  model.f_dv = f_dv;
  model.j_dudv = j_dudv;
  model.frozen = f_du == 1 && f_dv == 1;
  return model;
}

/// Model for the pair (u, v) of `g` under `mode`, reading degrees, f and J
/// from the graph.
inline EdgeChainModel model_for_pair(const Graph& g, const DegreeProfile& profile, Vertex u, Vertex v,
                                     SwapMode mode) {
  const Degree du = g.degree(u), dv = g.degree(v);
  if (mode == SwapMode::dd) return dd_model(du, dv, g.edge_count());
  return jdd_model(du, dv, g.edge_count(), profile.f_at(du), profile.f_at(dv), profile.J(du, dv));
}

struct Distribution2 {
  double p0 = 0.0;
  double p1 = 0.0;
};

/// Fixed point of the chain: p1 = alpha / (alpha + beta).
inline Distribution2 stationary(const EdgeChainModel& model) {
  const double gamma = model.gamma();
  if (!(gamma > 0.0)) throw DegenerateChain("alpha + beta = 0: chain never moves");
  return {model.beta / gamma, model.alpha / gamma};
}

/// Rounds up, ignoring excess from floating-point noise only.
inline std::uint64_t ceil_steps(double x) {
  return static_cast<std::uint64_t>(std::ceil(x * (1.0 - 4.0 * DBL_EPSILON)));
}

/// N = ceil((m/2) ln(1/eps)) for dd chains, ceil(m ln(1/eps)) for jdd chains.
inline std::uint64_t stopping_steps(std::size_t m, double epsilon, SwapMode mode) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("epsilon must lie in (0, 1)");
  const double scale = mode == SwapMode::dd ? 0.5 * static_cast<double>(m) : static_cast<double>(m);
  return ceil_steps(scale * std::log(1.0 / epsilon));
}

/// Smallest alpha + beta any pair can have under `mode` per the analytic
/// bound the stopping rule relies on: 2/m for dd, 1/m for jdd.
inline double gamma_lower_bound(std::size_t m, SwapMode mode) {
  return (mode == SwapMode::dd ? 2.0 : 1.0) / static_cast<double>(m);
}

/// ||p_N - pi||_2 for p_N the state distribution after N steps from
/// `initial`, via the eigen-decomposition. The deviation from pi lies along
/// (1, -1), so it equals |c2| |1 - gamma|^N with |c2| = sqrt(2) |p0 - pi0|.
inline double decay_error(const EdgeChainModel& model, std::uint64_t steps, Distribution2 initial) {
  const auto pi = stationary(model);
  const double c2 = std::sqrt(2.0) * std::abs(initial.p0 - pi.p0);
  if (c2 == 0.0) return 0.0;
  const double lambda = std::abs(model.decay_rate());
  if (lambda == 0.0) return steps == 0 ? c2 : 0.0;
  return c2 * std::pow(lambda, static_cast<double>(steps));
}

/// |c2| for `initial`; decay_error(model, N, initial) <= c2 * |1 - gamma|^N.
inline double decay_coefficient(const EdgeChainModel& model, Distribution2 initial) {
  const auto pi = stationary(model);
  return std::sqrt(2.0) * std::abs(initial.p0 - pi.p0);
}

}  // namespace graphmix
