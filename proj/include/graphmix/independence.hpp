#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "graphmix/contingency.hpp"
#include "graphmix/edge_model.hpp"
#include "graphmix/error.hpp"
#include "graphmix/normal.hpp"
#include "graphmix/parallel.hpp"
#include "graphmix/series.hpp"

namespace graphmix {

/// Series length needed to estimate the mean of a stationary two-state
/// chain to within +-r with confidence s:
///   n' = ceil( sigma^2 / (r / Phi^{-1}((1 + s) / 2))^2 ),
///   sigma^2 = alpha beta (2 - alpha - beta) / (alpha + beta)^3.
inline std::uint64_t required_length(double alpha, double beta, double r = 0.01, double s = 0.95) {
  if (!(alpha > 0.0 && alpha <= 1.0 && beta > 0.0 && beta <= 1.0)) {
    throw InvalidInput("required_length needs alpha, beta in (0, 1]");
  }
  if (!(r > 0.0)) throw InvalidInput("mean tolerance r must be positive");
  if (!(s > 0.0 && s < 1.0)) throw InvalidInput("confidence s must lie in (0, 1)");
  const double gamma = alpha + beta;
  const double sigma2 = alpha * beta * (2.0 - gamma) / (gamma * gamma * gamma);
  const double z = normal_quantile(0.5 * (1.0 + s));
  const double half_width = r / z;
  return ceil_steps(sigma2 / (half_width * half_width));
}

/// Default thinning ladder {1, 2, 4, ..., 32} * m.
inline std::vector<std::uint64_t> default_k_schedule(std::size_t m) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 1; f <= 32; f *= 2) out.push_back(f * m);
  return out;
}

struct SweepOptions {
  std::vector<std::uint64_t> k_schedule;
  double r = 0.01;
  double s = 0.95;
  // Largest pre-thinning factor tried by the order test; 0 means the largest
  // schedule entry.
  std::uint64_t max_order_k = 0;
  unsigned threads = 1;
};

enum class EdgeStatus { independent, dependent, unresolved };

enum class UnresolvedReason {
  none,
  constant,             // series never changes
  no_first_order,       // no pre-thinning factor passed the order test
  degenerate_estimates, // pre-thinned series lacks one of the transitions
  too_short,            // pre-thinned series shorter than n'
  no_data               // no schedule entry leaves a fittable table
};

inline std::string_view to_string(EdgeStatus s) noexcept {
  switch (s) {
    case EdgeStatus::independent: return "independent";
    case EdgeStatus::dependent: return "dependent";
    case EdgeStatus::unresolved: break;
  }
  return "unresolved";
}

inline std::string_view to_string(UnresolvedReason r) noexcept {
  switch (r) {
    case UnresolvedReason::none: return "";
    case UnresolvedReason::constant: return "constant";
    case UnresolvedReason::no_first_order: return "no-first-order-thinning";
    case UnresolvedReason::degenerate_estimates: return "degenerate-estimates";
    case UnresolvedReason::too_short: return "too-short";
    case UnresolvedReason::no_data: break;
  }
  return "no-data";
}

struct EdgeSweepResult {
  Edge pair{};
  EdgeStatus status = EdgeStatus::unresolved;
  UnresolvedReason reason = UnresolvedReason::none;
  std::uint64_t k_prime = 0;  // pre-thinning factor that made the series first-order
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  std::uint64_t n_prime = 0;
  std::uint64_t prethinned_length = 0;
  std::optional<std::uint64_t> k_independent;
  // Parallel to the schedule; empty entries had no fittable table.
  std::vector<std::optional<double>> delta_bic_at_k;
};

struct FractionPoint {
  std::uint64_t k = 0;
  std::size_t independent = 0;  // resolved edges with k_independent <= k
  std::size_t resolved = 0;
  double fraction = 0.0;
};

struct SweepReport {
  std::vector<std::uint64_t> k_schedule;
  std::vector<EdgeSweepResult> edges;
  std::vector<FractionPoint> curve;
  std::size_t resolved = 0;
  std::size_t unresolved = 0;

  /// Fraction of resolved edges independent at thinning factor k (the
  /// curve value at the largest schedule entry <= k).
  double fraction_at(std::uint64_t k) const {
    double f = 0.0;
    for (const auto& p : curve) {
      if (p.k <= k) f = p.fraction;
    }
    return f;
  }
};

/// Sweep for a single series; see independence_sweep.
inline EdgeSweepResult sweep_edge(const EdgeSeries& series, const SweepOptions& opt) {
  EdgeSweepResult out;
  out.pair = series.pair();
  out.delta_bic_at_k.assign(opt.k_schedule.size(), std::nullopt);
  if (series.constant()) {
    out.reason = UnresolvedReason::constant;
    return out;
  }

  const std::uint64_t k_cap =
      opt.max_order_k > 0 ? opt.max_order_k : *std::max_element(opt.k_schedule.begin(), opt.k_schedule.end());
  std::optional<EdgeSeries> pre;
  for (std::uint64_t k = 1; k <= std::max<std::uint64_t>(k_cap, 1); k *= 2) {
    EdgeSeries t = thin(series, k);
    try {
      if (markov_order_test(t).verdict == Verdict::first_order) {
        out.k_prime = k;
        pre = std::move(t);
        break;
      }
    } catch (const InsufficientData&) {
      break;  // thinning further only loses information
    }
  }
  if (!pre) {
    out.reason = UnresolvedReason::no_first_order;
    return out;
  }
  out.prethinned_length = pre->size();
  try {
    const auto est = mcest(*pre);
    out.alpha_hat = est.alpha;
    out.beta_hat = est.beta;
    out.n_prime = required_length(est.alpha, est.beta, opt.r, opt.s);
  } catch (const InsufficientData&) {
    out.reason = UnresolvedReason::degenerate_estimates;
    return out;
  } catch (const InvalidInput&) {
    out.reason = UnresolvedReason::degenerate_estimates;
    return out;
  }
  if (out.prethinned_length < out.n_prime) {
    out.reason = UnresolvedReason::too_short;
    return out;
  }

  bool any = false;
  for (std::size_t i = 0; i < opt.k_schedule.size(); ++i) {
    const auto report = independence_test(thin(series, opt.k_schedule[i]));
    if (report.verdict == Verdict::insufficient_data) continue;
    any = true;
    out.delta_bic_at_k[i] = report.delta_bic;
    if (report.delta_bic < 0.0 && (!out.k_independent || opt.k_schedule[i] < *out.k_independent)) {
      out.k_independent = opt.k_schedule[i];
    }
  }
  if (!any) {
    out.reason = UnresolvedReason::no_data;
  } else {
    out.status = out.k_independent ? EdgeStatus::independent : EdgeStatus::dependent;
  }
  return out;
}

/// Per-edge independence sweep over a thinning schedule.
///
/// For every series: find the smallest power-of-two pre-thinning k' under
/// which a first-order chain suffices, estimate alpha and beta on it, require
/// its length to reach n', then run the independence test at every schedule
/// entry and record the smallest k with negative delta-BIC. Edges that fail
/// any step are kept as unresolved with a reason.
inline SweepReport independence_sweep(std::span<const EdgeSeries> series, const SweepOptions& opt) {
  if (opt.k_schedule.empty()) throw InvalidInput("thinning schedule is empty");
  for (auto k : opt.k_schedule) {
    if (k == 0) throw InvalidInput("thinning factors must be positive");
  }
  SweepReport report;
  report.k_schedule = opt.k_schedule;
  std::sort(report.k_schedule.begin(), report.k_schedule.end());
  report.k_schedule.erase(std::unique(report.k_schedule.begin(), report.k_schedule.end()), report.k_schedule.end());
  SweepOptions sorted = opt;
  sorted.k_schedule = report.k_schedule;

  report.edges.resize(series.size());
  parallel_for(series.size(), opt.threads, [&](std::size_t i) { report.edges[i] = sweep_edge(series[i], sorted); });

  for (const auto& e : report.edges) {
    if (e.status == EdgeStatus::unresolved) {
      ++report.unresolved;
    } else {
      ++report.resolved;
    }
  }
  for (auto k : report.k_schedule) {
    FractionPoint p;
    p.k = k;
    p.resolved = report.resolved;
    for (const auto& e : report.edges) {
      if (e.k_independent && *e.k_independent <= k) ++p.independent;
    }
    p.fraction = p.resolved == 0 ? 0.0 : static_cast<double>(p.independent) / static_cast<double>(p.resolved);
    report.curve.push_back(p);
  }
  return report;
}

}  // namespace graphmix
