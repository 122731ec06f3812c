#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

#include "graphmix/edge_model.hpp"
#include "graphmix/error.hpp"
#include "graphmix/series.hpp"

namespace graphmix {

/// x[i][j] = number of (i, j) transitions between consecutive values.
struct ContingencyTable2 {
  std::array<std::array<std::uint64_t, 2>, 2> x{};

  std::uint64_t total() const noexcept { return x[0][0] + x[0][1] + x[1][0] + x[1][1]; }
  std::uint64_t row(int i) const noexcept { return x[i][0] + x[i][1]; }
  std::uint64_t col(int j) const noexcept { return x[0][j] + x[1][j]; }
  friend bool operator==(const ContingencyTable2&, const ContingencyTable2&) = default;
};

/// x[i][j][k] = number of length-3 windows (i, j, k).
struct ContingencyTable3 {
  std::array<std::array<std::array<std::uint64_t, 2>, 2>, 2> x{};

  std::uint64_t total() const noexcept {
    std::uint64_t s = 0;
    for (const auto& a : x)
      for (const auto& b : a)
        for (auto c : b) s += c;
    return s;
  }
  std::uint64_t first_pair(int i, int j) const noexcept { return x[i][j][0] + x[i][j][1]; }  // x_ij+
  std::uint64_t last_pair(int j, int k) const noexcept { return x[0][j][k] + x[1][j][k]; }   // x_+jk
  std::uint64_t middle(int j) const noexcept { return first_pair(0, j) + first_pair(1, j); }  // x_+j+
  friend bool operator==(const ContingencyTable3&, const ContingencyTable3&) = default;
};

/// Transition counts of a series; total = length - 1.
inline ContingencyTable2 transition_table(const EdgeSeries& series) {
  ContingencyTable2 t;
  bool have_prev = false;
  bool prev = false;
  series.for_each_run([&](std::uint64_t s, std::uint64_t e, bool v) {
    if (have_prev) ++t.x[prev][v];
    t.x[v][v] += e - s - 1;
    prev = v;
    have_prev = true;
  });
  return t;
}

/// Length-3 window counts of a series; total = length - 2.
inline ContingencyTable3 triple_table(const EdgeSeries& series) {
  ContingencyTable3 t;
  const std::uint64_t len = series.size();
  if (len < 3) return t;
  struct Run {
    std::uint64_t s, e;
    bool v;
  };
  std::vector<Run> runs;
  runs.reserve(series.run_count());
  series.for_each_run([&](std::uint64_t s, std::uint64_t e, bool v) { runs.push_back({s, e, v}); });
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto [s, e, v] = runs[i];
    // Centers t with both neighbours inside the series.
    const std::uint64_t a = std::max<std::uint64_t>(s, 1);
    const std::uint64_t b = std::min<std::uint64_t>(e, len - 1);
    if (a >= b) continue;
    const bool opens = a == s;   // left neighbour of t = s belongs to the previous run
    const bool closes = b == e;  // right neighbour of t = e - 1 belongs to the next run
    if (e - s == 1) {
      ++t.x[runs[i - 1].v][v][runs[i + 1].v];
      continue;
    }
    std::uint64_t interior = b - a;
    if (opens) {
      ++t.x[runs[i - 1].v][v][v];
      --interior;
    }
    if (closes) {
      ++t.x[v][v][runs[i + 1].v];
      --interior;
    }
    t.x[v][v][v] += interior;
  }
  return t;
}

enum class FitModel { independent, markov };

struct FitResult {
  double g2 = 0.0;
  double bic = 0.0;
  int parameters = 0;  // free multinomial parameters q
};

namespace detail {

// x * ln(x / expected) with the 0 ln 0 = 0 convention.
inline double g2_term(double observed, double expected) {
  return observed > 0.0 ? observed * std::log(observed / expected) : 0.0;
}

inline void require_fittable(const ContingencyTable2& t) {
  if (t.total() == 0) throw InsufficientData("contingency table is empty");
  for (int i = 0; i < 2; ++i) {
    if (t.row(i) == 0 || t.col(i) == 0) throw InsufficientData("contingency table has an empty row or column");
  }
}

}  // namespace detail

/// G^2 = -2 sum x_ij ln(xhat_ij / x_ij) and BIC = G^2 + q ln(x_++).
///
/// Independence: xhat_ij = x_i+ x_+j / x_++ with q = 2. First-order Markov
/// (saturated): xhat_ij = x_ij with q = 3.
inline FitResult g2_and_bic(const ContingencyTable2& t, FitModel model) {
  detail::require_fittable(t);
  const double n = static_cast<double>(t.total());
  FitResult out;
  if (model == FitModel::independent) {
    double sum = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double expected = static_cast<double>(t.row(i)) * static_cast<double>(t.col(j)) / n;
        sum += detail::g2_term(static_cast<double>(t.x[i][j]), expected);
      }
    }
    out.g2 = std::max(0.0, 2.0 * sum);
    out.parameters = 2;
  } else {
    out.g2 = 0.0;
    out.parameters = 3;
  }
  out.bic = out.g2 + out.parameters * std::log(n);
  return out;
}

/// BIC(independent) - BIC(Markov) = G^2_independent - ln(x_++). Negative
/// values favour independent draws.
inline double delta_bic(const ContingencyTable2& t) {
  return g2_and_bic(t, FitModel::independent).g2 - std::log(static_cast<double>(t.total()));
}

enum class Verdict { independent, markov, first_order, second_order, insufficient_data };

inline std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::independent: return "independent";
    case Verdict::markov: return "markov";
    case Verdict::first_order: return "first-order";
    case Verdict::second_order: return "second-order";
    case Verdict::insufficient_data: break;
  }
  return "insufficient-data";
}

/// Comparison of a restricted model against the saturated one.
/// For the independence test the restricted model is independent draws and
/// the saturated one first-order Markov; for the order test they are first-
/// and second-order Markov.
struct TestReport {
  double g2_restricted = 0.0;
  double g2_saturated = 0.0;
  double bic_restricted = 0.0;
  double bic_saturated = 0.0;
  double delta_bic = 0.0;  // bic_restricted - bic_saturated
  int parameter_gap = 0;
  std::uint64_t samples = 0;
  Verdict verdict = Verdict::insufficient_data;
};

/// Independent draws vs first-order Markov on a 2x2 transition table.
inline TestReport independence_test(const ContingencyTable2& t) {
  TestReport r;
  r.samples = t.total();
  try {
    const auto ind = g2_and_bic(t, FitModel::independent);
    const auto mk = g2_and_bic(t, FitModel::markov);
    r.g2_restricted = ind.g2;
    r.g2_saturated = mk.g2;
    r.bic_restricted = ind.bic;
    r.bic_saturated = mk.bic;
    r.parameter_gap = mk.parameters - ind.parameters;
    r.delta_bic = ind.bic - mk.bic;
    r.verdict = r.delta_bic < 0.0 ? Verdict::independent : Verdict::markov;
  } catch (const InsufficientData&) {
    r.verdict = Verdict::insufficient_data;
  }
  return r;
}

inline TestReport independence_test(const EdgeSeries& series) { return independence_test(transition_table(series)); }

/// First- vs second-order Markov on a 2x2x2 window table.
///
/// First-order fit: xhat_ijk = x_ij+ x_+jk / x_+j+ (first and third value
/// independent given the middle one); the second-order model is saturated
/// and has two more free parameters. Throws InsufficientData when the
/// middle value never takes one of its states.
inline TestReport markov_order_test(const ContingencyTable3& t) {
  TestReport r;
  r.samples = t.total();
  if (r.samples == 0 || t.middle(0) == 0 || t.middle(1) == 0) {
    throw InsufficientData("window table is degenerate (series constant or too short)");
  }
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        const double expected = static_cast<double>(t.first_pair(i, j)) * static_cast<double>(t.last_pair(j, k)) /
                                static_cast<double>(t.middle(j));
        sum += detail::g2_term(static_cast<double>(t.x[i][j][k]), expected);
      }
    }
  }
  const double log_n = std::log(static_cast<double>(r.samples));
  constexpr int first_order_params = 5;   // Pr(i, j) (3) + Pr(k | j) (2)
  constexpr int second_order_params = 7;  // 8 cells - 1
  r.g2_restricted = std::max(0.0, 2.0 * sum);
  r.g2_saturated = 0.0;
  r.parameter_gap = second_order_params - first_order_params;
  r.bic_restricted = r.g2_restricted + first_order_params * log_n;
  r.bic_saturated = second_order_params * log_n;
  r.delta_bic = r.bic_restricted - r.bic_saturated;
  r.verdict = r.delta_bic < 0.0 ? Verdict::first_order : Verdict::second_order;
  return r;
}

inline TestReport markov_order_test(const EdgeSeries& series) { return markov_order_test(triple_table(series)); }

class DegenerateSeries : public InsufficientData {
 public:
  using InsufficientData::InsufficientData;
};

/// Transition-probability estimates of a series read as a first-order
/// chain: alpha = x01 / (x00 + x01), beta = x10 / (x10 + x11).
inline TransitionRates mcest(const ContingencyTable2& t) {
  if (t.row(0) == 0 || t.row(1) == 0) {
    throw DegenerateSeries("series never leaves one of its states; transitions are not estimable");
  }
  return {static_cast<double>(t.x[0][1]) / static_cast<double>(t.row(0)),
          static_cast<double>(t.x[1][0]) / static_cast<double>(t.row(1))};
}

inline TransitionRates mcest(const EdgeSeries& series) { return mcest(transition_table(series)); }

}  // namespace graphmix
