#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "graphmix/error.hpp"
#include "graphmix/series.hpp"

namespace graphmix {

struct GelmanRubin {
  double r_hat = 1.0;
  double within = 0.0;   // W
  double between = 0.0;  // B
  std::uint64_t half_length = 0;
};

/// Split-chain potential scale reduction factor for binary series.
///
/// Each chain of length L contributes its first and last floor(L/2) values
/// as two sequences. With n the half length, W the mean within-sequence
/// variance and B = n * variance of the sequence means,
///   R = sqrt((n - 1)/n + B/(n W)).
/// W = 0 gives +inf when B > 0 and 1 when B = 0.
inline GelmanRubin gelman_rubin_detail(std::span<const EdgeSeries> chains) {
  if (chains.size() < 2) throw InvalidInput("Gelman-Rubin needs at least two chains");
  const std::uint64_t len = chains[0].size();
  for (const auto& c : chains) {
    if (c.size() != len) throw InvalidInput("chains must have equal length");
  }
  if (len < 100) throw InvalidInput("chains must have at least 100 values");

  const std::uint64_t n = len / 2;
  const double nd = static_cast<double>(n);
  std::vector<double> means;
  double within = 0.0;
  for (const auto& c : chains) {
    for (const std::uint64_t begin : {std::uint64_t{0}, len - n}) {
      const double p = static_cast<double>(c.count_ones(begin, begin + n)) / nd;
      means.push_back(p);
      within += nd * p * (1.0 - p) / (nd - 1.0);
    }
  }
  const double seqs = static_cast<double>(means.size());
  within /= seqs;
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= seqs;
  double spread = 0.0;
  for (double m : means) spread += (m - grand) * (m - grand);
  const double between = nd * spread / (seqs - 1.0);

  GelmanRubin out;
  out.within = within;
  out.between = between;
  out.half_length = n;
  if (within <= 0.0) {
    out.r_hat = between > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  } else {
    out.r_hat = std::sqrt((nd - 1.0) / nd + between / (nd * within));
  }
  return out;
}

inline double gelman_rubin(std::span<const EdgeSeries> chains) { return gelman_rubin_detail(chains).r_hat; }

}  // namespace graphmix
