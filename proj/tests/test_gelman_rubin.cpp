#include <gtest/gtest.h>

#include <cmath>

#include "graphmix/gelman_rubin.hpp"
#include "support.hpp"

using namespace graphmix;
using namespace testing_support;

namespace {

EdgeSeries chain(const std::vector<std::uint8_t>& bits) { return EdgeSeries(Edge{0, 1}, bits); }

}  // namespace

TEST(GelmanRubin, IdenticalConstantChains) {
  const std::vector<EdgeSeries> chains(3, chain(std::vector<std::uint8_t>(500, 1)));
  EXPECT_EQ(gelman_rubin(chains), 1.0);
}

TEST(GelmanRubin, SeparatedConstantChainsDiverge) {
  const std::vector<EdgeSeries> chains = {chain(std::vector<std::uint8_t>(200, 0)),
                                          chain(std::vector<std::uint8_t>(200, 1))};
  EXPECT_TRUE(std::isinf(gelman_rubin(chains)));
}

TEST(GelmanRubin, ReferenceValue) {
  // Split-chain PSRF computed independently for three fixed patterns.
  std::vector<std::uint8_t> a(200), b(200), c(200);
  for (int i = 0; i < 200; ++i) {
    a[i] = (i * 7) % 10 < 3;
    b[i] = (i * 3) % 10 < 5;
    c[i] = i < 120 && i % 4 == 0;
  }
  const std::vector<EdgeSeries> chains = {chain(a), chain(b), chain(c)};
  const auto gr = gelman_rubin_detail(chains);
  EXPECT_EQ(gr.half_length, 100u);
  EXPECT_NEAR(gr.within, 0.19444444444444445, 1e-14);
  EXPECT_NEAR(gr.between, 2.8666666666666667, 1e-13);
  EXPECT_NEAR(gr.r_hat, 1.0665029636285928, 1e-13);
}

TEST(GelmanRubin, IidChainsNearOne) {
  Rng rng(1);
  int within_band = 0;
  const double floor = std::sqrt((5000.0 - 1.0) / 5000.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<EdgeSeries> chains;
    for (int c = 0; c < 3; ++c) chains.push_back(chain(bernoulli_bits(10000, 0.3, rng)));
    const double r = gelman_rubin(chains);
    // Split-chain PSRF can dip below 1, down to sqrt((n-1)/n) when the
    // sequence means agree exactly.
    EXPECT_GE(r, floor);
    within_band += r <= 1.1;
  }
  EXPECT_GE(within_band, 95);
}

TEST(GelmanRubin, Preconditions) {
  const auto c = chain(std::vector<std::uint8_t>(200, 0));
  EXPECT_THROW(gelman_rubin(std::vector<EdgeSeries>{c}), InvalidInput);
  EXPECT_THROW(gelman_rubin(std::vector<EdgeSeries>{c, chain(std::vector<std::uint8_t>(201, 0))}), InvalidInput);
  const auto short_chain = chain(std::vector<std::uint8_t>(99, 0));
  EXPECT_THROW(gelman_rubin(std::vector<EdgeSeries>{short_chain, short_chain}), InvalidInput);
}

TEST(GelmanRubin, OddLengthUsesOuterHalves) {
  // Length 101: halves are [0, 50) and [51, 101); the middle value is unused.
  std::vector<std::uint8_t> a(101, 0), b(101, 0);
  a[50] = 1;
  const auto gr = gelman_rubin_detail(std::vector<EdgeSeries>{chain(a), chain(b)});
  EXPECT_EQ(gr.half_length, 50u);
  EXPECT_EQ(gr.r_hat, 1.0);
}
