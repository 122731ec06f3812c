#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "graphmix/edge_model.hpp"
#include "graphmix/random.hpp"
#include "support.hpp"

using namespace graphmix;

TEST(DdAlphaBeta, SingleEdgeGraph) {
  const auto r = dd_alpha_beta(1, 1, 1);
  EXPECT_DOUBLE_EQ(r.alpha, 0.5);
  EXPECT_DOUBLE_EQ(r.beta, 1.0);
}

TEST(DdAlphaBeta, CelegansScale) {
  const auto r = dd_alpha_beta(10, 10, 4296);
  EXPECT_NEAR(r.alpha, 2.7092024454778427e-06, 1e-18);
  EXPECT_NEAR(r.beta, 0.00046549516418192827, 1e-16);
  EXPECT_NEAR(r.beta, 2.0 / 4296 - 1.0 / (4296.0 * 4296.0), 1e-15);
}

TEST(DdAlphaBeta, InvalidInputs) {
  EXPECT_THROW(dd_alpha_beta(1, 1, 0), InvalidInput);
  EXPECT_THROW(dd_alpha_beta(0, 1, 5), InvalidInput);
}

TEST(JddAlphaBeta, SingletonClassesFreezeTheEdge) {
  const auto model = jdd_model(3, 5, 20, 1, 1, 1);
  EXPECT_DOUBLE_EQ(model.beta, 1.0 / 20);
  EXPECT_TRUE(model.frozen);
  EXPECT_FALSE(jdd_model(3, 5, 20, 2, 1, 1).frozen);
}

TEST(JddAlphaBeta, PlugIn) {
  const auto r = jdd_alpha_beta(10, 2, 2, 1);
  EXPECT_DOUBLE_EQ(r.alpha, 0.05);
  EXPECT_DOUBLE_EQ(r.beta, 0.15);
}

TEST(JddAlphaBeta, LargeClassLimitMatchesDdBeta) {
  const std::size_t m = 1000;
  const auto r = jdd_alpha_beta(m, 1000000, 1000000, 5);
  EXPECT_NEAR(r.beta, 2.0 / m, 1e-8);
  EXPECT_NEAR(r.beta, dd_alpha_beta(1, 1, m).beta, 2.0 / (m * m));
}

TEST(JddAlphaBeta, ZeroClassSizeIsInvalid) {
  EXPECT_THROW(jdd_alpha_beta(10, 0, 2, 1), InvalidInput);
  EXPECT_THROW(jdd_alpha_beta(0, 1, 2, 1), InvalidInput);
}

TEST(Stationary, SymmetricRates) {
  EdgeChainModel m;
  m.alpha = m.beta = 0.2;
  const auto pi = stationary(m);
  EXPECT_DOUBLE_EQ(pi.p0, 0.5);
  EXPECT_DOUBLE_EQ(pi.p1, 0.5);
}

TEST(Stationary, PlugIn) {
  EdgeChainModel m;
  m.alpha = 0.05;
  m.beta = 0.15;
  EXPECT_DOUBLE_EQ(stationary(m).p1, 0.25);
}

TEST(Stationary, DegenerateChain) {
  EdgeChainModel m;
  EXPECT_THROW(stationary(m), DegenerateChain);
}

TEST(Stationary, FixedPointOfTranspose) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    EdgeChainModel m;
    m.alpha = 1e-4 + rng.uniform() * (1 - 1e-4);
    m.beta = 1e-4 + rng.uniform() * (1 - 1e-4);
    const auto pi = stationary(m);
    EXPECT_NEAR(pi.p0 + pi.p1, 1.0, 1e-15);
    const double q0 = pi.p0 * m.transition(0, 0) + pi.p1 * m.transition(1, 0);
    const double q1 = pi.p0 * m.transition(0, 1) + pi.p1 * m.transition(1, 1);
    EXPECT_NEAR(q0, pi.p0, 1e-15);
    EXPECT_NEAR(q1, pi.p1, 1e-15);
    EXPECT_NEAR(m.transition(0, 0) + m.transition(0, 1), 1.0, 1e-15);
    EXPECT_NEAR(m.transition(1, 0) + m.transition(1, 1), 1.0, 1e-15);
  }
}

TEST(StoppingSteps, EpsilonTableCelegans) {
  const std::size_t m = 4296;
  // Reference values of ceil(scale * ln(1/eps)).
  EXPECT_EQ(stopping_steps(m, 4.5e-5, SwapMode::dd), 21500u);
  EXPECT_EQ(stopping_steps(m, 4.5e-5, SwapMode::jdd), 42999u);
  EXPECT_EQ(stopping_steps(m, 0.37, SwapMode::dd), 2136u);
  // Multipliers of |E|.
  EXPECT_NEAR(stopping_steps(m, 4.5e-5, SwapMode::dd) / double(m), 5.0, 0.01);
  EXPECT_NEAR(stopping_steps(m, 4.5e-5, SwapMode::jdd) / double(m), 10.0, 0.02);
  EXPECT_NEAR(stopping_steps(m, 0.37, SwapMode::dd) / double(m), 0.5, 0.01);
  // eps = e^-10 gives exactly 5|E| and 10|E|.
  EXPECT_EQ(stopping_steps(m, std::exp(-10.0), SwapMode::dd), 21480u);
  EXPECT_EQ(stopping_steps(m, std::exp(-10.0), SwapMode::jdd), 42960u);
}

TEST(StoppingSteps, EpsilonOutOfRange) {
  for (double eps : {0.0, 1.0, -0.5, 2.0, std::nan("")}) {
    EXPECT_THROW(stopping_steps(100, eps, SwapMode::dd), InvalidInput);
  }
}

TEST(DecayError, StationaryStartHasNoError) {
  const auto m = dd_model(3, 4, 100);
  EXPECT_EQ(decay_error(m, 0, stationary(m)), 0.0);
}

TEST(DecayError, GammaOneConvergesInOneStep) {
  EdgeChainModel m;
  m.alpha = 0.3;
  m.beta = 0.7;
  EXPECT_GT(decay_error(m, 0, {1.0, 0.0}), 0.0);
  EXPECT_EQ(decay_error(m, 1, {1.0, 0.0}), 0.0);
}

TEST(DecayError, MonotoneInSteps) {
  const auto m = dd_model(5, 7, 300);
  double prev = decay_error(m, 0, {0.0, 1.0});
  for (std::uint64_t n = 1; n < 5000; n += 37) {
    const double e = decay_error(m, n, {0.0, 1.0});
    EXPECT_LE(e, prev);
    prev = e;
  }
}

TEST(DecayError, MatchesMatrixPower) {
  // Extended precision keeps the oracle's own rounding below the tolerance.
  using Mat = std::array<std::array<long double, 2>, 2>;
  auto mul = [](const Mat& a, const Mat& b) {
    Mat c{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
  };
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    EdgeChainModel m;
    m.alpha = rng.uniform() * 0.01 + 1e-6;
    m.beta = rng.uniform() * 0.01 + 1e-6;
    const long double a = m.alpha, b = m.beta;
    const Mat t = {{{1 - a, a}, {b, 1 - b}}};
    for (std::uint64_t n : {1ULL, 10ULL, 1000ULL, 123457ULL, 1000000ULL}) {
      Mat power = {{{1, 0}, {0, 1}}}, base = t;
      for (std::uint64_t e = n; e; e >>= 1) {
        if (e & 1) power = mul(power, base);
        base = mul(base, base);
      }
      for (const Distribution2 start : {Distribution2{1, 0}, Distribution2{0, 1}, Distribution2{0.3, 0.7}}) {
        const long double p0 = start.p0 * power[0][0] + start.p1 * power[1][0];
        const long double p1 = start.p0 * power[0][1] + start.p1 * power[1][1];
        const long double pi0 = b / (a + b), pi1 = a / (a + b);
        const double direct = static_cast<double>(std::hypot(p0 - pi0, p1 - pi1));
        EXPECT_NEAR(decay_error(m, n, start), direct, 1e-12) << "n=" << n;
      }
    }
  }
}

TEST(DecayError, BoundedByCoefficientTimesRate) {
  const auto m = dd_model(2, 3, 50);
  const Distribution2 start{0.0, 1.0};
  for (std::uint64_t n : {0ULL, 1ULL, 100ULL}) {
    EXPECT_LE(decay_error(m, n, start),
              decay_coefficient(m, start) * std::pow(std::abs(1 - m.gamma()), double(n)) * (1 + 1e-12));
  }
}

TEST(GammaBound, DdAtLeastTwoOverMWhenDegreeProductAtLeastTwo) {
  for (std::size_t m : {10u, 100u, 4296u, 100000u}) {
    for (Degree du = 1; du <= 20; ++du) {
      for (Degree dv = du; dv <= 20; ++dv) {
        if (du * dv > 2 * m) continue;
        const auto model = dd_model(du, dv, m);
        if (du * dv >= 2) {
          // Equality holds at du * dv = 2, up to rounding.
          EXPECT_GE(model.gamma(), gamma_lower_bound(m, SwapMode::dd) * (1 - 1e-14)) << m << ' ' << du << ' ' << dv;
        }
      }
    }
  }
}

TEST(GammaBound, DdLeafPairFallsJustShort) {
  // d_u d_v = 1: gamma = 2/m - 1/(2 m^2), below the 2/m bound.
  for (std::size_t m : {10u, 4296u}) {
    const double md = static_cast<double>(m);
    const auto model = dd_model(1, 1, m);
    EXPECT_NEAR(model.gamma(), 2.0 / md - 0.5 / (md * md), 1e-15);
    EXPECT_LT(model.gamma(), gamma_lower_bound(m, SwapMode::dd));
  }
}

TEST(GammaBound, JddAtLeastOneOverM) {
  for (std::size_t m : {10u, 1000u}) {
    for (std::size_t fu : {1u, 2u, 50u}) {
      for (std::size_t fv : {1u, 3u, 70u}) {
        EXPECT_GE(jdd_model(2, 3, m, fu, fv, 0).gamma(), gamma_lower_bound(m, SwapMode::jdd));
      }
    }
  }
}

TEST(ModelForPair, ReadsGraphContext) {
  const auto g = testing_support::star3();
  const auto p = degree_profile(g);
  const auto dd = model_for_pair(g, p, 1, 2, SwapMode::dd);
  EXPECT_DOUBLE_EQ(dd.alpha, 1.0 / (2 * 9));
  const auto jdd = model_for_pair(g, p, 0, 1, SwapMode::jdd);
  EXPECT_EQ(jdd.f_du, 1u);
  EXPECT_EQ(jdd.f_dv, 3u);
  EXPECT_EQ(jdd.j_dudv, 3u);
  EXPECT_DOUBLE_EQ(jdd.alpha, 2.0 * 3 / (3 * 1 * 3));
}
