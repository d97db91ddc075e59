#include <cmath>

#include <gtest/gtest.h>

#include "hjbfem/errors.hpp"
#include "hjbfem/market_model.hpp"

using namespace hjbfem;

TEST(Payoff, StraddleIsAbsoluteDistanceToStrike) {
  EXPECT_DOUBLE_EQ(straddle_payoff(90.0, 100.0), 10.0);
  EXPECT_DOUBLE_EQ(straddle_payoff(100.0, 100.0), 0.0);
  EXPECT_DOUBLE_EQ(straddle_payoff(135.5, 100.0), 35.5);
}

TEST(LogTransform, RoundTrips) {
  for (double s : {1.0, 10.989, 57.3, 100.0, 999.0}) {
    EXPECT_NEAR(from_log(to_log(s, 100.0), 100.0), s, 1e-12 * s);
  }
  EXPECT_DOUBLE_EQ(to_log(100.0, 100.0), 0.0);
}

TEST(LogTransform, RejectsNonPositivePrice) {
  EXPECT_THROW(to_log(0.0, 100.0), InvalidInputError);
  EXPECT_THROW(to_log(-1.0, 100.0), InvalidInputError);
}

TEST(BoundaryValues, AreFarFieldStraddleValues) {
  MarketParams p;
  p.s_min = 1.0;
  const BoundaryValues g = boundary_values(p, 0.5);
  EXPECT_DOUBLE_EQ(g.left, 99.0);
  EXPECT_DOUBLE_EQ(g.right, 900.0);
}

TEST(BoundaryValues, RejectTimeOutsideHorizon) {
  const MarketParams p;
  EXPECT_THROW(boundary_values(p, -0.1), InvalidInputError);
  EXPECT_THROW(boundary_values(p, 1.1), InvalidInputError);
}

TEST(MarketParams, DefaultsValidate) { EXPECT_NO_THROW(MarketParams{}.validate()); }

TEST(MarketParams, RejectsBadInputs) {
  auto expect_invalid = [](auto mutate) {
    MarketParams p;
    mutate(p);
    EXPECT_THROW(p.validate(), InvalidInputError);
  };
  expect_invalid([](MarketParams& p) { p.sigma = 0.0; });
  expect_invalid([](MarketParams& p) { p.maturity = -1.0; });
  expect_invalid([](MarketParams& p) { p.strike = 0.0; });
  expect_invalid([](MarketParams& p) { p.s_min = 0.0; });
  expect_invalid([](MarketParams& p) { p.s_max = 50.0; });
  expect_invalid([](MarketParams& p) { p.s_min = 150.0; });
  expect_invalid([](MarketParams& p) { p.sigma = std::nan(""); });
}

TEST(MarketParams, DefaultSMinPutsStrikeOnEveryHundredthGridPoint) {
  const double s_min = MarketParams::default_s_min(100.0, 1000.0);
  EXPECT_NEAR(s_min, 1000.0 / 91.0, 1e-12);
  for (int n : {100, 200, 800, 3200}) {
    const double ds = (1000.0 - s_min) / n;
    const double j = (100.0 - s_min) / ds;
    EXPECT_NEAR(j, std::round(j), 1e-9) << n;
  }
}

TEST(Position, ParsesAndPrints) {
  EXPECT_EQ(parse_position("long"), Position::Long);
  EXPECT_EQ(parse_position("short"), Position::Short);
  EXPECT_EQ(to_string(Position::Short), "short");
  EXPECT_THROW(parse_position("flat"), InvalidInputError);
}

// Frozen value of the straddle from numerical integration of the discounted
// payoff against the lognormal density.
TEST(BlackScholes, StraddleMatchesQuadratureOracle) {
  MarketParams p;
  EXPECT_NEAR(bs_straddle_price(100.0, p, 0.05), 23.5854520220430607, 1e-12);
}

TEST(BlackScholes, PutCallParity) {
  for (double s : {60.0, 100.0, 170.0}) {
    const double lhs = bs_call_price(s, 100.0, 0.05, 0.3, 0.7) - bs_put_price(s, 100.0, 0.05, 0.3, 0.7);
    EXPECT_NEAR(lhs, s - 100.0 * std::exp(-0.05 * 0.7), 1e-12);
  }
}

TEST(BlackScholes, ZeroTimeGivesIntrinsic) {
  EXPECT_DOUBLE_EQ(bs_call_price(120.0, 100.0, 0.05, 0.3, 0.0), 20.0);
  EXPECT_DOUBLE_EQ(bs_put_price(120.0, 100.0, 0.05, 0.3, 0.0), 0.0);
}

TEST(BlackScholes, GreeksMatchFiniteDifferences) {
  const double s = 95.0, k = 100.0, r = 0.05, sig = 0.3, tau = 0.8, h = 1e-3;
  auto v = [&](double x, double t) { return bs_call_price(x, k, r, sig, t) + bs_put_price(x, k, r, sig, t); };
  const BsGreeks g = bs_straddle_greeks(s, k, r, sig, tau);
  EXPECT_NEAR(g.delta, (v(s + h, tau) - v(s - h, tau)) / (2 * h), 1e-7);
  EXPECT_NEAR(g.gamma, (v(s + h, tau) - 2 * v(s, tau) + v(s - h, tau)) / (h * h), 1e-5);
  // dV/dt = -dV/dtau
  const double ht = 1e-4;
  EXPECT_NEAR(g.theta, -(v(s, tau + ht) - v(s, tau - ht)) / (2 * ht), 1e-6);
}

TEST(LinearReduction, DetectedOnlyWithoutFriction) {
  MarketParams p;
  EXPECT_FALSE(is_linear_reduction(p));
  p.r_l = p.r_b;
  p.r_f = 0.0;
  EXPECT_TRUE(is_linear_reduction(p));
}
