#include <vgreeks/oracles.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace vgreeks;

namespace {

const OptionSpec kCall{100.0, 1.0, PayoffKind::call};

double price_at(double S0, double r, double sigma, const OptionSpec& opt) {
  return bs_price_greeks({S0, r}, opt, sigma).price;
}

}  // namespace

TEST(BlackScholes, ReferenceValues) {
  const auto v = bs_price_greeks({100.0, 0.0}, kCall, 0.2);
  EXPECT_NEAR(v.price, 7.965567455405796, 1e-12);
  EXPECT_NEAR(v.delta, 0.539827837277029, 1e-14);
  EXPECT_NEAR(v.vega, 39.69525474770118, 1e-11);
  EXPECT_NEAR(v.gamma, 0.01984762737385059, 1e-15);
  EXPECT_NEAR(v.rho, 46.0172162722971, 1e-11);
  const auto d = bs_price_greeks({100.0, 0.0}, {100.0, 1.0, PayoffKind::digital_call}, 0.2);
  EXPECT_NEAR(d.delta, 0.01984762737385059, 1e-15);
}

TEST(BlackScholes, PutCallParityAndLimits) {
  for (double r : {0.0, 0.05}) {
    for (double K : {80.0, 100.0, 125.0}) {
      const MarketSpec m{100.0, r};
      const auto c = bs_price_greeks(m, {K, 1.5, PayoffKind::call}, 0.3);
      const auto p = bs_price_greeks(m, {K, 1.5, PayoffKind::put}, 0.3);
      EXPECT_NEAR(c.price - p.price, 100.0 - K * std::exp(-r * 1.5), 1e-12);
      EXPECT_NEAR(c.delta - p.delta, 1.0, 1e-15);
      EXPECT_NEAR(c.gamma, p.gamma, 1e-15);
      EXPECT_NEAR(c.vega, p.vega, 1e-12);
    }
  }
  EXPECT_NEAR(bs_price_greeks({100.0, 0.0}, {1e-3, 1.0, PayoffKind::call}, 0.2).delta, 1.0, 1e-12);
  EXPECT_THROW((void)bs_price_greeks({100.0, 0.0}, kCall, 0.0), std::domain_error);
}

TEST(BlackScholes, GreeksAreDerivativesOfThePrice) {
  const double S = 95.0, r = 0.04, sigma = 0.25;
  for (auto payoff : {PayoffKind::call, PayoffKind::put, PayoffKind::digital_call}) {
    const OptionSpec opt{100.0, 0.8, payoff};
    const auto v = bs_price_greeks({S, r}, opt, sigma);
    const double hS = 1e-3, hs = 1e-5, hr = 1e-5;
    const double dS = (price_at(S + hS, r, sigma, opt) - price_at(S - hS, r, sigma, opt)) / (2 * hS);
    const double gS =
        (price_at(S + hS, r, sigma, opt) - 2 * v.price + price_at(S - hS, r, sigma, opt)) / (hS * hS);
    const double dv = (price_at(S, r, sigma + hs, opt) - price_at(S, r, sigma - hs, opt)) / (2 * hs);
    const double dr = (price_at(S, r + hr, sigma, opt) - price_at(S, r - hr, sigma, opt)) / (2 * hr);
    EXPECT_NEAR(v.delta, dS, 1e-7) << to_string(payoff);
    EXPECT_NEAR(v.gamma, gS, 1e-5) << to_string(payoff);
    EXPECT_NEAR(v.vega, dv, 1e-5 * std::max(1.0, std::abs(dv))) << to_string(payoff);
    EXPECT_NEAR(v.rho, dr, 1e-5 * std::max(1.0, std::abs(dr))) << to_string(payoff);
  }
}

TEST(BlackScholes, ConstantVolatilityDetection) {
  EXPECT_EQ(constant_volatility(BlackScholes{0.3}), 0.3);
  EXPECT_EQ(constant_volatility(AlphaRFSV{0.2, 0.0, 1.0, 0.0, {}}), 0.2);
  EXPECT_FALSE(constant_volatility(AlphaRFSV{0.2, 0.1, 1.0, 0.0, {}}));
  EXPECT_DOUBLE_EQ(*constant_volatility(AlphaSV{0.04, 0.0, 1.0, 0.0}), 0.2);
  EXPECT_FALSE(constant_volatility(SteinStein{}));
}

TEST(FiniteDifference, BlackScholesDeltaAndVega) {
  const TimeGrid g(1.0, 4);
  const MarketSpec m{100.0, 0.02};
  const auto bs = bs_price_greeks(m, kCall, 0.2);
  const auto d = fd_greek(GreekKind::delta, BlackScholes{0.2}, m, kCall, g, 50000, 1, default_bump(GreekKind::delta));
  EXPECT_NEAR(d.value, bs.delta, 3 * d.std_error + 1e-4);
  const auto v = fd_greek(GreekKind::vega, BlackScholes{0.2}, m, kCall, g, 50000, 2, default_bump(GreekKind::vega));
  EXPECT_NEAR(v.value, bs.vega, 3 * v.std_error + 1e-2);
  const auto rho = fd_greek(GreekKind::rho, BlackScholes{0.2}, m, kCall, g, 50000, 3, default_bump(GreekKind::rho));
  EXPECT_NEAR(rho.value, bs.rho, 3 * rho.std_error + 1e-2);
}

TEST(FiniteDifference, CommonRandomNumbersCutTheStandardError) {
  const TimeGrid g(1.0, 4);
  const MarketSpec m{100.0, 0.0};
  FdOptions indep;
  indep.common_random_numbers = false;
  const auto crn = fd_greek(GreekKind::delta, BlackScholes{0.2}, m, kCall, g, 10000, 4, default_bump(GreekKind::delta));
  const auto ind =
      fd_greek(GreekKind::delta, BlackScholes{0.2}, m, kCall, g, 10000, 4, default_bump(GreekKind::delta), 0.99, indep);
  EXPECT_GE(ind.std_error / crn.std_error, 5.0);
}

TEST(FiniteDifference, Preconditions) {
  const TimeGrid g(1.0, 4);
  const MarketSpec m{100.0, 0.0};
  EXPECT_THROW((void)fd_greek(GreekKind::delta, BlackScholes{0.2}, m, kCall, g, 100, 1, {BumpParameter::S0, 0.0}),
               std::invalid_argument);
  EXPECT_THROW((void)fd_greek(GreekKind::delta, BlackScholes{0.2}, m, kCall, g, 100, 1, {BumpParameter::r, 1e-3}),
               std::invalid_argument);
  EXPECT_THROW((void)fd_greek(GreekKind::price, BlackScholes{0.2}, m, kCall, g, 100, 1, {BumpParameter::S0, 1e-2}),
               std::invalid_argument);
  EXPECT_THROW((void)fd_greek(GreekKind::rho, BlackScholes{0.2}, m, kCall, g, 100, 1, default_bump(GreekKind::rho)),
               std::domain_error);
  EXPECT_THROW((void)fd_greek(GreekKind::hsens, BlackScholes{0.2}, m, kCall, g, 100, 1, default_bump(GreekKind::hsens)),
               UnsupportedError);
  EXPECT_THROW((void)fd_greek(GreekKind::hsens, AlphaRFSV{0.2, 0.2, 1.0, 0.0, {0.9995, 1e-6}}, m, kCall, g, 100, 1,
                              default_bump(GreekKind::hsens)),
               std::domain_error);
}

TEST(FiniteDifference, HurstBumpKeepsTheDriverIncrements) {
  // A zero vol-of-vol model has no H dependence, so the CRN difference vanishes path by path.
  const TimeGrid g(1.0, 16);
  const auto e = fd_greek(GreekKind::hsens, AlphaRFSV{0.2, 0.0, 1.0, -0.3, {0.2, 1e-6}}, {100.0, 0.0}, kCall, g,
                          1000, 8, default_bump(GreekKind::hsens));
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.std_error, 0.0);
}
