#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qosm/cascade.hpp"
#include "qosm/numeric.hpp"
#include "qosm/regime.hpp"

using namespace qosm;
namespace t = qosm::testing;

namespace {

constexpr double kTwoThirds = 2.0 / 3.0;

MarketConfig bdc_config(double c) { return {PowerLaw{-2.5}, Rational{6.0, 0.7}, kTwoThirds, c}; }

TEST(WShape, HandValue) { EXPECT_NEAR(w_shape(PowerLaw{0.0}, 0.5, 4.0), 2.0 / std::sqrt(3.0), 1e-15); }

TEST(WShape, MatchesPiecewiseClosedForms) {
  // the three alpha cases written out explicitly
  for (double b : {1.1, 2.0, 7.5, 300.0}) {
    const double s = 0.4;
    const double below = std::pow(b, s) * std::pow(1.5, 1.0 - s) * std::pow(1.0 - std::pow(b, -1.5), -(1.0 - s));
    EXPECT_NEAR(w_shape(PowerLaw{-2.5}, s, b), below, 1e-13 * below);
    const double at = std::pow(b, s) * std::pow(std::log(b), -(1.0 - s));
    EXPECT_NEAR(w_shape(PowerLaw{-1.0}, s, b), at, 1e-13 * at);
    const double above = std::pow(b, s) * std::pow(2.0, 1.0 - s) * std::pow(b * b - 1.0, -(1.0 - s));
    EXPECT_NEAR(w_shape(PowerLaw{1.0}, s, b), above, 1e-13 * above);
  }
}

TEST(WShape, BlowsUpNearOne) {
  for (double alpha : {-3.0, -1.0, 0.0, 2.0}) {
    double prev = 0.0;
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
      const double w = w_shape(PowerLaw{alpha}, 0.5, 1.0 + eps);
      EXPECT_GT(w, prev);
      prev = w;
    }
    EXPECT_GT(prev, 1e3);
  }
}

TEST(WShape, RejectsTruncatedAndDomain) {
  EXPECT_THROW(w_shape(TruncatedLinear{3.0}, 0.5, 2.0), UnsupportedDistribution);
  EXPECT_THROW(w_shape(PowerLaw{0.0}, 0.5, 1.0), DomainError);
}

TEST(OptimalQuality, HandValues) {
  EXPECT_NEAR(optimal_quality(PowerLaw{-2.0}, 0.5), 2.0, 1e-15);
  EXPECT_NEAR(optimal_quality(PowerLaw{-1.0}, kTwoThirds), std::exp(0.5), 1e-15);
  EXPECT_NEAR(optimal_quality(PowerLaw{-2.5}, kTwoThirds), std::pow(1.75, kTwoThirds), 1e-15);
}

TEST(OptimalQuality, ContinuousAcrossLogBranch) {
  const double at = optimal_quality(PowerLaw{-1.0}, 0.6);
  for (double e : {-1e-2, -1e-5, -1e-10, 1e-10, 1e-5, 1e-2}) {
    // first-order change in ln q0 is e (1-s)^2 / (2 s^2)
    EXPECT_NEAR(optimal_quality(PowerLaw{-1.0 + e}, 0.6), at, 2.0 * std::abs(e) * at) << e;
  }
}

TEST(OptimalQuality, MatchesGoldenSectionOracleOnWShape) {
  const double q0 = optimal_quality(PowerLaw{-2.5}, kTwoThirds);
  const double oracle = t::golden_argmin([](double b) { return t::w_by_quadrature(-2.5, kTwoThirds, b); }, 1.01, 10.0);
  EXPECT_LE(std::abs(q0 - oracle) / oracle, 1e-6);
}

TEST(OptimalQuality, RandomDcConfigurations) {
  auto g = t::rng(21);
  int checked = 0;
  while (checked < 40) {
    const double alpha = t::uniform(g, -4.0, 3.0);
    const double s = t::uniform(g, 0.05, 0.95);
    const PowerLaw f{alpha};
    if (!is_dc(f, s)) continue;
    const double q0 = optimal_quality(f, s);
    if (q0 > 1e6) continue;  // argmin too flat for a bounded search
    const double oracle =
        t::golden_argmin([&](double b) { return std::log(w_shape(f, s, b)); }, 1.0 + 1e-9, 10.0 * q0, 1e-15);
    EXPECT_LE(std::abs(q0 - oracle) / q0, 1e-6) << "alpha=" << alpha << " s=" << s;
    ++checked;
  }
}

TEST(OptimalQuality, UcRegimeError) {
  EXPECT_THROW(optimal_quality(PowerLaw{1.0}, 0.5), RegimeError);
  EXPECT_THROW(optimal_quality(TruncatedLinear{3.0}, 0.5), UnsupportedDistribution);
}

TEST(ClassifyRegime, Examples) {
  const auto uc = classify_regime(PowerLaw{1.0}, Rational{6.0, 1.0}, 0.5);
  EXPECT_EQ(uc.regime, Regime::UC);
  EXPECT_FALSE(uc.q0);
  EXPECT_NEAR(uc.boundary_margin, 0.5 - kTwoThirds, 1e-15);

  const auto bdc = classify_regime(PowerLaw{-2.5}, Rational{6.0, 0.7}, kTwoThirds);
  EXPECT_EQ(bdc.regime, Regime::BDC);
  ASSERT_TRUE(bdc.q0);
  EXPECT_GT(*bdc.q0, 1.0);
  EXPECT_TRUE(std::isinf(bdc.boundary_margin));

  const auto udc = classify_regime(PowerLaw{-2.5}, Rational{2.0, 1.0}, kTwoThirds);
  EXPECT_EQ(udc.regime, Regime::UDC);
  EXPECT_EQ(udc.sensitivity, LhsKind::Insensitive);
}

TEST(ClassifyRegime, BoundaryPointIsUc) {
  // s = (alpha+1)/(alpha+2) exactly
  EXPECT_EQ(classify_regime(PowerLaw{0.0}, Exponential{}, 0.5).regime, Regime::UC);
  EXPECT_EQ(classify_regime(PowerLaw{0.0}, Exponential{}, 0.5 + 1e-12).regime, Regime::BDC);
  EXPECT_EQ(classify_regime(PowerLaw{-1.0}, Exponential{}, 0.01).regime, Regime::BDC);
}

TEST(ClassifyRegime, AgreesWithDerivativeSignOracle) {
  const double log_b = 300.0 * std::log(10.0);
  int compared = 0;
  for (int i = 0; i < 50; ++i) {
    const double alpha = -4.0 + 7.0 * i / 49.0;
    for (int j = 0; j < 50; ++j) {
      const double s = (j + 1) / 51.0;
      const double e = alpha + 1.0;
      if (e > 0.0 && std::abs(s - e / (e + 1.0)) <= 1e-6) continue;
      EXPECT_EQ(is_dc(PowerLaw{alpha}, s), t::derivative_positive(alpha, s, log_b)) << alpha << " " << s;
      ++compared;
    }
  }
  EXPECT_GE(compared, 2400);
}

TEST(ClassifyRegime, DerivativeOracleAtOneE8MissesFarMinimizers) {
  // at alpha = -1 the minimizer e^((1-s)/s) lies beyond 1e8 when s < 1/(1 + ln 1e8)
  const double log_b = 8.0 * std::log(10.0);
  std::vector<double> misses;
  for (int i = 0; i < 50; ++i) {
    const double alpha = -4.0 + 7.0 * i / 49.0;
    for (int j = 0; j < 50; ++j) {
      const double s = (j + 1) / 51.0;
      const double e = alpha + 1.0;
      if (e > 0.0 && std::abs(s - e / (e + 1.0)) <= 1e-6) continue;
      if (is_dc(PowerLaw{alpha}, s) != t::derivative_positive(alpha, s, log_b)) {
        EXPECT_EQ(alpha, -1.0);
        EXPECT_GT(optimal_quality(PowerLaw{alpha}, s), 1e8);
        misses.push_back(s);
      }
    }
  }
  EXPECT_EQ(misses.size(), 2u);
}

TEST(WShape, DecreasingThroughoutInUcRegime) {
  const auto grid = numeric::spaced_grid(1.01, 1e6, 300, true);
  for (auto [alpha, s] : {std::pair{1.0, 0.5}, std::pair{0.0, 0.3}, std::pair{3.0, 0.7}, std::pair{-0.5, 0.2}}) {
    ASSERT_FALSE(is_dc(PowerLaw{alpha}, s));
    for (std::size_t i = 1; i < grid.size(); ++i) {
      EXPECT_LT(w_shape(PowerLaw{alpha}, s, grid[i]), w_shape(PowerLaw{alpha}, s, grid[i - 1]));
    }
  }
}

TEST(ProfitableInterval, BracketsTheMinimizer) {
  const double c0 = first_threshold(PowerLaw{-2.5}, Rational{6.0, 0.7}, kTwoThirds);
  const auto interval = profitable_interval(bdc_config(0.5 * c0));
  ASSERT_TRUE(interval);
  const double q0 = optimal_quality(PowerLaw{-2.5}, kTwoThirds);
  EXPECT_LT(interval->first, q0);
  EXPECT_GT(interval->second, q0);
  EXPECT_TRUE(std::isfinite(interval->second));
  EXPECT_FALSE(profitable_interval(bdc_config(1.01 * c0)));
  // UDC: every quality solves
  const auto udc = profitable_interval({PowerLaw{-2.5}, Rational{2.0, 1.0}, kTwoThirds, 100.0});
  ASSERT_TRUE(udc);
  EXPECT_EQ(udc->first, 1.0);
}

TEST(CompetitiveVsMonopoly, DcMinPriceBelowMaxRevenueQuality) {
  const double c0 = first_threshold(PowerLaw{-2.5}, Rational{6.0, 0.7}, kTwoThirds);
  const auto cfg = bdc_config(0.5 * c0);
  const auto [lo, hi] = *profitable_interval(cfg);
  const auto grid = numeric::spaced_grid(lo * (1 + 1e-9), hi * (1 - 1e-9), 400, true);
  const auto scan = competitive_vs_monopoly(cfg, grid);
  ASSERT_EQ(scan.rows.size(), 400u);
  EXPECT_LT(scan.rows[*scan.argmin_price].quality, scan.rows[*scan.argmax_revenue].quality);
  EXPECT_NEAR(scan.rows[*scan.argmin_price].quality, optimal_quality(cfg.f, cfg.s), scan.grid_resolution);
  // unprofitable qualities are skipped
  const double outside[] = {lo * 0.99, hi * 1.01};
  EXPECT_TRUE(competitive_vs_monopoly(cfg, outside).rows.empty());
}

TEST(CompetitiveVsMonopoly, UcPriceDecreasingTrafficAndRevenueIncreasing) {
  const MarketConfig cfg{PowerLaw{1.0}, Rational{6.0, 1.0}, 0.5, 1.0};
  const auto [lo, hi] = *profitable_interval(cfg);
  EXPECT_TRUE(std::isinf(hi));
  const auto grid = numeric::spaced_grid(lo * (1 + 1e-9), 100.0 * lo, 200, true);
  const auto scan = competitive_vs_monopoly(cfg, grid);
  ASSERT_EQ(scan.rows.size(), 200u);
  for (std::size_t i = 1; i < scan.rows.size(); ++i) {
    EXPECT_LT(scan.rows[i].price, scan.rows[i - 1].price);
    EXPECT_GT(scan.rows[i].weighted_traffic, scan.rows[i - 1].weighted_traffic);
    EXPECT_GT(scan.rows[i].revenue, scan.rows[i - 1].revenue);
  }
}

TEST(CompetitiveVsMonopoly, SinglePointGrid) {
  const double q0 = optimal_quality(PowerLaw{-2.5}, kTwoThirds);
  const double grid[] = {q0};
  const auto scan = competitive_vs_monopoly(bdc_config(0.3), grid);
  ASSERT_EQ(scan.rows.size(), 1u);
  EXPECT_EQ(*scan.argmin_price, 0u);
  EXPECT_EQ(*scan.argmax_revenue, 0u);
}

TEST(CompetitiveVsMonopoly, ArgminQualityIndependentOfC) {
  // on a fixed grid that is profitable for both c values
  const double q0 = optimal_quality(PowerLaw{-2.5}, kTwoThirds);
  const auto grid = numeric::spaced_grid(q0 / 1.05, q0 * 1.05, 201, true);
  const auto a = competitive_vs_monopoly(bdc_config(0.1), grid);
  const auto b = competitive_vs_monopoly(bdc_config(0.3), grid);
  ASSERT_EQ(a.rows.size(), 201u);
  ASSERT_EQ(b.rows.size(), 201u);
  EXPECT_EQ(a.rows[*a.argmin_price].quality, b.rows[*b.argmin_price].quality);
  // the competitive choice does not depend on h either
  MarketConfig other = bdc_config(0.1);
  other.h = Gaussian{};
  const auto c = competitive_vs_monopoly(other, grid);
  ASSERT_EQ(c.rows.size(), 201u);
  EXPECT_EQ(a.rows[*a.argmin_price].quality, c.rows[*c.argmin_price].quality);
}

TEST(CompetitiveVsMonopoly, RevenueMaximizerMovesWithC) {
  const double c0 = first_threshold(PowerLaw{-2.5}, Rational{6.0, 0.7}, kTwoThirds);
  std::vector<double> argmax;
  for (double ratio : {0.9, 0.5, 0.1}) {
    const auto cfg = bdc_config(ratio * c0);
    const auto [lo, hi] = *profitable_interval(cfg);
    const auto scan = competitive_vs_monopoly(cfg, numeric::spaced_grid(lo * (1 + 1e-9), hi * (1 - 1e-9), 400, true));
    argmax.push_back(scan.rows[*scan.argmax_revenue].quality);
  }
  EXPECT_LT(argmax[0], argmax[1]);
  EXPECT_LT(argmax[1], argmax[2]);
}

}  // namespace
