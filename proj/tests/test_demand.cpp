#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oligo/demand.hpp"
#include "oligo/errors.hpp"

using namespace oligo;

TEST(LinearDemand, QuantityAtSymmetricPrice) {
  auto d = linear_demand({.b = 1, .lambda = 1, .mu = 0, .n = 1});
  EXPECT_DOUBLE_EQ(d->quantity(0.25), 0.75);
  auto d2 = linear_demand({.b = 1, .lambda = 1, .mu = 0.5, .n = 2});
  for (double p : {0.1, 0.7, 1.3}) EXPECT_NEAR(d2->quantity(p), 1 - 0.5 * p, 1e-15);
}

TEST(LinearDemand, MonopolyDiagnostics) {
  auto d = linear_demand({.b = 1, .lambda = 1, .mu = 0, .n = 1});
  auto g = diagnostics_at(*d, 0.5);
  EXPECT_NEAR(g.eps, 1.0, 1e-14);
  EXPECT_NEAR(g.alpha, 0.0, 1e-14);
  EXPECT_NEAR(g.sigma, 0.0, 1e-14);
}

TEST(LinearDemand, CurvaturesVanishEverywhere) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mu(0.0, 0.3), p(0.05, 0.4);
  for (int n : {1, 2, 3, 5}) {
    auto d = linear_demand({.b = 1, .lambda = 1, .mu = mu(rng), .n = n});
    auto g = diagnostics_at(*d, p(rng));
    EXPECT_NEAR(g.alpha, 0, 1e-12);
    EXPECT_NEAR(g.sigma, 0, 1e-12);
    EXPECT_NEAR(g.inv_eps_ms, 1, 1e-12);
  }
}

TEST(LinearDemand, RejectsBadParameters) {
  EXPECT_THROW(linear_demand({.b = -1, .lambda = 1, .mu = 0, .n = 1}), ConfigError);
  EXPECT_THROW(linear_demand({.b = 1, .lambda = 1, .mu = 0, .n = 0}), ConfigError);
}

TEST(LogitDemand, SymmetricLogisticPoint) {
  auto d = logit_demand({.delta = 1, .beta = 1, .n = 1});
  EXPECT_NEAR(d->quantity(1.0), 0.5, 1e-15);
}

TEST(LogitDemand, TwoFirmDiagnostics) {
  auto d = logit_demand({.delta = 1, .beta = 1, .n = 2});
  const double p = 1.3;
  const double s = d->quantity(p);
  auto g = diagnostics_at(*d, p);
  EXPECT_NEAR(g.eps, (1 - 2 * s) * p, 1e-12);
  EXPECT_NEAR(g.eps_F, (1 - s) * p, 1e-12);
  EXPECT_NEAR(g.sigma_industry, (1 - 4 * s) / (1 - 2 * s), 1e-10);
  EXPECT_NEAR(d->table_sigma(s), g.sigma_industry, 1e-10);
}

TEST(LogitDemand, PriceInvertsShare) {
  for (int n : {1, 2, 4, 9}) {
    auto d = logit_demand({.delta = 0.7, .beta = 1.6, .n = n});
    for (double p : {0.2, 1.0, 2.5, 6.0}) EXPECT_NEAR(d->price(d->quantity(p)), p, 1e-10);
  }
}

TEST(LogitDemand, ShareOutsideRangeIsDomainError) {
  auto d = logit_demand({.delta = 1, .beta = 1, .n = 2});
  EXPECT_THROW(d->check_quantity(0.5), DomainError);
  EXPECT_THROW(d->check_quantity(0.0), DomainError);
  EXPECT_NO_THROW(d->check_quantity(0.2));
}

TEST(ConstantElasticity, SymmetricCurve) {
  auto d = constant_elasticity_demand({.A = 2, .eps0 = 1.5, .gamma = 3, .n = 3});
  EXPECT_NEAR(d->quantity(2.0), 2 * std::pow(2.0, -1.5), 1e-14);
  EXPECT_NEAR(diagnostics_at(*d, 2.0).eps, 1.5, 1e-12);
}

// Analytic partials against Richardson differences of the firm-level functions.
class PartialsProperty : public ::testing::TestWithParam<int> {};

TEST_P(PartialsProperty, AnalyticMatchesNumeric) {
  const int n = GetParam();
  std::vector<DemandPtr> ds = {
      linear_demand({.b = 1, .lambda = 1, .mu = 0.6 / n, .n = n}),
      logit_demand({.delta = 1, .beta = 1.2, .n = n}),
      constant_elasticity_demand({.A = 1, .eps0 = 1.8, .gamma = 2.6, .n = n}),
  };
  for (const auto& d : ds) {
    const double p = d->family() == "linear" ? 0.4 : 1.1;
    auto a = d->direct(p);
    auto m = numeric_direct_partials(*d, p);
    const double q = a.q, s1 = p / q, s2 = p * p / q;
    EXPECT_NEAR(a.own * s1, m.own * s1, 1e-6) << d->family();
    EXPECT_NEAR(a.own_own * s2, m.own_own * s2, 1e-5) << d->family();
    if (n > 1) {
      EXPECT_NEAR(a.cross * s1, m.cross * s1, 1e-6) << d->family();
      EXPECT_NEAR(a.own_cross * s2, m.own_cross * s2, 1e-5) << d->family();
      EXPECT_NEAR(a.cross_cross * s2, m.cross_cross * s2, 1e-5) << d->family();
    }
    if (n > 2) EXPECT_NEAR(a.cross_pair * s2, m.cross_pair * s2, 1e-5) << d->family();
  }
}

INSTANTIATE_TEST_SUITE_P(Firms, PartialsProperty, ::testing::Values(1, 2, 3, 5));

TEST(MultiProduct, SingleProductReducesToDefinitions) {
  auto d = logit_demand({.delta = 1, .beta = 1, .n = 3});
  const double p = 1.2;
  auto a = d->direct(p);
  MultiProductPartials xi;
  xi.p = p;
  xi.q = a.q;
  xi.x1 = a.own;
  xi.x2 = a.own_own;
  xi.r1 = a.cross;
  xi.r11 = a.own_cross;
  xi.r2 = a.cross_cross;
  xi.r011 = a.cross_pair;
  auto agg = multiproduct_aggregate(xi, 3, 1);
  auto g = diagnostics_at(*d, p);
  EXPECT_NEAR(agg.eps_F, g.eps_F, 1e-12);
  EXPECT_NEAR(agg.eps, g.eps, 1e-12);
}

TEST(MultiProduct, LinearHasNoCurvature) {
  MultiProductPartials xi;
  xi.p = 1;
  xi.q = 0.5;
  xi.x1 = -1;
  xi.x01 = 0.2;
  xi.r1 = 0.1;
  xi.r01 = 0.1;
  auto agg = multiproduct_aggregate(xi, 3, 2);
  EXPECT_EQ(agg.alpha_F, 0);
  EXPECT_EQ(agg.alpha_C, 0);
  xi.q = 0;
  EXPECT_THROW(multiproduct_aggregate(xi, 3, 2), DomainError);
}
