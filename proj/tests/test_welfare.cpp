#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "oligo/errors.hpp"
#include "oligo/oracle.hpp"
#include "oligo/welfare.hpp"

using namespace oligo;

TEST(McUnit, ZeroTaxesIsThetaRho) { EXPECT_NEAR(mc_unit(0.3, 2, 0, 0, 1).value, 0.3, 1e-15); }

TEST(McUnit, HandEvaluation) { EXPECT_NEAR(mc_unit(0.3, 2, 0.2, 0.2, 1).value, 0.8, 1e-14); }

TEST(McUnit, PerfectCompetitionNoTax) { EXPECT_EQ(mc_unit(0, 2, 0, 0, 0.7).value, 0); }

TEST(McUnit, ZeroDenominatorIsUndefined) {
  // 1/rho + v - eps tau = 0
  auto r = mc_unit(0.3, 2, 0.75, 0.5, 1);
  EXPECT_FALSE(r.defined());
  EXPECT_THROW(r.get("MC_t"), UndefinedRatio);
}

TEST(Incidence, MonopolyLinear) {
  EXPECT_NEAR(incidence(1, 0, 0.5).value, 0.5, 1e-15);
  EXPECT_NEAR(1 / incidence(1, 0.3, 0.7).value, 1 / 0.7, 1e-14);
}

TEST(RhoV, FromRhoT) {
  EXPECT_NEAR(rho_v_from_rho_t(0.6, 1, 2), 0.3, 1e-15);
  EXPECT_EQ(rho_v_from_rho_t(0.6, 0, 2), 0.6);
  EXPECT_EQ(rho_v_from_rho_t(0.6, 2, 2), 0);
}

TEST(SufficientStats, ConsistentWithStructuralForms) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 200; ++i) {
    const double eps = 1.1 + 3 * U(rng), theta = U(rng), tau = 0.3 * U(rng), v = 0.3 * U(rng);
    const double rt = 0.2 + 1.5 * U(rng), rv = rho_v_from_rho_t(rt, theta, eps);
    auto s = mc_sufficient_stats(rt, rv, eps, v, tau);
    auto a = mc_unit(theta, eps, tau, v, rt), b = mc_adval(theta, eps, tau, v, rv);
    if (!a.defined() || !b.defined()) continue;
    EXPECT_NEAR(s.mc_t.value, a.value, 1e-12 * std::max(1.0, std::abs(a.value)));
    EXPECT_NEAR(s.mc_v.value, b.value, 1e-12 * std::max(1.0, std::abs(b.value)));
  }
  EXPECT_NEAR(mc_sufficient_stats(1, 0.85, 2, 0.2, 0.2).mc_t.value, 0.8, 1e-14);
  EXPECT_EQ(mc_sufficient_stats(0.7, 0.7, 2, 0, 0).mc_t.value, 0);
}

namespace {

SymmetricEquilibrium linear_eq(double theta, double t, double v) {
  Market m{linear_demand({.b = 1, .lambda = 1, .mu = 0, .n = 1}), constant_cost(0.1), ConductModel::constant(theta),
           scheme_unit_adval()};
  std::array<double, 2> T{t, v};
  return solve_symmetric(m, T);
}

}  // namespace

TEST(PassthroughGeneral, LinearConstantTheta) {
  for (double theta : {0.0, 0.4, 1.0})
    for (double v : {0.0, 0.2}) {
      auto r = passthrough_general(linear_eq(theta, 0.05, v));
      EXPECT_NEAR(r.rho_t.value, 1 / ((1 - v) * (1 + theta)), 1e-12);
    }
}

TEST(PassthroughGeneral, RatioIsEquationRelation) {
  auto eq = linear_eq(0.6, 0.1, 0.1);
  auto r = passthrough_general(eq);
  EXPECT_NEAR(r.rho_v.value / r.rho_t.value, (eq.diag.eps - eq.theta) / eq.diag.eps, 1e-12);
}

TEST(PassthroughGeneral, CompetitiveWithRisingCost) {
  Market m{linear_demand({.b = 1, .lambda = 1, .mu = 0, .n = 1}), std::make_shared<LinearMarginalCost>(0.1, 0.8),
           ConductModel::constant(0), scheme_unit_adval()};
  std::array<double, 2> T{0, 0};
  auto eq = solve_symmetric(m, T);
  EXPECT_NEAR(passthrough_general(eq).rho_t.value, 1 / (1 + eq.diag.eps * eq.chi), 1e-12);
}

TEST(PassthroughModes, AgreeWithGeneral) {
  for (int n : {1, 2, 4}) {
    auto d = logit_demand({.delta = 1, .beta = 1.1, .n = n});
    std::array<double, 2> T{0.05, 0.1};
    Market mp{d, std::make_shared<LinearMarginalCost>(0.1, 0.3), ConductModel::price_competition(), scheme_unit_adval()};
    Market mq{d, std::make_shared<LinearMarginalCost>(0.1, 0.3), ConductModel::quantity_competition(),
              scheme_unit_adval()};
    auto ep = solve_symmetric(mp, T), eq = solve_symmetric(mq, T);
    auto gp = passthrough_general(ep), pp = passthrough_price(ep);
    auto gq = passthrough_general(eq), qq = passthrough_quantity(eq);
    EXPECT_NEAR(pp.rho_t.value, gp.rho_t.value, 1e-10);
    EXPECT_NEAR(pp.rho_v.value, gp.rho_v.value, 1e-10);
    EXPECT_NEAR(qq.rho_t.value, gq.rho_t.value, 1e-10);
    EXPECT_NEAR(qq.rho_v.value, gq.rho_v.value, 1e-10);
    EXPECT_NEAR(wf_equivalent_form(ep).value, gp.rho_t.value, 1e-10);
    EXPECT_NEAR(wf_equivalent_form(eq).value, gq.rho_t.value, 1e-10);
  }
}

TEST(Rho0, UnitAdValoremMatchesUnitRate) {
  auto eq = linear_eq(0.5, 0.1, 0.2);
  auto ptv = passthrough_vector(eq);
  EXPECT_NEAR(ptv.rho0, passthrough_general(eq).rho_t.value, 1e-12);
  EXPECT_NEAR(ptv.rho_tilde[1] / ptv.rho_tilde[0], eq.p_star * (1 - eq.theta / eq.diag.eps), 1e-12);
  for (std::size_t l = 0; l < 2; ++l) EXPECT_NEAR(ptv.rho[l] * eq.sens.f[l], ptv.rho_tilde[l], 1e-14);
}

TEST(Rho0, CompetitiveWithoutCorrections) {
  Sensitivities s;
  DemandDiagnostics d;
  d.eps = 2;
  d.eta = 0.5;
  EXPECT_NEAR(rho0_general(s, d, 0, 0, 0).value, 1, 1e-15);
}

TEST(Rho0, EvasionWithoutConcealmentMatchesUnitAdValorem) {
  auto d = logit_demand({.delta = 1, .beta = 1, .n = 3});
  Market a{d, constant_cost(0.1), ConductModel::price_competition(), scheme_unit_adval()};
  Market b{d, constant_cost(0.1), ConductModel::price_competition(), scheme_tax_evasion(1, 0)};
  std::array<double, 2> Ta{0.1, 0.2};
  std::array<double, 3> Tb{0.1, 0.2, 0};
  EXPECT_NEAR(passthrough_vector(solve_symmetric(a, Ta)).rho0, passthrough_vector(solve_symmetric(b, Tb)).rho0,
              1e-12);
}

TEST(Gradients, LedgerIdentityAndPureTaxForm) {
  auto eq = linear_eq(0.7, 0.1, 0.15);
  auto ptv = passthrough_vector(eq);
  auto g = welfare_gradients(eq, ptv);
  for (std::size_t l = 0; l < 2; ++l) {
    EXPECT_NEAR(g.grad_CS[l] + g.grad_PS[l] + g.grad_R[l], g.grad_W[l], 1e-12);
    const double expect =
        -((1 - eq.sens.nu) * eq.theta + eq.diag.eps * eq.sens.tau) * ptv.rho_tilde[l] * eq.q_star;
    EXPECT_NEAR(g.grad_W[l], expect, 1e-12);
  }
}

TEST(Ratios, PureTaxReducesToScalarForms) {
  auto eq = linear_eq(0.4, 0.1, 0.15);
  auto ptv = passthrough_vector(eq);
  auto r = welfare_ratios(eq, ptv);
  const double eps = eq.diag.eps, tau = eq.sens.tau, v = eq.sens.nu;
  EXPECT_NEAR(r.MC[0], mc_unit(eq.theta, eps, tau, v, ptv.rho[0]).value, 1e-12);
  EXPECT_NEAR(r.MC[1], mc_adval(eq.theta, eps, tau, v, ptv.rho[1]).value, 1e-12);
  EXPECT_NEAR(r.I[0], incidence(eq.theta, v, ptv.rho[0]).value, 1e-12);
  auto fg = ratios_from_gradients(welfare_gradients(eq, ptv));
  for (std::size_t l = 0; l < 2; ++l) {
    EXPECT_NEAR(r.MC[l], fg.MC[l], 1e-12);
    EXPECT_NEAR(r.I[l], fg.I[l], 1e-12);
    EXPECT_NEAR(r.SI[l], fg.SI[l], 1e-12);
  }
}

TEST(Ratios, PureCostShare) {
  auto eq = linear_eq(0.4, 0.1, 0.15);
  auto ptv = passthrough_vector(eq);
  std::array<double, 2> g0{0, 0};
  auto r = welfare_ratios(eq, ptv, g0);
  const double nu = eq.sens.nu, et = eq.diag.eps * eq.sens.tau;
  const double expect = (1 / ptv.rho[0] + (1 - nu) * eq.theta + et) / (nu - et);
  EXPECT_NEAR(r.MC[0], expect, 1e-12 * std::abs(expect));
}

TEST(ConsumerSurplus, LinearTriangle) {
  auto d = linear_demand({.b = 1, .lambda = 1, .mu = 0, .n = 1});
  EXPECT_NEAR(consumer_surplus(*d, 0.5), 0.125, 1e-12);
  EXPECT_NEAR(quadrature_cs(*d, 0.5, 1.0), 0.125, 1e-12);
}

TEST(GlobalRatio, LinearMonopolyAreas) {
  Market m{linear_demand({.b = 1, .lambda = 1, .mu = 0, .n = 1}), constant_cost(0), ConductModel::price_competition(),
           scheme_unit_adval()};
  std::array<double, 2> T{0, 0};
  auto g = global_ratio(m, T, 0, 0, kInf, Measure::CS, Measure::PS);
  // CS = 1/8, PS = 1/4 at zero tax; both vanish at the choke tax
  EXPECT_NEAR(g.level_ratio.value, 0.5, 1e-10);
  EXPECT_NEAR(g.ratio.value, 0.5, 1e-6);
  EXPECT_NEAR(g.weighted_average.value, 0.5, 1e-6);
}

TEST(GlobalRatio, EmptyIntervalUndefined) {
  Market m{linear_demand({.b = 1, .lambda = 1, .mu = 0, .n = 1}), constant_cost(0), ConductModel::price_competition(),
           scheme_unit_adval()};
  std::array<double, 2> T{0.1, 0};
  EXPECT_FALSE(global_ratio(m, T, 0, 0.1, 0.1, Measure::CS, Measure::PS).ratio.defined());
}

TEST(GlobalRatio, ShortIntervalApproachesLocalMc) {
  Market m{linear_demand({.b = 1, .lambda = 1, .mu = 0.2, .n = 3}), constant_cost(0.1),
           ConductModel::price_competition(), scheme_unit_adval()};
  std::array<double, 2> T{0.1, 0.1};
  auto eq = solve_symmetric(m, T);
  auto local = welfare_ratios(eq, passthrough_vector(eq));
  auto g = global_ratio(m, T, 0, 0.1, 0.1 + 1e-4, Measure::W, Measure::R);
  EXPECT_NEAR(-g.ratio.value, local.MC[0], 1e-3);
}

TEST(Property, CurrencyRescalingLeavesRatios) {
  auto sc = generate_scenarios(11, 1, {SchemeKind::unit_adval});
  for (const auto& s : sc) {
    auto a = solve_symmetric(build_market(s), s.T);
    auto s2 = rescale_currency(s, 3.0);
    auto b = solve_symmetric(build_market(s2), s2.T);
    auto ra = passthrough_general(a), rb = passthrough_general(b);
    EXPECT_NEAR(a.theta, b.theta, 1e-10) << s.label;
    EXPECT_NEAR(a.diag.eps, b.diag.eps, 1e-10) << s.label;
    EXPECT_NEAR(ra.rho_t.value, rb.rho_t.value, 1e-9) << s.label;
    EXPECT_NEAR(ra.rho_v.value, rb.rho_v.value, 1e-9) << s.label;
  }
}
