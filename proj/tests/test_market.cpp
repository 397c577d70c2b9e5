#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "oligo/demand.hpp"
#include "oligo/errors.hpp"
#include "oligo/market.hpp"

using namespace oligo;

TEST(UnitAdValorem, ZeroTaxesGiveZeroSensitivities) {
  auto s = scheme_unit_adval();
  std::array<double, 2> T{0, 0};
  auto x = sensitivities_at(*s, 1.7, 0.3, T);
  EXPECT_EQ(x.nu, 0);
  EXPECT_EQ(x.tau, 0);
  EXPECT_EQ(x.kappa, 0);
}

TEST(UnitAdValorem, SensitivitiesBySubstitution) {
  auto s = scheme_unit_adval();
  std::array<double, 2> T{0.2, 0.1};
  auto a = sensitivities_at(*s, 1, 1, T);
  EXPECT_NEAR(a.tau, 0.3, 1e-15);
  EXPECT_NEAR(a.nu, 0.1, 1e-15);
  auto b = sensitivities_at(*s, 2, 1, T);
  EXPECT_NEAR(b.nu, 0.1, 1e-15);
  EXPECT_NEAR(b.tau, 0.2, 1e-15);
  EXPECT_NEAR(b.kappa, 0.1, 1e-15);
  EXPECT_NEAR(b.nu2, 0, 1e-15);
  EXPECT_NEAR(b.tau2, 0, 1e-15);
}

TEST(UnitAdValorem, RejectsFullAdValorem) {
  std::array<double, 2> T{0, 1};
  EXPECT_THROW(scheme_unit_adval()->check_taxes(T), ConfigError);
}

TEST(ExogenousCompetition, ZeroRivalOutputIsUnitAdValorem) {
  auto ex = scheme_exogenous_competition(constant_cost(0.3));
  auto ua = scheme_unit_adval();
  std::array<double, 3> T3{0.1, 0.15, 0};
  std::array<double, 2> T2{0.1, 0.15};
  for (double p : {0.5, 1.0, 2.0})
    for (double q : {0.2, 0.9}) {
      EXPECT_NEAR(ex->phi(p, q, T3), ua->phi(p, q, T2), 1e-12);
      EXPECT_NEAR(ex->phi_tilde(p, q, T3), ua->phi_tilde(p, q, T2), 1e-12);
    }
}

TEST(ExogenousCompetition, RivalOutputWithoutTaxes) {
  auto cost = std::make_shared<LinearMarginalCost>(0.2, 0.5);
  auto ex = scheme_exogenous_competition(cost);
  const double qe = 0.1, p = 1.3, q = 0.6;
  std::array<double, 3> T{0, 0, qe};
  // firm's price is that of total output; phi nets out the rival units
  const double expected = qe * p + cost->cost(q - qe) - cost->cost(q);
  EXPECT_NEAR(ex->phi(p, q, T), expected, 1e-12);
  EXPECT_THROW(ex->check_point(p, 0.05, T), DomainError);
}

TEST(SalesRestriction, NoRestrictionIsUnitAdValorem) {
  auto d = constant_elasticity_demand({.A = 1, .eps0 = 1, .gamma = 1, .n = 1});
  auto s = scheme_sales_restriction(d);
  const auto& sr = dynamic_cast<const SalesRestriction&>(*s);
  EXPECT_NEAR(sr.h(0.7, 0), 0, 1e-15);
  std::array<double, 3> T{0.1, 0.2, 0};
  EXPECT_NEAR(s->phi(1.5, 0.7, T), 0.1 * 0.7 + 0.2 * 1.5 * 0.7, 1e-12);
}

TEST(SalesRestriction, UnitElasticHalfLoss) {
  auto d = constant_elasticity_demand({.A = 1, .eps0 = 1, .gamma = 1, .n = 1});
  const auto& sr = dynamic_cast<const SalesRestriction&>(*scheme_sales_restriction(d));
  for (double q : {0.3, 1.0, 4.0}) EXPECT_NEAR(sr.h(q, 1), 0.5, 1e-12);
}

TEST(TaxEvasion, NoConcealmentIsUnitAdValorem) {
  auto ev = scheme_tax_evasion(1.0, 0.5);
  auto ua = scheme_unit_adval();
  std::array<double, 3> T3{0.2, 0.1, 0};
  std::array<double, 2> T2{0.2, 0.1};
  auto a = sensitivities_at(*ev, 2, 1, T3);
  auto b = sensitivities_at(*ua, 2, 1, T2);
  EXPECT_NEAR(a.nu, b.nu, 1e-12);
  EXPECT_NEAR(a.tau, b.tau, 1e-12);
  EXPECT_NEAR(a.kappa, b.kappa, 1e-12);
  EXPECT_NEAR(a.nu2, b.nu2, 1e-12);
  EXPECT_NEAR(a.tau2, b.tau2, 1e-12);
}

TEST(TaxEvasion, NoAdValoremNothingToEvade) {
  auto ev = scheme_tax_evasion(1.0, 0.5);
  std::array<double, 3> T{0.3, 0, 0.4};
  EXPECT_NEAR(ev->phi(1.4, 0.8, T), 0.3 * 0.8, 1e-15);
  EXPECT_NEAR(ev->phi_tilde(1.4, 0.8, T), 0.3 * 0.8, 1e-15);
}

TEST(TaxEvasion, ValuesBySubstitution) {
  auto ev = scheme_tax_evasion(0, 0);
  for (double t : {0.0, 0.3}) {
    std::array<double, 3> T{t, 0.2, 0.1};
    EXPECT_NEAR(ev->phi(1, 1, T), t + 0.2 - 0.004, 1e-15);
    EXPECT_NEAR(ev->phi_tilde(1, 1, T), t + 0.2 - 0.008, 1e-15);
  }
}

TEST(ExchangeRate, NoImportsLeavesTaxes) {
  auto x = exchange_rate_taxes(0.1, 0.2, 0, 1.5);
  EXPECT_EQ(x.t_eff, 0.1);
  EXPECT_EQ(x.v_eff, 0.2);
  EXPECT_EQ(x.dt_de, 0);
  EXPECT_EQ(x.dv_de, 0);
  auto z = exchange_rate_taxes(0.1, 0.2, 0.7, 0);
  EXPECT_EQ(z.t_eff, 0.1);
  EXPECT_EQ(z.v_eff, 0.2);
}

TEST(ExchangeRate, FullImportsAtParity) {
  auto x = exchange_rate_taxes(0, 0, 1, 1);
  EXPECT_NEAR(x.v_eff, 0.5, 1e-15);
  EXPECT_NEAR(x.t_eff, 0, 1e-15);
  EXPECT_NEAR(x.dv_de, 0.25, 1e-15);
  EXPECT_THROW(exchange_rate_taxes(0, 0, -1, 1), DomainError);
}

TEST(ExchangeRate, DerivativesMatchDifferences) {
  const double t = 0.15, v = 0.1, a = 0.4, e = 1.3, h = 1e-6;
  auto x = exchange_rate_taxes(t, v, a, e);
  auto up = exchange_rate_taxes(t, v, a, e + h), dn = exchange_rate_taxes(t, v, a, e - h);
  EXPECT_NEAR(x.dt_de, (up.t_eff - dn.t_eff) / (2 * h), 1e-8);
  EXPECT_NEAR(x.dv_de, (up.v_eff - dn.v_eff) / (2 * h), 1e-8);
}

// Analytic scheme partials against numeric differentiation on every built-in scheme.
TEST(SchemeProperty, AnalyticPartialsMatchNumeric) {
  auto d = constant_elasticity_demand({.A = 1, .eps0 = 2, .gamma = 3, .n = 2});
  std::vector<std::pair<SchemePtr, std::vector<double>>> cases = {
      {scheme_unit_adval(), {0.1, 0.2}},
      {scheme_exogenous_competition(std::make_shared<LinearMarginalCost>(0.1, 0.3)), {0.1, 0.2, 0.05}},
      {scheme_sales_restriction(d), {0.1, 0.2, 0.3}},
      {scheme_tax_evasion(1.2, 0.3), {0.1, 0.2, 0.2}},
      {scheme_cost_shift(), {0.1, 0.2, 0.05}},
      {with_marginal_taxes(scheme_tax_evasion(0.8, 0.1)), {0.1, 0.2, 0.2, 0, 0}},
  };
  const double p = 1.4, q = 0.6;
  for (const auto& [s, T] : cases) {
    auto a = s->partials(p, q, T);
    auto m = numeric_scheme_partials(*s, p, q, T);
    auto close = [&](double x, double y, const char* what) {
      EXPECT_NEAR(x, y, 1e-5 * std::max(1.0, std::abs(y))) << s->name() << " " << what;
    };
    close(a.phi_p, m.phi_p, "phi_p");
    close(a.phi_q, m.phi_q, "phi_q");
    close(a.phi_pp, m.phi_pp, "phi_pp");
    close(a.phi_qq, m.phi_qq, "phi_qq");
    close(a.phi_pq, m.phi_pq, "phi_pq");
    close(a.phi_tilde_p, m.phi_tilde_p, "phi_tilde_p");
    close(a.phi_tilde_q, m.phi_tilde_q, "phi_tilde_q");
    ASSERT_EQ(a.phi_T.size(), T.size());
    for (std::size_t l = 0; l < T.size(); ++l) {
      close(a.phi_T[l], m.phi_T[l], "phi_T");
      close(a.phi_pT[l], m.phi_pT[l], "phi_pT");
      close(a.phi_qT[l], m.phi_qT[l], "phi_qT");
      close(a.phi_tilde_T[l], m.phi_tilde_T[l], "phi_tilde_T");
    }
  }
}

TEST(Conduct, OmegaMatchesDifference) {
  auto d = logit_demand({.delta = 1, .beta = 1, .n = 3});
  for (const auto& c : {ConductModel::price_competition(), ConductModel::quantity_competition(),
                        ConductModel::constant(0.4)}) {
    const double q = 0.2;
    auto g = diagnostics_at_quantity(*d, q);
    auto v = c.evaluate(*d, g);
    EXPECT_NEAR(v.omega, omega_numeric(*d, c, q), 1e-6) << c.name();
  }
}

TEST(Conduct, MonopolyThetaIsOne) {
  auto d = linear_demand({.b = 1, .lambda = 1, .mu = 0, .n = 1});
  auto g = diagnostics_at(*d, 0.4);
  EXPECT_NEAR(ConductModel::price_competition().evaluate(*d, g).theta, 1, 1e-12);
  EXPECT_NEAR(ConductModel::quantity_competition().evaluate(*d, g).theta, 1, 1e-12);
}

TEST(Cost, ChiOfPowerCost) {
  auto c = std::make_shared<PowerCost>(2, 3);
  EXPECT_NEAR(c->chi(0.7), 2, 1e-12);
  EXPECT_EQ(constant_cost(0.5)->chi(0.3), 0);
}
