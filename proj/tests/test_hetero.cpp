#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "oligo/errors.hpp"
#include "oligo/hetero.hpp"
#include "oligo/oracle.hpp"
#include "oligo/welfare.hpp"

using namespace oligo;

namespace {

struct Symmetric {
  Market market;
  SymmetricEquilibrium eq;
  HeteroMarket hm;
  HeteroPoint pt;
};

Symmetric symmetric_instance(DemandPtr d, ConductModel c, Mode mode, std::array<double, 2> T) {
  Symmetric s{{d, constant_cost(0.1), c, scheme_unit_adval()}, {}, {}, {}};
  s.eq = solve_symmetric(s.market, T);
  s.hm = hetero_from_symmetric(s.market, mode);
  const int n = d->firms();
  s.pt = hetero_point(s.hm, Vec::Constant(n, s.eq.p_star), T);
  return s;
}

}  // namespace

class HeteroSymmetric : public ::testing::TestWithParam<int> {};

TEST_P(HeteroSymmetric, ReducesToSymmetricModule) {
  const int n = GetParam();
  for (Mode mode : {Mode::price, Mode::quantity}) {
    auto c = mode == Mode::price ? ConductModel::price_competition() : ConductModel::quantity_competition();
    for (DemandPtr d : {DemandPtr(linear_demand({.b = 1, .lambda = 1, .mu = 0.2, .n = n})),
                        DemandPtr(logit_demand({.delta = 1, .beta = 1, .n = n}))}) {
      auto s = symmetric_instance(d, c, mode, {0.05, 0.1});
      const double psi = s.eq.diag.eta * s.eq.theta;
      auto ptm = passthrough_matrix(s.hm, s.pt);
      auto ptv = passthrough_vector(s.eq);
      for (int i = 0; i < n; ++i) {
        EXPECT_NEAR(s.pt.psi(i), psi, 1e-8);
        EXPECT_NEAR(s.pt.Psi.row(i).sum(), -s.eq.diag.eps * s.eq.omega, 1e-8);
        for (int l = 0; l < 2; ++l) EXPECT_NEAR(ptm.rho_tilde(i, l), ptv.rho_tilde[l], 1e-8);
      }
      auto ci = conduct_index_hetero(s.pt);
      for (int i = 0; i < n; ++i) {
        EXPECT_NEAR(ci.theta(i), s.eq.theta, 1e-8);
        EXPECT_NEAR(ci.theta_psi(i), s.eq.theta, 1e-8);
      }
      auto hr = hetero_welfare_ratios(s.pt, ptm);
      auto r = welfare_ratios(s.eq, ptv);
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < 2; ++l) {
          EXPECT_NEAR(hr.MC(i, l), r.MC[l], 1e-8);
          EXPECT_NEAR(hr.I(i, l), r.I[l], 1e-8);
        }
      auto hg = hetero_welfare_gradients(s.pt, ptm);
      auto g = welfare_gradients(s.eq, ptv);
      for (int l = 0; l < 2; ++l) {
        EXPECT_NEAR(hg.total_W(l) / n, g.grad_W[l], 1e-8);
        EXPECT_NEAR(hg.total_CS(l) + hg.total_PS(l) + hg.total_R(l), hg.total_W(l), 1e-12);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Firms, HeteroSymmetric, ::testing::Values(2, 3, 4));

TEST(Hetero, LinearMonopolyUnitPassThrough) {
  auto s = symmetric_instance(linear_demand({.b = 1, .lambda = 1, .mu = 0, .n = 1}),
                              ConductModel::price_competition(), Mode::price, {0, 0});
  auto ptm = passthrough_matrix(s.hm, s.pt);
  EXPECT_NEAR(ptm.rho_tilde(0, 0), 0.5, 1e-10);
}

TEST(Hetero, AsymmetricCostsMatchFiniteDifference) {
  Vec b(3), lam(3);
  b << 1.0, 1.2, 0.9;
  lam << 1.0, 1.1, 0.95;
  HeteroMarket hm;
  hm.demand = HeteroLinearDemand::from_direct(b, lam, 0.2);
  hm.costs = {constant_cost(0.05), constant_cost(0.15), constant_cost(0.1)};
  hm.schemes = {scheme_unit_adval(), scheme_unit_adval(), scheme_unit_adval()};
  std::array<double, 2> T{0.05, 0.1};
  Vec p = solve_hetero(hm, T, Vec::Constant(3, 0.7));
  auto pt = hetero_point(hm, p, T);
  EXPECT_LT(pt.foc_residual.cwiseAbs().maxCoeff(), 1e-9);
  auto ptm = passthrough_matrix(hm, pt);
  Mat fd = fd_hetero_passthrough(hm, T, p, {.h_rel = 1e-6, .richardson = true});
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 2; ++l)
      EXPECT_NEAR(ptm.rho_tilde(i, l), fd(i, l), 1e-5 * std::max(1.0, std::abs(fd(i, l))));
  auto r = hetero_welfare_ratios(pt, ptm);
  for (int l = 0; l < 2; ++l) {
    EXPECT_GE(r.total_MC(l), r.MC.col(l).minCoeff() - 1e-12);
    EXPECT_LE(r.total_MC(l), r.MC.col(l).maxCoeff() + 1e-12);
  }
  auto sc = surplus_change_via_lambda(pt, ptm, 0);
  auto g = hetero_welfare_gradients(pt, ptm);
  EXPECT_NEAR(sc.dCS, g.total_CS(0), 1e-10);
  EXPECT_NEAR(sc.dPS, g.total_PS(0), 1e-10);
}

TEST(Aggregative, CournotMatchesFirmIndexedForm) {
  LinearCournotGame game(2, 1.0, 1.0);
  const double c0 = 0.1, c1 = 0.2;
  Vec a(2);
  a << (1 - 3 * c0 + c0 + c1) / 3, (1 - 3 * c1 + c0 + c1) / 3;
  auto r = aggregative_reduction(game, a, Vec::Zero(2));
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(r.weights.segment(2 * i, 2).sum(), 1, 1e-12);
  EXPECT_NEAR((r.theta - r.theta_chain).cwiseAbs().maxCoeff(), 0, 1e-10);

  HeteroMarket hm;
  hm.demand = game.as_demand();
  hm.mode = Mode::quantity;
  hm.costs = {constant_cost(c0), constant_cost(c1)};
  hm.schemes = {scheme_unit_adval(), scheme_unit_adval()};
  std::array<double, 2> T{0, 0};
  auto pt = hetero_point(hm, hm.demand->prices(a), a, T);
  EXPECT_LT(pt.foc_residual.cwiseAbs().maxCoeff(), 1e-12);
  auto ci = conduct_index_hetero(pt);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(ci.theta(i), r.theta(i), 1e-10);
    EXPECT_NEAR(pt.psi(i), r.psi(i), 1e-10);
  }
}

TEST(Hetero, SingularSystemReported) {
  // identical goods in price competition: the direct system does not exist
  Mat B = Mat::Ones(2, 2);
  Vec a = Vec::Ones(2);
  auto d = std::make_shared<HeteroLinearDemand>(a, B);
  EXPECT_THROW(d->quantities(Vec::Constant(2, 0.5)), Error);
}
