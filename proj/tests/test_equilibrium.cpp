#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "oligo/equilibrium.hpp"
#include "oligo/errors.hpp"

using namespace oligo;

namespace {

Market linear_market(double mu, int n, ConductModel c = ConductModel::price_competition(), double mc = 0) {
  return {linear_demand({.b = 1, .lambda = 1, .mu = mu, .n = n}), constant_cost(mc), c, scheme_unit_adval()};
}

}  // namespace

TEST(SolveSymmetric, LinearMonopoly) {
  auto m = linear_market(0, 1);
  std::array<double, 2> T{0, 0};
  auto eq = solve_symmetric(m, T);
  EXPECT_NEAR(eq.p_star, 0.5, 1e-12);
  EXPECT_NEAR(eq.q_star, 0.5, 1e-12);
  EXPECT_TRUE(eq.soc_ok);
}

TEST(SolveSymmetric, LinearMonopolyWithTaxes) {
  auto m = linear_market(0, 1);
  std::array<double, 2> T{0.1, 0.2};
  EXPECT_NEAR(solve_symmetric(m, T).p_star, 0.5625, 1e-12);
}

TEST(SolveSymmetric, PerfectCompetitionPricesAtCost) {
  for (auto d : std::vector<DemandPtr>{linear_demand({.b = 1, .lambda = 1, .mu = 0.2, .n = 3}),
                                       logit_demand({.delta = 1, .beta = 1, .n = 3}),
                                       constant_elasticity_demand({.A = 1, .eps0 = 2, .gamma = 3, .n = 3})}) {
    Market m{d, constant_cost(0.3), ConductModel::constant(0), scheme_unit_adval()};
    std::array<double, 2> T{0, 0};
    EXPECT_NEAR(solve_symmetric(m, T).p_star, 0.3, 1e-10) << d->family();
  }
}

TEST(LinearClosedForm, Examples) {
  EXPECT_NEAR(linear_closed_form({.b = 1, .lambda = 1, .mu = 0.5, .n = 2}, 0, 0, Mode::price).p, 2.0 / 3, 1e-14);
  EXPECT_NEAR(linear_closed_form({.b = 1, .lambda = 1, .mu = 0.5, .n = 2}, 0, 0, Mode::quantity).p, 0.8, 1e-14);
}

TEST(LinearClosedForm, ModesCoincideWithoutInteraction) {
  LinearDemandParams prm{.b = 1, .lambda = 1.3, .mu = 0, .n = 4};
  auto a = linear_closed_form(prm, 0, 0, Mode::price);
  auto b = linear_closed_form(prm, 0, 0, Mode::quantity);
  EXPECT_NEAR(a.p, b.p, 1e-14);
  EXPECT_NEAR(a.q, b.q, 1e-14);
}

// solve_symmetric against the closed form over a grid, both modes
TEST(LinearClosedForm, SolverAgreesOnGrid) {
  for (int n : {1, 2, 3, 5})
    for (double mu : {0.0, 0.1, 0.2})
      for (double t : {0.0, 0.1})
        for (double v : {0.0, 0.25})
          for (Mode mode : {Mode::price, Mode::quantity}) {
            LinearDemandParams prm{.b = 1, .lambda = 1, .mu = mu, .n = n};
            auto c = mode == Mode::price ? ConductModel::price_competition() : ConductModel::quantity_competition();
            Market m{linear_demand(prm), constant_cost(0.1), c, scheme_unit_adval()};
            std::array<double, 2> T{t, v};
            auto cf = linear_closed_form(prm, t, v, mode, 0.1);
            auto eq = solve_symmetric(m, T);
            EXPECT_NEAR(eq.p_star, cf.p, 1e-10 * cf.p) << n << " " << mu << " " << t << " " << v;
          }
}

TEST(LogitFoc, QuantitySettingPriceIndependentOfFirms) {
  const double p2 = logit_foc_solve({.delta = 1, .beta = 1.3, .n = 2}, 0.05, 0.05, Mode::quantity).p;
  double s_prev = 1;
  for (int n = 2; n <= 10; ++n) {
    auto r = logit_foc_solve({.delta = 1, .beta = 1.3, .n = n}, 0.05, 0.05, Mode::quantity);
    EXPECT_NEAR(r.p, p2, 1e-8);
    EXPECT_LT(r.q, s_prev);
    s_prev = r.q;
  }
}

TEST(LogitFoc, PriceAndShareFallInBeta) {
  // with positive taxes both fall; at zero cost and zero taxes beta only rescales prices
  for (Mode mode : {Mode::price, Mode::quantity}) {
    double p_prev = INFINITY, s_prev = 1;
    const double s0 = logit_foc_solve({.delta = 1, .beta = 0.5, .n = 3}, 0, 0, mode).q;
    for (double beta : {0.5, 1.0, 1.5, 2.0, 3.0}) {
      auto r = logit_foc_solve({.delta = 1, .beta = beta, .n = 3}, 0.05, 0.05, mode);
      EXPECT_LT(r.p, p_prev);
      EXPECT_LT(r.q, s_prev);
      p_prev = r.p;
      s_prev = r.q;
      auto z = logit_foc_solve({.delta = 1, .beta = beta, .n = 3}, 0, 0, mode);
      EXPECT_NEAR(z.q, s0, 1e-12);
      EXPECT_NEAR(z.p * beta, logit_foc_solve({.delta = 1, .beta = 1, .n = 3}, 0, 0, mode).p, 1e-12);
    }
  }
}

TEST(LogitFoc, MatchesGeneralSolver) {
  for (Mode mode : {Mode::price, Mode::quantity}) {
    auto c = mode == Mode::price ? ConductModel::price_competition() : ConductModel::quantity_competition();
    Market m{logit_demand({.delta = 1, .beta = 1, .n = 4}), constant_cost(0), c, scheme_unit_adval()};
    std::array<double, 2> T{0.05, 0.05};
    auto eq = solve_symmetric(m, T);
    auto r = logit_foc_solve({.delta = 1, .beta = 1, .n = 4}, 0.05, 0.05, mode);
    EXPECT_NEAR(eq.p_star, r.p, 1e-9);
  }
}

TEST(SolveSymmetric, Idempotent) {
  Market m{logit_demand({.delta = 0.5, .beta = 1.2, .n = 3}), std::make_shared<LinearMarginalCost>(0.1, 0.2),
           ConductModel::quantity_competition(), scheme_unit_adval()};
  std::array<double, 2> T{0.1, 0.1};
  auto a = solve_symmetric(m, T);
  auto b = solve_symmetric(m, a.T);
  EXPECT_NEAR(a.p_star, b.p_star, 1e-12);
  EXPECT_NEAR(foc_residual(m, T, a.q_star), 0, 1e-10);
}

TEST(SolveSymmetric, NonUniqueIsReported) {
  // theta(q) swinging hard enough produces several roots; default policy refuses to pick
  auto theta = [](double q) { return 0.5 + 0.45 * std::sin(40 * q); };
  auto dtheta = [](double q) { return 18 * std::cos(40 * q); };
  Market m{linear_demand({.b = 1, .lambda = 1, .mu = 0, .n = 1}), constant_cost(0),
           ConductModel::user(theta, dtheta), scheme_unit_adval()};
  std::array<double, 2> T{0, 0};
  try {
    solve_symmetric(m, T);
    FAIL() << "expected NonUnique";
  } catch (const NonUnique& e) {
    EXPECT_GE(e.roots().size(), 2u);
    SolverOptions o;
    o.policy = RootPolicy::largest_q;
    EXPECT_NEAR(solve_symmetric(m, T, o).q_star, e.roots().back(), 1e-9);
  }
}

TEST(ClosedForm, RejectsDegenerateDenominator) {
  EXPECT_THROW(linear_closed_form({.b = 1, .lambda = 1, .mu = 0.9, .n = 4}, 0, 0, Mode::price), Error);
}
