#include "oligo/equilibrium.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <optional>

#include "oligo/errors.hpp"

namespace oligo {

namespace {

void check_market(const Market& m, std::span<const double> T) {
  if (!m.demand || !m.cost || !m.scheme) throw ConfigError("market: demand, cost and scheme are all required");
  m.scheme->check_taxes(T);
}

std::vector<double> scan_grid(const QuantityRange& r, int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  if (r.bounded_above) {
    // logistic spacing: geometric towards both ends of (lo, hi)
    const double X = 28;
    for (int k = 0; k < points; ++k) {
      const double x = -X + 2 * X * k / (points - 1);
      g[static_cast<std::size_t>(k)] = r.lo + (r.hi - r.lo) / (1 + std::exp(-x));
    }
  } else {
    const double a = std::log(r.lo), b = std::log(r.hi);
    for (int k = 0; k < points; ++k) g[static_cast<std::size_t>(k)] = std::exp(a + (b - a) * k / (points - 1));
  }
  return g;
}

std::optional<double> try_residual(const Market& m, std::span<const double> T, double q) {
  try {
    const double f = foc_residual(m, T, q);
    if (std::isfinite(f)) return f;
  } catch (const DomainError&) {
  }
  return std::nullopt;
}

struct Root {
  double q;
  bool falling;  // F goes from + to - as q increases
};

}  // namespace

double foc_residual(const Market& m, std::span<const double> T, double q) {
  m.demand->check_quantity(q);
  const double p = m.demand->price(q);
  m.demand->check_price(p);
  m.scheme->check_point(p, q, T);
  const SchemePartials d = m.scheme->partials(p, q, T);
  const double markup = m.conduct.markup(*m.demand, q);
  return p - d.phi_q - (1 - d.phi_p / q) * markup - m.cost->mc(q);
}

SymmetricEquilibrium equilibrium_at(const Market& m, std::span<const double> T, double q) {
  check_market(m, T);
  SymmetricEquilibrium e;
  e.q_star = q;
  e.p_star = m.demand->price(q);
  e.T.assign(T.begin(), T.end());
  e.diag = diagnostics_at(*m.demand, e.p_star);
  e.diag.q = q;
  e.sens = sensitivities_at(*m.scheme, e.p_star, q, T);
  const ConductValues c = m.conduct.evaluate(*m.demand, e.diag);
  e.theta = c.theta;
  e.omega = c.omega;
  e.theta_log_slope = c.theta_log_slope;
  e.mc = m.cost->mc(q);
  e.mc_prime = m.cost->mc_prime(q);
  e.chi = m.cost->chi(q);
  e.margin = e.p_star - e.mc;
  e.residual = foc_residual(m, T, q);
  return e;
}

SymmetricEquilibrium solve_symmetric(const Market& m, std::span<const double> T, const SolverOptions& o) {
  check_market(m, T);
  if (o.scan_points < 3) throw ConfigError("solver: scan_points must be at least 3");
  const std::vector<double> grid = scan_grid(m.demand->quantity_range(), o.scan_points);

  std::vector<std::pair<double, double>> pts;
  std::optional<double> prev_q;
  bool prev_valid = false;
  for (double q : grid) {
    const auto f = try_residual(m, T, q);
    if (prev_q && prev_valid != f.has_value()) {
      // a domain edge lies between the two points: add the last valid point near it
      double good = prev_valid ? *prev_q : q, bad = prev_valid ? q : *prev_q;
      std::optional<double> fg = prev_valid ? try_residual(m, T, good) : f;
      for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (good + bad);
        if (mid == good || mid == bad) break;
        if (auto fm = try_residual(m, T, mid)) {
          good = mid;
          fg = fm;
        } else {
          bad = mid;
        }
      }
      if (prev_valid && good != *prev_q) pts.emplace_back(good, *fg);
      if (!prev_valid && good != q) pts.emplace_back(good, *fg);
    }
    if (f) pts.emplace_back(q, *f);
    prev_q = q;
    prev_valid = f.has_value();
  }

  auto residual = [&](double q) { return foc_residual(m, T, q); };
  auto tol = [&](double a, double b) { return std::abs(b - a) <= o.tol_abs + o.tol_rel * std::min(std::abs(a), std::abs(b)); };

  std::vector<Root> roots;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const auto [a, fa] = pts[k];
    const auto [b, fb] = pts[k + 1];
    if (fa == 0) {
      roots.push_back({a, fb < 0});
      continue;
    }
    if (fa * fb >= 0) continue;
    std::uintmax_t iters = static_cast<std::uintmax_t>(o.max_iter);
    std::pair<double, double> br;
    try {
      br = boost::math::tools::toms748_solve(residual, a, b, fa, fb, tol, iters);
    } catch (const DomainError&) {
      throw SolverError("solver: residual left its domain inside a bracket");
    }
    if (iters >= static_cast<std::uintmax_t>(o.max_iter)) {
      throw Divergence("solver: iteration cap reached without meeting tolerance", 0.5 * (br.first + br.second));
    }
    const double fl = residual(br.first), fr = residual(br.second);
    roots.push_back({std::abs(fl) <= std::abs(fr) ? br.first : br.second, fa > 0});
  }
  if (!pts.empty() && pts.back().second == 0) roots.push_back({pts.back().first, false});

  if (roots.empty()) throw NoBracket("solver: no sign change of the first-order condition in the demand domain");

  std::vector<double> qs;
  for (const Root& r : roots) qs.push_back(r.q);
  if (roots.size() > 1 && o.policy == RootPolicy::unique) {
    throw NonUnique("solver: " + std::to_string(roots.size()) + " equilibria found", qs);
  }
  const Root& pick = roots.back();
  SymmetricEquilibrium e = equilibrium_at(m, T, pick.q);
  e.soc_ok = pick.falling;
  e.roots = qs;
  return e;
}

// ---------------------------------------------------------------- closed forms

PriceQuantity linear_closed_form(const LinearDemandParams& prm, double t, double v, Mode mode, double mc) {
  const LinearDemand demand(prm);
  if (!(v < 1)) throw DomainError("linear closed form: requires v < 1");
  const double m = prm.n - 1;
  const double c = (t + mc) / (1 - v);
  const double L = demand.industry_slope();
  PriceQuantity r;
  if (mode == Mode::price) {
    const double den = 2 * prm.lambda - m * prm.mu;
    if (!(den > 0)) throw DomainError("linear closed form: 2 lambda - (n-1) mu must be positive");
    r.p = (prm.b + prm.lambda * c) / den;
    r.q = prm.b - L * r.p;
  } else {
    const double K = (prm.lambda - (m - 1) * prm.mu) / (prm.lambda + prm.mu);
    if (!(1 + K > 0)) throw DomainError("linear closed form: quantity-mode denominator must be positive");
    r.q = (prm.b - L * c) / (1 + K);
    r.p = (prm.b - r.q) / L;
  }
  if (!(r.q > 0)) throw DomainError("linear closed form: taxes and cost shut the market down");
  return r;
}

PriceQuantity logit_foc_solve(const LogitDemandParams& prm, double t, double v, Mode mode, double mc,
                              int max_iter) {
  const LogitDemand demand(prm);
  if (!(v < 1)) throw ConfigError("logit solve: requires v < 1");
  const double c = (t + mc) / (1 - v);
  const double beta = prm.beta;
  const int n = prm.n;

  if (mode == Mode::quantity) {
    // with x = s/s0: x + log x = delta - 1 - beta c, solved in u = log x
    const double K = prm.delta - 1 - beta * c;
    auto g = [&](double u) { return std::exp(u) + u - K; };
    double u = K < 1 ? K : std::log(K);
    bool done = false;
    for (int k = 0; k < max_iter; ++k) {
      const double step = g(u) / (std::exp(u) + 1);
      u -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(u))) {
        done = true;
        break;
      }
    }
    if (!done || !std::isfinite(u)) {
      double lo = std::min(K, 0.0) - 1, hi = std::max(K, 0.0) + 1;
      std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
      auto br = boost::math::tools::bisect(g, lo, hi, boost::math::tools::eps_tolerance<double>(), iters);
      if (iters >= static_cast<std::uintmax_t>(max_iter)) throw NoConvergence("logit solve: no convergence", {u});
      u = 0.5 * (br.first + br.second);
    }
    const double x = std::exp(u);
    return {c + (1 + x) / beta, x / (1 + n * x)};
  }

  // price mode: p = c + 1 / (beta (1 - s(p))), damped fixed point
  auto rhs = [&](double p) { return c + 1 / (beta * (1 - demand.quantity(p))); };
  double p = c + 1 / beta;
  const double w = 0.5;
  for (int k = 0; k < max_iter; ++k) {
    const double next = (1 - w) * p + w * rhs(p);
    if (!std::isfinite(next)) break;
    if (std::abs(next - p) <= 1e-15 * std::max(1.0, std::abs(p))) {
      p = rhs(next);
      return {p, demand.quantity(p)};
    }
    p = next;
  }
  // residual is increasing in p; bisect on an expanding bracket
  auto R = [&](double x) { return x - rhs(x); };
  double lo = c + 1 / beta, hi = lo + 1 / beta;
  int guard = 0;
  while (R(hi) < 0 && guard++ < 200) hi = lo + 2 * (hi - lo);
  if (R(hi) < 0) throw NoConvergence("logit solve: no bracket for the price first-order condition", {p});
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
  auto br = boost::math::tools::bisect(R, lo, hi, boost::math::tools::eps_tolerance<double>(), iters);
  if (iters >= static_cast<std::uintmax_t>(max_iter)) {
    throw NoConvergence("logit solve: bisection cap reached", std::vector<double>{0.5 * (br.first + br.second)});
  }
  p = 0.5 * (br.first + br.second);
  return {p, demand.quantity(p)};
}

}  // namespace oligo
