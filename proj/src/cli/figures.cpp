#include "oligo/cli/figures.hpp"

#include <algorithm>
#include <cmath>

#include "oligo/errors.hpp"
#include "oligo/scenario.hpp"
#include "oligo/welfare.hpp"

namespace oligo::cli {

Curvature curvature_from_string(const std::string& s) {
  if (s == "exact") return Curvature::exact;
  if (s == "table") return Curvature::table;
  throw ConfigError("curvature: expected 'exact' or 'table', got '" + s + "'");
}

TaxMeasures tax_measures(const Market& m, double t, double v, bool table) {
  const std::vector<double> T{t, v};
  SymmetricEquilibrium e = solve_symmetric(m, T);
  RhoPair r;
  if (table) {
    const auto* logit = dynamic_cast<const LogitDemand*>(m.demand.get());
    if (!logit) throw ConfigError("table curvature is only defined for logit demand");
    if (m.conduct.kind() == ConductKind::price) {
      e.diag.alpha = logit->table_alpha(e.p_star);
      r = passthrough_price(e, true);
    } else {
      e.diag.sigma = logit->table_sigma(e.q_star);
      r = passthrough_quantity(e, true);
    }
  } else {
    r = passthrough_general(e);
  }
  const double th = e.theta, eps = e.diag.eps, tau = e.sens.tau, nu = e.sens.nu;
  TaxMeasures x;
  x.p = e.p_star;
  x.rho_t = r.rho_t.value;
  x.rho_v = r.rho_v.value;
  x.MC_t = mc_unit(th, eps, tau, nu, x.rho_t).value;
  x.MC_v = mc_adval(th, eps, tau, nu, x.rho_v).value;
  x.I_t = incidence(th, nu, x.rho_t).value;
  x.I_v = incidence(th, nu, x.rho_v).value;
  return x;
}

double figure1_ratio(bool unit, double theta, double eps, double rho) {
  const Ratio mc = unit ? mc_unit(theta, eps, 0.2, 0.2, rho) : mc_adval(theta, eps, 0.2, 0.0, rho);
  return ratio(mc.value, theta * rho).value;
}

namespace {

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) throw ConfigError("figure: at least two grid points per axis are needed");
  if (!(hi > lo)) throw ConfigError("figure: axis range must be increasing");
  std::vector<double> x(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) x[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (points - 1);
  x.back() = hi;
  return x;
}

const std::vector<std::string> kMeasureColumns = {"rho_t_P", "rho_t_Q", "rho_v_P", "rho_v_Q", "MC_t_P", "MC_t_Q",
                                                  "MC_v_P",  "MC_v_Q",  "I_t_P",   "I_t_Q",   "I_v_P",  "I_v_Q",
                                                  "p_P",     "p_Q"};

void push_measures(std::vector<Cell>& row, const TaxMeasures& P, const TaxMeasures& Q) {
  for (double x : {P.rho_t, Q.rho_t, P.rho_v, Q.rho_v, P.MC_t, Q.MC_t, P.MC_v, Q.MC_v, P.I_t, Q.I_t, P.I_v, Q.I_v, P.p,
                   Q.p}) {
    row.emplace_back(x);
  }
}

Market symmetric_market(DemandPtr demand, ConductModel conduct) {
  Market m;
  m.demand = std::move(demand);
  m.cost = constant_cost(0);
  m.conduct = std::move(conduct);
  m.scheme = scheme_unit_adval();
  return m;
}

void check_taxes(double t, double v) {
  if (!(t >= 0) || !(v >= 0 && v < 1)) throw ConfigError("figure: taxes need t >= 0 and 0 <= v < 1");
}

CheckResult claim(const std::string& name, bool pass, double worst, int cases, const std::string& note) {
  CheckResult r;
  r.name = name;
  r.pass = pass;
  r.abs_error = worst;
  r.tolerance = 0;
  r.cases = cases;
  r.note = pass ? "" : note;
  return r;
}

// Rows of `panel`, in emitted order.
std::vector<std::size_t> panel_rows(const Table& t, const std::string& panel) {
  std::vector<std::size_t> rows;
  const std::size_t c = t.column("panel");
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    if (std::get<std::string>(t.rows[k][c]) == panel) rows.push_back(k);
  }
  return rows;
}

// Largest violation of strict monotonicity along `rows` (0 when monotone).
double monotone_violation(const Table& t, const std::vector<std::size_t>& rows, const std::string& col,
                          bool increasing) {
  double worst = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double d = t.number(rows[k], col) - t.number(rows[k - 1], col);
    const double bad = increasing ? -d : d;
    if (!(bad < 0)) worst = std::max(worst, std::isnan(bad) ? kInf : bad);
  }
  return worst;
}

}  // namespace

Table figure1(const Figure1Options& o) {
  Table t;
  t.columns = {"panel", "tax", "theta", "eps", "rho", "MC", "MC_over_theta_rho"};
  const auto rho = linspace(o.rho_lo, o.rho_hi, o.points);
  const auto eps = linspace(o.eps_lo, o.eps_hi, o.points);
  const auto theta = linspace(o.theta_lo, o.theta_hi, o.points);
  if (o.theta_lo < 0 || o.rho_lo <= 0 || o.eps_lo <= 0) throw ConfigError("figure 1: axes must be positive");
  auto emit = [&](const std::string& panel, bool unit, double th, double e, double r) {
    const Ratio mc = unit ? mc_unit(th, e, 0.2, 0.2, r) : mc_adval(th, e, 0.2, 0.0, r);
    t.rows.push_back({panel, std::string(unit ? "unit" : "adval"), th, e, r, mc.value, figure1_ratio(unit, th, e, r)});
  };
  for (bool unit : {true, false}) {
    for (double e : eps)
      for (double r : rho) emit("eps_rho", unit, o.theta_held, e, r);
    for (double r : rho)
      for (double th : theta) emit("rho_theta", unit, th, o.eps_held, r);
    for (double th : theta)
      for (double e : eps) emit("theta_eps", unit, th, e, o.rho_held);
  }
  return t;
}

Table figure2(const Figure2Options& o) {
  check_taxes(o.t, o.v);
  if (o.n_max < 2 || o.n_held < 1) throw ConfigError("figure 2: need n_max >= 2 and n_held >= 1");
  Table t;
  t.columns = {"panel", "n", "mu"};
  t.columns.insert(t.columns.end(), kMeasureColumns.begin(), kMeasureColumns.end());
  auto row = [&](const std::string& panel, int n, double mu) {
    const LinearDemandParams prm{1.0, 1.0, mu, n};
    const TaxMeasures P = tax_measures(symmetric_market(linear_demand(prm), ConductModel::price_competition()), o.t, o.v);
    const TaxMeasures Q =
        tax_measures(symmetric_market(linear_demand(prm), ConductModel::quantity_competition()), o.t, o.v);
    std::vector<Cell> r{panel, std::int64_t{n}, mu};
    push_measures(r, P, Q);
    t.rows.push_back(std::move(r));
  };
  for (int n = 1; n <= o.n_max; ++n) row("n", n, o.mu_held);
  for (double mu : linspace(o.mu_lo, o.mu_hi, o.points)) row("mu", o.n_held, mu);
  return t;
}

Table figure3(const Figure3Options& o) {
  check_taxes(o.t, o.v);
  if (o.n_max < 2 || o.n_held < 1) throw ConfigError("figure 3: need n_max >= 2 and n_held >= 1");
  const bool table = o.curvature == Curvature::table;
  Table t;
  t.columns = {"panel", "n", "beta"};
  t.columns.insert(t.columns.end(), kMeasureColumns.begin(), kMeasureColumns.end());
  auto row = [&](const std::string& panel, int n, double beta) {
    const LogitDemandParams prm{1.0, beta, n};
    const TaxMeasures P =
        tax_measures(symmetric_market(logit_demand(prm), ConductModel::price_competition()), o.t, o.v, table);
    const TaxMeasures Q =
        tax_measures(symmetric_market(logit_demand(prm), ConductModel::quantity_competition()), o.t, o.v, table);
    std::vector<Cell> r{panel, std::int64_t{n}, beta};
    push_measures(r, P, Q);
    t.rows.push_back(std::move(r));
  };
  for (int n = 1; n <= o.n_max; ++n) row("n", n, o.beta_held);
  for (double b : linspace(o.beta_lo, o.beta_hi, o.points)) row("beta", o.n_held, b);
  return t;
}

// ---------------------------------------------------------------- claims

std::vector<CheckResult> figure1_claims(const Table& t) {
  std::vector<CheckResult> out;
  const double r = figure1_ratio(true, 0.3, 2.0, 1.0);
  const double want = 0.8 / 0.3;
  CheckResult c = claim("figure1.unit_reference_point", std::abs(r - want) <= 1e-12 * want, std::abs(r - want), 1,
                        "unit panel at theta 0.3, eps 2, rho 1 is off");
  c.closed_form = r;
  c.oracle = want;
  c.rel_error = std::abs(r - want) / want;
  c.tolerance = 1e-12;
  out.push_back(c);
  // the emitted surfaces agree with the pointwise function
  double worst = 0;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const bool unit = std::get<std::string>(t.rows[k][t.column("tax")]) == "unit";
    const double x = figure1_ratio(unit, t.number(k, "theta"), t.number(k, "eps"), t.number(k, "rho"));
    const double y = t.number(k, "MC_over_theta_rho");
    worst = std::max(worst, (std::isfinite(x) && std::isfinite(y)) ? std::abs(x - y) : (std::isnan(x) == std::isnan(y) ? 0 : kInf));
  }
  out.push_back(claim("figure1.rows_consistent", worst == 0, worst, static_cast<int>(t.rows.size()),
                      "emitted surface differs from the pointwise ratio"));
  return out;
}

std::vector<CheckResult> figure2_claims(const Table& t) {
  std::vector<CheckResult> out;
  const auto rows = panel_rows(t, "n");
  const int cases = static_cast<int>(rows.size());
  const double up = std::max(monotone_violation(t, rows, "rho_t_P", true), monotone_violation(t, rows, "rho_t_Q", true));
  out.push_back(claim("figure2.rho_t_increasing_in_n", up == 0, up, cases, "unit pass-through not increasing in n"));

  double gap_bad = 0, prev = -kInf;
  for (std::size_t r : rows) {
    const double gap = t.number(r, "rho_t_P") - t.number(r, "rho_t_Q");
    if (!(gap >= -1e-14)) gap_bad = std::max(gap_bad, -gap);
    if (!(gap >= prev - 1e-14)) gap_bad = std::max(gap_bad, prev - gap);
    prev = gap;
  }
  out.push_back(claim("figure2.price_quantity_gap_growing", gap_bad == 0, gap_bad, cases,
                      "rho_t_P - rho_t_Q is negative or shrinks with n"));

  double mc_bad = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (const char* m : {"P", "Q"}) {
      const double d = t.number(r, std::string("MC_v_") + m) - t.number(r, std::string("MC_t_") + m);
      if (!(d < 0)) mc_bad = std::max(mc_bad, std::isnan(d) ? kInf : d);
    }
  }
  out.push_back(claim("figure2.mc_v_below_mc_t", mc_bad == 0, mc_bad, static_cast<int>(t.rows.size()),
                      "ad valorem marginal cost of funds not below the unit one"));
  return out;
}

std::vector<CheckResult> figure3_claims(const Table& t) {
  std::vector<CheckResult> out;
  const auto rows = panel_rows(t, "n");
  const int cases = static_cast<int>(rows.size());
  double dp = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    dp = std::max(dp, std::abs(t.number(rows[k], "p_Q") - t.number(rows[k - 1], "p_Q")));
  }
  CheckResult flat = claim("figure3.quantity_price_flat_in_n", dp <= 1e-8, dp, cases,
                           "equilibrium price under quantity setting moves with n");
  flat.tolerance = 1e-8;
  out.push_back(flat);

  const double down = monotone_violation(t, rows, "rho_t_Q", false);
  double span = 0;
  if (!rows.empty()) span = t.number(rows.back(), "rho_t_Q") - t.number(rows.front(), "rho_t_Q");
  out.push_back(claim("figure3.rho_t_Q_decreasing_in_n", down == 0, down, cases,
                      "unit pass-through under quantity setting is not decreasing in n (change from first to last n: " +
                          format_double(span) + "); it equals dp/dt and the price does not depend on n"));
  return out;
}

CheckResult logit_table_alpha_check() {
  ErrorTracker tr(1e-3);
  for (int n = 1; n <= 10; ++n) {
    const LogitDemandParams prm{1.0, 1.0, n};
    const auto d = logit_demand(prm);
    const SymmetricEquilibrium e =
        solve_symmetric(symmetric_market(d, ConductModel::price_competition()), std::vector<double>{0.0, 0.0});
    const double p = e.p_star, h = 1e-4 * std::max(1.0, p);
    const double q1 = (d->quantity(p + h) - d->quantity(p - h)) / (2 * h);
    const double q2 = (d->quantity(p + h) - 2 * d->quantity(p) + d->quantity(p - h)) / (h * h);
    tr.add(d->table_alpha(p), -p * q2 / q1);
  }
  CheckResult r = tr.result("figure3.logit_table_alpha_vs_fd", 1e-5);
  if (!r.pass) r.note = "printed logit direct curvature disagrees with -p q''/q' by differences; exact curvature used";
  return r;
}

void add_figure_checks(ValidationSuite& suite) {
  auto pick = [](std::vector<CheckResult> (*claims)(const Table&), Table (*make)(), std::size_t k) {
    return [=] { return claims(make())[k]; };
  };
  Table (*f1)() = [] { return figure1(); };
  Table (*f2)() = [] { return figure2(); };
  Table (*f3)() = [] { return figure3(); };
  suite.add("figure1.unit_reference_point", pick(figure1_claims, f1, 0));
  suite.add("figure2.rho_t_increasing_in_n", pick(figure2_claims, f2, 0));
  suite.add("figure2.price_quantity_gap_growing", pick(figure2_claims, f2, 1));
  suite.add("figure2.mc_v_below_mc_t", pick(figure2_claims, f2, 2));
  suite.add("figure3.quantity_price_flat_in_n", pick(figure3_claims, f3, 0));
  suite.add("figure3.rho_t_Q_decreasing_in_n", pick(figure3_claims, f3, 1), true);
  suite.add("figure3.logit_table_alpha_vs_fd", [] { return logit_table_alpha_check(); }, true);
}

}  // namespace oligo::cli
