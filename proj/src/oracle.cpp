#include "oligo/oracle.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <boost/math/tools/toms748_solve.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <random>
#include <thread>

#include "oligo/errors.hpp"

namespace oligo {

// ---------------------------------------------------------------- differencing

void FDConfig::validate() const {
  if (!(h_rel > 0 && h_rel < 1e-2)) throw ConfigError("finite differences: h_rel must lie in (0, 1e-2)");
}

double FDConfig::step(double x) const { return h_rel * std::max(1.0, std::abs(x)); }

SolverOptions oracle_solver_options() {
  SolverOptions o;
  o.tol_rel = 1e-15;
  o.tol_abs = 0;
  o.max_iter = 400;
  return o;
}

namespace {

double central(const PriceAt& f, std::span<const double> T, std::size_t index, double h) {
  std::vector<double> up(T.begin(), T.end()), dn(T.begin(), T.end());
  up[index] += h;
  dn[index] -= h;
  return (f(up) - f(dn)) / (2 * h);
}

}  // namespace

double fd_passthrough(const PriceAt& price_at, std::span<const double> T, std::size_t index, const FDConfig& cfg) {
  cfg.validate();
  if (index >= T.size()) throw ConfigError("finite differences: tax index out of range");
  const double h = cfg.step(T[index]);
  try {
    const double d1 = central(price_at, T, index, h);
    if (!cfg.richardson) return d1;
    const double d2 = central(price_at, T, index, h / 2);
    return (4 * d2 - d1) / 3;
  } catch (const OracleError&) {
    throw;
  } catch (const Error& e) {
    throw OracleError(std::string("finite differences: solver failed at a perturbed point: ") + e.what());
  }
}

std::vector<double> fd_passthrough(const Market& m, std::span<const double> T, const FDConfig& cfg) {
  const SolverOptions o = oracle_solver_options();
  PriceAt price_at = [&](std::span<const double> x) { return solve_symmetric(m, x, o).p_star; };
  std::vector<double> out(T.size());
  for (std::size_t l = 0; l < T.size(); ++l) out[l] = fd_passthrough(price_at, T, l, cfg);
  return out;
}

double quadrature_cs(const SymmetricDemand& demand, double p, double p_bar) {
  if (p == p_bar) return 0;
  if (!(p < p_bar)) throw OracleError("quadrature: lower price must be below the upper one");
  auto q = [&](double s) {
    const double v = demand.quantity(s);
    if (!std::isfinite(v)) throw OracleError("quadrature: non-finite demand");
    return v;
  };
  try {
    return integrate(q, p, p_bar, 1e-10);
  } catch (const OracleError&) {
    throw;
  } catch (const std::exception& e) {
    throw OracleError(std::string("quadrature: ") + e.what());
  }
}

FDWelfareGradients fd_welfare_gradients(const Market& m, std::span<const double> T, const FDConfig& cfg) {
  cfg.validate();
  const SolverOptions o = oracle_solver_options();
  FDWelfareGradients g;
  const std::size_t d = T.size();
  g.CS.resize(d);
  g.PS.resize(d);
  g.R.resize(d);
  g.W.resize(d);
  struct Level {
    double p, PS, R;
  };
  auto level = [&](std::span<const double> x) {
    const SymmetricEquilibrium e = solve_symmetric(m, x, o);
    const double p = e.p_star, q = e.q_star;
    return Level{p, p * q - m.cost->cost(q) - m.scheme->phi(p, q, x), m.scheme->phi_tilde(p, q, x)};
  };
  for (std::size_t l = 0; l < d; ++l) {
    const double h = cfg.step(T[l]);
    try {
      auto diffs = [&](double step) {
        std::vector<double> up(T.begin(), T.end()), dn(T.begin(), T.end());
        up[l] += step;
        dn[l] -= step;
        const Level a = level(up), b = level(dn);
        // CS(up) - CS(dn) is minus the area under demand between the prices
        const double dcs = a.p >= b.p ? -quadrature_cs(*m.demand, b.p, a.p) : quadrature_cs(*m.demand, a.p, b.p);
        return std::array<double, 3>{dcs / (2 * step), (a.PS - b.PS) / (2 * step), (a.R - b.R) / (2 * step)};
      };
      std::array<double, 3> r = diffs(h);
      if (cfg.richardson) {
        const std::array<double, 3> r2 = diffs(h / 2);
        for (int k = 0; k < 3; ++k) r[static_cast<std::size_t>(k)] = (4 * r2[static_cast<std::size_t>(k)] - r[static_cast<std::size_t>(k)]) / 3;
      }
      g.CS[l] = r[0];
      g.PS[l] = r[1];
      g.R[l] = r[2];
      g.W[l] = r[0] + r[1] + r[2];
    } catch (const OracleError&) {
      throw;
    } catch (const Error& e) {
      throw OracleError(std::string("welfare differences: solver failed at a perturbed point: ") + e.what());
    }
  }
  return g;
}

Mat fd_hetero_passthrough(const HeteroMarket& m, std::span<const double> T, const Vec& p_star, const FDConfig& cfg) {
  cfg.validate();
  const HeteroSolveOptions o{1e-13, 500};
  const Eigen::Index n = p_star.size();
  Mat out(n, static_cast<Eigen::Index>(T.size()));
  for (std::size_t l = 0; l < T.size(); ++l) {
    const double h = cfg.step(T[l]);
    std::vector<double> up(T.begin(), T.end()), dn(T.begin(), T.end());
    up[l] += h;
    dn[l] -= h;
    try {
      out.col(static_cast<Eigen::Index>(l)) = (solve_hetero(m, up, p_star, o) - solve_hetero(m, dn, p_star, o)) / (2 * h);
    } catch (const Error& e) {
      throw OracleError(std::string("firm-level differences: solver failed at a perturbed point: ") + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------- reports

void ErrorTracker::add(double closed, double oracle) {
  ++cases_;
  const double a = std::abs(closed - oracle);
  double r = a / std::max(std::abs(oracle), floor_);
  if (std::isnan(r)) r = kInf;
  if (cases_ == 1 || r > rel_) {
    rel_ = r;
    abs_ = a;
    closed_ = closed;
    oracle_ = oracle;
  }
}

void ErrorTracker::add_abs(double closed, double oracle) {
  use_abs_ = true;
  ++cases_;
  const double a = std::abs(closed - oracle);
  if (cases_ == 1 || !(a <= abs_)) {
    abs_ = std::isnan(a) ? kInf : a;
    rel_ = a / std::max(std::abs(oracle), floor_);
    closed_ = closed;
    oracle_ = oracle;
  }
}

void ErrorTracker::fail(const std::string& why) {
  ++cases_;
  if (failure_.empty()) failure_ = why;
}

CheckResult ErrorTracker::result(const std::string& name, double tol) const {
  CheckResult c;
  c.name = name;
  c.closed_form = closed_;
  c.oracle = oracle_;
  c.abs_error = abs_;
  c.rel_error = rel_;
  c.tolerance = tol;
  c.cases = cases_;
  c.pass = failure_.empty() && cases_ > 0 && (use_abs_ ? abs_ <= tol : rel_ <= tol);
  c.note = failure_.empty() ? (use_abs_ ? "absolute error" : "relative error") : failure_;
  if (cases_ == 0) c.note = "no cases";
  return c;
}

bool ValidationReport::all_pass() const { return failures() == 0; }

int ValidationReport::failures() const {
  int k = 0;
  for (const auto& c : checks) k += (!c.pass && !c.informational) ? 1 : 0;
  return k;
}

std::string ValidationReport::to_json(bool timing) const {
  nlohmann::ordered_json j;
  j["schema"] = "oligo.validation/1";
  j["suite"] = suite;
  j["seed"] = seed;
  j["passed"] = all_pass();
  j["failures"] = failures();
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr); };
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["closed_form"] = num(c.closed_form);
    e["oracle"] = num(c.oracle);
    e["abs_error"] = num(c.abs_error);
    e["rel_error"] = num(c.rel_error);
    e["tolerance"] = num(c.tolerance);
    e["pass"] = c.pass;
    e["informational"] = c.informational;
    e["cases"] = c.cases;
    if (timing) e["runtime_ms"] = c.runtime_ms;
    e["note"] = c.note;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  return j.dump(2);
}

std::string ValidationReport::to_table() const {
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-44s %6s %6s %12s %12s %10s %9s\n", "check", "result", "cases", "rel_error", "abs_error",
                "tolerance", "ms");
  out += buf;
  for (const auto& c : checks) {
    const char* verdict = c.pass ? "pass" : (c.informational ? "info" : "FAIL");
    std::snprintf(buf, sizeof buf, "%-44s %6s %6d %12.3e %12.3e %10.1e %9.1f\n", c.name.c_str(), verdict, c.cases,
                  c.rel_error, c.abs_error, c.tolerance, c.runtime_ms);
    out += buf;
    if (!c.pass) out += "    " + c.note + "\n";
  }
  std::snprintf(buf, sizeof buf, "%zu checks, %d failed (seed %llu)\n", checks.size(), failures(),
                static_cast<unsigned long long>(seed));
  out += buf;
  return out;
}

void ValidationSuite::add(std::string name, Check fn, bool informational) {
  for (const auto& e : checks_) {
    if (e.name == name) throw ConfigError("validation suite: duplicate check '" + name + "'");
  }
  checks_.push_back({std::move(name), std::move(fn), informational});
}

ValidationReport ValidationSuite::run(std::uint64_t seed, const std::string& suite, int threads) const {
  ValidationReport rep;
  rep.seed = seed;
  rep.suite = suite;
  rep.checks.resize(checks_.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < checks_.size(); k = next++) {
      const auto t0 = std::chrono::steady_clock::now();
      CheckResult r;
      try {
        r = checks_[k].fn();
      } catch (const std::exception& e) {
        r.pass = false;
        r.note = std::string("check threw: ") + e.what();
      }
      r.name = checks_[k].name;
      r.informational = checks_[k].informational;
      r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      rep.checks[k] = std::move(r);
    }
  };
  unsigned nt = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min<unsigned>(nt, static_cast<unsigned>(std::max<std::size_t>(1, checks_.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < nt; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rep;
}

// ---------------------------------------------------------------- checks

namespace {

constexpr double kScenarioFloor = 1e-9;

std::size_t overlay_t(const ScenarioSpec& s) { return s.T.size() - 2; }
std::size_t overlay_v(const ScenarioSpec& s) { return s.T.size() - 1; }

struct Solved {
  Market market;
  SymmetricEquilibrium eq;
  PassThroughVector ptv;
};

Solved solve_scenario(const ScenarioSpec& s, bool corrupt = false) {
  Solved r;
  r.market = build_market(s);
  r.eq = solve_symmetric(r.market, s.T, oracle_solver_options());
  const double rho0 = rho0_general(r.eq.sens, r.eq.diag, r.eq.theta, r.eq.omega, r.eq.chi).get("pass-through factor");
  r.ptv = passthrough_vector(r.eq, corrupt ? rho0 * (1 + 1e-3) : rho0);
  return r;
}

template <class F>
void each_scenario(const std::vector<ScenarioSpec>& scenarios, ErrorTracker& tr, F&& f) {
  for (const auto& s : scenarios) {
    try {
      f(s);
    } catch (const std::exception& e) {
      tr.fail(s.label + ": " + e.what());
    }
  }
}

}  // namespace

CheckResult check_passthrough_oracle(const std::vector<ScenarioSpec>& scenarios, double tol, bool corrupt) {
  ErrorTracker tr(kScenarioFloor);
  each_scenario(scenarios, tr, [&](const ScenarioSpec& s) {
    const Solved r = solve_scenario(s, corrupt);
    const std::vector<double> fd = fd_passthrough(r.market, s.T);
    for (std::size_t l = 0; l < fd.size(); ++l) tr.add(r.ptv.rho_tilde[l], fd[l]);
  });
  CheckResult c = tr.result("welfare.passthrough_vs_fd", tol);
  c.note += "; " + std::to_string(scenarios.size()) + " scenarios";
  return c;
}

CheckResult check_rho_v_relation(const std::vector<ScenarioSpec>& scenarios, double tol) {
  ErrorTracker tr;
  each_scenario(scenarios, tr, [&](const ScenarioSpec& s) {
    const Solved r = solve_scenario(s);
    const double rho_t = r.ptv.rho[overlay_t(s)], rho_v = r.ptv.rho[overlay_v(s)];
    tr.add(rho_v, rho_v_from_rho_t(rho_t, r.eq.theta, r.eq.diag.eps));
  });
  return tr.result("welfare.rho_v_relation", tol);
}

CheckResult check_gradient_oracle(const std::vector<ScenarioSpec>& scenarios, double tol) {
  ErrorTracker tr(kScenarioFloor);
  each_scenario(scenarios, tr, [&](const ScenarioSpec& s) {
    const Solved r = solve_scenario(s);
    const WelfareGradients g = welfare_gradients(r.eq, r.ptv);
    const FDWelfareGradients fd = fd_welfare_gradients(r.market, s.T);
    const double scale = r.eq.p_star * r.eq.q_star;
    for (std::size_t l = 0; l < s.T.size(); ++l) {
      tr.add(g.grad_CS[l] / scale, fd.CS[l] / scale);
      tr.add(g.grad_PS[l] / scale, fd.PS[l] / scale);
      tr.add(g.grad_R[l] / scale, fd.R[l] / scale);
      tr.add(g.grad_W[l] / scale, fd.W[l] / scale);
    }
  });
  return tr.result("welfare.gradients_vs_fd", tol);
}

CheckResult check_ledger_identity(const std::vector<ScenarioSpec>& scenarios, double tol) {
  ErrorTracker tr;
  each_scenario(scenarios, tr, [&](const ScenarioSpec& s) {
    const Solved r = solve_scenario(s);
    const WelfareGradients g = welfare_gradients(r.eq, r.ptv);
    const double scale = r.eq.p_star * r.eq.q_star;
    for (std::size_t l = 0; l < s.T.size(); ++l) {
      tr.add_abs((g.grad_CS[l] + g.grad_PS[l] + g.grad_R[l]) / scale, g.grad_W[l] / scale);
    }
  });
  return tr.result("welfare.ledger_identity", tol);
}

CheckResult check_zero_tax_reduction(const std::vector<ScenarioSpec>& scenarios, double tol) {
  ErrorTracker tr;
  each_scenario(scenarios, tr, [&](const ScenarioSpec& s0) {
    ScenarioSpec s = s0;
    s.scheme.kind = SchemeKind::unit_adval;
    s.scheme.marginal_taxes = false;
    s.T = {0, 0};
    const Solved r = solve_scenario(s);
    const WelfareRatios w = welfare_ratios(r.eq, r.ptv);
    tr.add_abs(w.MC[0], r.eq.theta * r.ptv.rho[0]);
    tr.add_abs(w.MC[1], r.eq.theta * r.ptv.rho[1]);
  });
  return tr.result("welfare.zero_tax_mc", tol);
}

CheckResult check_linear_closed_forms(double tol) {
  ErrorTracker tr;
  const double b = 10, lambda = 2, mc = 0.5;
  for (int n : {1, 2, 3, 5}) {
    for (double mu_share : {0.0, 0.2, 0.45}) {
      if (n == 1 && mu_share > 0) continue;
      const double mu = n > 1 ? mu_share * lambda / (n - 1) : 0;
      for (double t : {0.0, 0.5, 1.5}) {
        for (double v : {0.0, 0.15, 0.35}) {
          for (Mode mode : {Mode::price, Mode::quantity}) {
            try {
              const LinearDemandParams prm{b, lambda, mu, n};
              Market m{linear_demand(prm), constant_cost(mc),
                       mode == Mode::price ? ConductModel::price_competition() : ConductModel::quantity_competition(),
                       scheme_unit_adval()};
              const std::vector<double> T{t, v};
              const SymmetricEquilibrium e = solve_symmetric(m, T);
              const PriceQuantity cf = linear_closed_form(prm, t, v, mode, mc);
              tr.add(e.p_star, cf.p);
              tr.add(e.q_star, cf.q);
            } catch (const std::exception& e) {
              tr.fail(e.what());
            }
          }
        }
      }
    }
  }
  return tr.result("equilibrium.linear_closed_form", tol);
}

namespace {

struct SymmetricCase {
  std::string label;
  Market market;
  Mode mode;
  std::vector<double> T;
};

std::vector<SymmetricCase> symmetric_cases() {
  std::vector<SymmetricCase> out;
  for (int n : {2, 3, 4}) {
    for (int fam = 0; fam < 2; ++fam) {
      for (Mode mode : {Mode::price, Mode::quantity}) {
        for (int sch = 0; sch < 2; ++sch) {
          SymmetricCase c;
          c.mode = mode;
          c.market.demand = fam == 0 ? DemandPtr(linear_demand({10, 2, 0.4, n})) : DemandPtr(logit_demand({1.5, 1.2, n}));
          c.market.cost = std::make_shared<LinearMarginalCost>(0.3, fam == 0 ? 0.2 : 0.5);
          c.market.conduct = mode == Mode::price ? ConductModel::price_competition() : ConductModel::quantity_competition();
          if (sch == 0) {
            c.market.scheme = scheme_unit_adval();
            c.T = {0.2, 0.1};
          } else {
            c.market.scheme = with_marginal_taxes(scheme_tax_evasion(1.0, 0.2));
            c.T = {0.2, 0.1, 0.3, 0, 0};
          }
          c.label = std::string(fam == 0 ? "linear" : "logit") + "/n=" + std::to_string(n) +
                    (mode == Mode::price ? "/price" : "/quantity") + (sch == 0 ? "/unit_adval" : "/evasion");
          out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

}  // namespace

CheckResult check_hetero_symmetric_reduction(double tol) {
  ErrorTracker tr(1e-10);
  for (const SymmetricCase& c : symmetric_cases()) {
    try {
      const SymmetricEquilibrium eq = solve_symmetric(c.market, c.T, oracle_solver_options());
      const PassThroughVector ptv = passthrough_vector(eq);
      const WelfareGradients g = welfare_gradients(eq, ptv);
      const WelfareRatios w = welfare_ratios(eq, ptv);
      const HeteroMarket hm = hetero_from_symmetric(c.market, c.mode);
      const int n = hm.demand->firms();
      const HeteroPoint pt = hetero_point(hm, Vec::Constant(n, eq.p_star), c.T);
      const PassThroughMatrix ptm = passthrough_matrix(hm, pt);
      const HeteroGradients hg = hetero_welfare_gradients(pt, ptm);
      const HeteroRatios hr = hetero_welfare_ratios(pt, ptm);
      const ConductIndices th = conduct_index_hetero(pt);
      for (int i = 0; i < n; ++i) {
        tr.add(pt.psi[i], eq.diag.eta * eq.theta);
        tr.add(pt.psi_model[i], eq.diag.eta * eq.theta);
        tr.add(th.theta[i], eq.theta);
        tr.add(th.theta_psi[i], eq.theta);
        for (std::size_t l = 0; l < c.T.size(); ++l) {
          const auto L = static_cast<Eigen::Index>(l);
          tr.add(ptm.rho_tilde(i, L), ptv.rho_tilde[l]);
          tr.add(hg.CS(i, L), g.grad_CS[l]);
          tr.add(hg.PS(i, L), g.grad_PS[l]);
          tr.add(hg.R(i, L), g.grad_R[l]);
          tr.add(hg.W(i, L), g.grad_W[l]);
          if (std::isfinite(w.MC[l])) tr.add(hr.MC(i, L), w.MC[l]);
          if (std::isfinite(w.I[l])) tr.add(hr.I(i, L), w.I[l]);
          if (std::isfinite(w.SI[l])) tr.add(hr.SI(i, L), w.SI[l]);
        }
      }
    } catch (const std::exception& e) {
      tr.fail(c.label + ": " + e.what());
    }
  }
  return tr.result("hetero.symmetric_reduction", tol);
}

CheckResult check_psi_identity(double tol) {
  ErrorTracker tr(1e-10);
  for (const SymmetricCase& c : symmetric_cases()) {
    try {
      const SymmetricEquilibrium eq = solve_symmetric(c.market, c.T, oracle_solver_options());
      const HeteroMarket hm = hetero_from_symmetric(c.market, c.mode);
      const int n = hm.demand->firms();
      const HeteroPoint pt = hetero_point(hm, Vec::Constant(n, eq.p_star), c.T);
      for (int i = 0; i < n; ++i) tr.add(pt.Psi.row(i).sum(), -eq.diag.eps * eq.omega);
    } catch (const std::exception& e) {
      tr.fail(c.label + ": " + e.what());
    }
  }
  return tr.result("hetero.psi_row_sums", tol);
}

namespace {

struct AsymCase {
  HeteroMarket market;
  std::vector<double> T;
  Vec p;
  std::string label;
};

std::vector<AsymCase> asymmetric_cases(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  std::vector<AsymCase> out;
  for (int n : {2, 3, 4}) {
    for (Mode mode : {Mode::price, Mode::quantity}) {
      for (int rep = 0; rep < 2; ++rep) {
        Vec b(n), lam(n);
        for (int i = 0; i < n; ++i) {
          b[i] = U(8, 12);
          lam[i] = U(1.5, 2.5);
        }
        const double mu = U(0, 0.5) * lam.minCoeff() / (n - 1);
        AsymCase c;
        c.market.demand = HeteroLinearDemand::from_direct(b, lam, mu);
        c.market.mode = mode;
        const SchemePtr sc = scheme_unit_adval();
        Vec p0(n);
        for (int i = 0; i < n; ++i) {
          const double mc = U(0.2, 2);
          c.market.costs.push_back(constant_cost(mc));
          c.market.schemes.push_back(sc);
          p0[i] = 0.5 * (b[i] / lam[i] + mc) + 1;
        }
        c.T = {U(0, 0.5), U(0, 0.2)};
        c.p = solve_hetero(c.market, c.T, p0, {1e-13, 500});
        c.label = "n=" + std::to_string(n) + (mode == Mode::price ? "/price/" : "/quantity/") + std::to_string(rep);
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

}  // namespace

CheckResult check_hetero_oracle(std::uint64_t seed, double tol) {
  ErrorTracker tr(1e-9);
  try {
    for (const AsymCase& c : asymmetric_cases(seed)) {
      try {
        const HeteroPoint pt = hetero_point(c.market, c.p, c.T);
        const PassThroughMatrix ptm = passthrough_matrix(c.market, pt);
        const Mat fd = fd_hetero_passthrough(c.market, c.T, c.p);
        for (Eigen::Index i = 0; i < fd.rows(); ++i) {
          for (Eigen::Index l = 0; l < fd.cols(); ++l) tr.add(ptm.rho_tilde(i, l), fd(i, l));
        }
      } catch (const std::exception& e) {
        tr.fail(c.label + ": " + e.what());
      }
    }
  } catch (const std::exception& e) {
    tr.fail(e.what());
  }
  return tr.result("hetero.passthrough_vs_fd", tol);
}

CheckResult check_aggregate_mc_bounds(std::uint64_t seed) {
  CheckResult c;
  c.name = "hetero.aggregate_mc_between_firms";
  c.tolerance = 0;
  int bad = 0;
  try {
    for (const AsymCase& a : asymmetric_cases(seed)) {
      const HeteroPoint pt = hetero_point(a.market, a.p, a.T);
      const PassThroughMatrix ptm = passthrough_matrix(a.market, pt);
      const HeteroRatios r = hetero_welfare_ratios(pt, ptm);
      for (std::size_t l = 0; l < r.mc_within_bounds.size(); ++l) {
        ++c.cases;
        if (!r.mc_within_bounds[l]) {
          ++bad;
          c.closed_form = r.total_MC[static_cast<Eigen::Index>(l)];
          c.note = a.label + ": aggregate MC outside the firm range";
        }
      }
    }
  } catch (const std::exception& e) {
    c.note = e.what();
    return c;
  }
  c.pass = bad == 0 && c.cases > 0;
  c.abs_error = c.rel_error = bad;
  if (c.pass) c.note = "aggregate within [min_i, max_i] in every case";
  return c;
}

CheckResult check_pure_tax_reduction(const std::vector<ScenarioSpec>& scenarios, double tol) {
  ErrorTracker tr;
  each_scenario(scenarios, tr, [&](const ScenarioSpec& s) {
    if (s.scheme.kind != SchemeKind::unit_adval && s.scheme.kind != SchemeKind::exogenous_competition) return;
    const Solved r = solve_scenario(s);
    const std::vector<double> ones(s.T.size(), 1.0);
    const WelfareRatios a = welfare_ratios(r.eq, r.ptv, ones);
    const WelfareRatios b = pure_tax_ratios(r.eq, r.ptv);
    for (std::size_t l = 0; l < s.T.size(); ++l) {
      if (!std::isfinite(b.MC[l])) continue;
      tr.add(a.MC[l], b.MC[l]);
      tr.add(a.I[l], b.I[l]);
      tr.add(a.SI[l], b.SI[l]);
    }
  });
  return tr.result("welfare.g1_reduces_to_pure_tax", tol);
}

namespace {

Market pure_cost_market() {
  return Market{linear_demand({1, 1, 0, 1}), constant_cost(0), ConductModel::price_competition(), scheme_cost_shift()};
}

}  // namespace

CheckResult check_pure_cost_case(double tol) {
  ErrorTracker tr;
  const Market m = pure_cost_market();
  for (double t : {0.1, 0.3, 0.5}) {
    const std::vector<double> T{t, 0, 0};
    const SymmetricEquilibrium eq = solve_symmetric(m, T, oracle_solver_options());
    const PassThroughVector ptv = passthrough_vector(eq);
    tr.add(welfare_ratios(eq, ptv).MC[2], -(3 - t) / (2 * t));
  }
  return tr.result("welfare.g0_hand_case", tol);
}

CheckResult check_pure_cost_fd(double tol) {
  ErrorTracker tr;
  const Market m = pure_cost_market();
  for (double t : {0.1, 0.3, 0.5}) {
    const std::vector<double> T{t, 0, 0};
    const SymmetricEquilibrium eq = solve_symmetric(m, T, oracle_solver_options());
    const PassThroughVector ptv = passthrough_vector(eq);
    const FDWelfareGradients fd = fd_welfare_gradients(m, T);
    tr.add(welfare_ratios(eq, ptv).MC[2], -fd.W[2] / fd.R[2]);
  }
  return tr.result("welfare.g0_vs_fd", tol);
}

CheckResult check_global_ratio(double tol) {
  ErrorTracker tr;
  const Market m{linear_demand({1, 1, 0, 1}), constant_cost(0), ConductModel::price_competition(), scheme_unit_adval()};
  const std::vector<double> T{0, 0};
  const GlobalRatio g = global_ratio(m, T, 0, 0, kInf, Measure::CS, Measure::PS);
  tr.add(g.weighted_average.value, g.level_ratio.value);
  tr.add(g.ratio.value, g.level_ratio.value);
  return tr.result("welfare.global_ratio_levels", tol);
}

// ---------------------------------------------------------------- default suite

namespace {

struct RandomDemand {
  DemandPtr demand;
  double p;
};

std::vector<RandomDemand> random_demands(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed + 17);
  auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto N = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  std::vector<RandomDemand> out;
  for (int k = 0; k < count; ++k) {
    const int n = N(1, 4);
    {
      const double lam = U(1, 3), mu = n > 1 ? U(0, 0.6) * lam / (n - 1) : 0;
      auto d = linear_demand({U(5, 15), lam, mu, n});
      out.push_back({d, U(0.05, 0.9) * d->choke_price()});
    }
    {
      const double beta = U(0.5, 2);
      out.push_back({logit_demand({U(0.5, 3), beta, n}), U(0, 4) / beta});
    }
    {
      const double e0 = U(1.5, 4);
      out.push_back({constant_elasticity_demand({U(1, 5), e0, e0 + U(0, 3), n}), U(0.2, 5)});
    }
  }
  return out;
}

CheckResult check_demand_identities(std::uint64_t seed) {
  ErrorTracker tr;
  for (const auto& r : random_demands(seed, 100)) {
    const DemandDiagnostics d = diagnostics_at(*r.demand, r.p);
    tr.add(d.eps_F, d.eps + d.eps_C);
    tr.add(d.eta_F, d.eta + d.eta_C);
    if (d.eps != 0) tr.add(d.alpha, (d.alpha_F + d.alpha_C) * d.eps_F / d.eps);
    if (d.eta != 0) tr.add(d.sigma, (d.sigma_F + d.sigma_C) * d.eta_F / d.eta);
  }
  return tr.result("demand.elasticity_identities", 1e-10);
}

CheckResult check_demand_partials(std::uint64_t seed) {
  ErrorTracker tr(1e-1);  // compared as elasticities, which are O(1)
  for (const auto& r : random_demands(seed, 30)) {
    const SymmetricDemand& dm = *r.demand;
    const int n = dm.firms();
    const double p = r.p;
    const DirectPartials a = dm.direct(p);
    auto qf = [&](int j, double x) {
      std::vector<double> pv(static_cast<std::size_t>(n), p);
      pv[static_cast<std::size_t>(j)] = x;
      return dm.firm_quantity(pv);
    };
    const double h1 = 1e-6 * std::max(1.0, std::abs(p));
    const double h2 = 1e-4 * std::max(1.0, std::abs(p));
    const double q = dm.quantity(p);
    const double e1 = p / q, e2 = p * p / q;
    tr.add(e1 * a.own, e1 * (qf(0, p + h1) - qf(0, p - h1)) / (2 * h1));
    tr.add(e2 * a.own_own, e2 * (qf(0, p + h2) - 2 * qf(0, p) + qf(0, p - h2)) / (h2 * h2));
    if (n > 1) {
      tr.add(e1 * a.cross, e1 * (qf(1, p + h1) - qf(1, p - h1)) / (2 * h1));
      tr.add(e2 * a.cross_cross, e2 * (qf(1, p + h2) - 2 * qf(1, p) + qf(1, p - h2)) / (h2 * h2));
    }
    const InversePartials b = dm.inverse(q);
    auto pf = [&](int j, double x) {
      std::vector<double> qv(static_cast<std::size_t>(n), q);
      qv[static_cast<std::size_t>(j)] = x;
      return dm.firm_price(qv);
    };
    const double k1 = 1e-6 * q, k2 = 1e-4 * q;
    const double f1 = q / p, f2 = q * q / p;
    tr.add(b.own * f1, f1 * (pf(0, q + k1) - pf(0, q - k1)) / (2 * k1));
    tr.add(b.own_own * f2, f2 * (pf(0, q + k2) - 2 * pf(0, q) + pf(0, q - k2)) / (k2 * k2));
    if (n > 1) tr.add(b.cross * f1, f1 * (pf(1, q + k1) - pf(1, q - k1)) / (2 * k1));
  }
  return tr.result("demand.partials_vs_fd", 1e-6);
}

CheckResult check_family_curvatures(std::uint64_t seed) {
  ErrorTracker tr;
  for (const auto& r : random_demands(seed, 30)) {
    const DemandDiagnostics d = diagnostics_at(*r.demand, r.p);
    if (r.demand->family() == "linear") {
      tr.add_abs(d.alpha, 0);
      tr.add_abs(d.sigma, 0);
      tr.add_abs(d.alpha_industry, 0);
      tr.add_abs(d.sigma_industry, 0);
    } else if (r.demand->family() == "logit") {
      const double ns = r.demand->firms() * d.q;
      tr.add_abs(d.sigma_industry, (1 - 2 * ns) / (1 - ns));
    }
  }
  return tr.result("demand.family_curvatures", 1e-10);
}

std::vector<SchemePtr> all_schemes(const DemandPtr& demand, const CostPtr& cost) {
  return {scheme_unit_adval(),       scheme_exogenous_competition(cost), scheme_sales_restriction(demand),
          scheme_tax_evasion(1.2, 0.3), scheme_cost_shift(),             with_marginal_taxes(scheme_tax_evasion(0.8, 0.1))};
}

CheckResult check_unit_adval_sensitivities() {
  ErrorTracker tr;
  const UnitAdValorem s;
  const std::vector<double> T{0.3, 0.15};
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double p = 0.5 + 0.4 * i, q = 0.2 + 0.3 * j;
      const Sensitivities x = sensitivities_at(s, p, q, T);
      tr.add_abs(x.nu, 0.15);
      tr.add_abs(x.tau, 0.15 + 0.3 / p);
      tr.add_abs(x.kappa, 0.15);
      tr.add_abs(x.nu2, 0);
      tr.add_abs(x.tau2, 0);
    }
  }
  return tr.result("market.unit_adval_sensitivities", 1e-15);
}

CheckResult check_g_factors() {
  ErrorTracker tr;
  const DemandPtr d = linear_demand({10, 2, 0.3, 2});
  const CostPtr c = constant_cost(0.5);
  const double p = 3, q = d->quantity(3);
  auto g = [&](const TaxScheme& s, std::vector<double> T) { return sensitivities_at(s, p, q, T).g; };
  const auto gu = g(UnitAdValorem{}, {0.2, 0.1});
  tr.add_abs(gu[0], 1);
  tr.add_abs(gu[1], 1);
  const auto ge = g(ExogenousCompetition(c), {0.2, 0.1, 0.5});
  for (double x : ge) tr.add_abs(x, 1);
  const auto gc = g(CostShift{}, {0.2, 0.1, 0.4});
  tr.add_abs(gc[0], 1);
  tr.add_abs(gc[1], 1);
  tr.add_abs(gc[2], 0);
  const SalesRestriction sr(d);
  const auto gs = g(sr, {0.2, 0.1, 0.2});
  tr.add_abs(gs[0], 1);
  tr.add_abs(gs[1], 1 / (1 - sr.h(q, 0.2)));
  tr.add_abs(gs[2], 0);
  const auto gv = g(TaxEvasion(1, 0), {0.2, 0.1, 0.5});
  tr.add_abs(gv[0], 1);
  tr.add_abs(gv[1] < 1 ? 0.0 : 1.0, 0);  // evasion keeps part of the marginal ad valorem bill
  tr.add_abs(gv[2], 2);
  return tr.result("market.g_factors", 1e-12);
}

CheckResult check_scheme_partials(std::uint64_t seed) {
  ErrorTracker tr(1e-2);
  std::mt19937_64 rng(seed + 29);
  auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  const DemandPtr d = linear_demand({10, 2, 0.3, 2});
  const CostPtr c = std::make_shared<LinearMarginalCost>(0.4, 0.1);
  for (int k = 0; k < 20; ++k) {
    const double p = U(1, 5), q = d->quantity(p);
    for (const SchemePtr& s : all_schemes(d, c)) {
      std::vector<double> T{U(0, 0.5), U(0.02, 0.3)};
      const std::string nm = s->name();
      if (nm == "exogenous_competition") T.push_back(U(0, 0.5) * q);
      if (nm == "sales_restriction") T.push_back(U(0, 0.2));
      if (nm == "evasion" || nm == "evasion+marginal") T.push_back(U(0.05, 0.3));
      if (nm == "cost_shift") T.push_back(U(0, 0.5));
      if (nm == "evasion+marginal") {
        T.push_back(U(-0.1, 0.1));
        T.push_back(U(-0.05, 0.05));
      }
      const SchemePartials a = s->partials(p, q, T);
      const SchemePartials b = numeric_scheme_partials(*s, p, q, T);
      const double sc = std::max(1.0, std::abs(p * q));
      tr.add(a.phi_p / sc, b.phi_p / sc);
      tr.add(a.phi_q / sc, b.phi_q / sc);
      tr.add(a.phi_pp / sc, b.phi_pp / sc);
      tr.add(a.phi_qq / sc, b.phi_qq / sc);
      tr.add(a.phi_pq / sc, b.phi_pq / sc);
      tr.add(a.phi_tilde_p / sc, b.phi_tilde_p / sc);
      tr.add(a.phi_tilde_q / sc, b.phi_tilde_q / sc);
      for (std::size_t l = 0; l < T.size(); ++l) {
        tr.add(a.phi_T[l] / sc, b.phi_T[l] / sc);
        tr.add(a.phi_pT[l] / sc, b.phi_pT[l] / sc);
        tr.add(a.phi_qT[l] / sc, b.phi_qT[l] / sc);
        tr.add(a.phi_tilde_T[l] / sc, b.phi_tilde_T[l] / sc);
      }
    }
  }
  return tr.result("market.scheme_partials_vs_fd", 1e-5);
}

CheckResult check_conduct_identities(std::uint64_t seed) {
  ErrorTracker tr;
  const ConductModel pc = ConductModel::price_competition(), qc = ConductModel::quantity_competition();
  for (const auto& r : random_demands(seed, 50)) {
    const DemandDiagnostics d = diagnostics_at(*r.demand, r.p);
    tr.add(pc.evaluate(*r.demand, d).theta * d.eps_F, d.eps);
    tr.add(qc.evaluate(*r.demand, d).theta * d.eta, d.eta_F);
  }
  return tr.result("market.conduct_identities", 1e-10);
}

CheckResult check_perfect_competition() {
  ErrorTracker tr;
  for (const auto& dm : {DemandPtr(linear_demand({10, 2, 0.3, 3})), DemandPtr(logit_demand({2, 1, 3})),
                         DemandPtr(constant_elasticity_demand({2, 2.5, 3, 3}))}) {
    const Market m{dm, std::make_shared<LinearMarginalCost>(0.5, 0.05), ConductModel::constant(0), scheme_unit_adval()};
    const SymmetricEquilibrium e = solve_symmetric(m, std::vector<double>{0, 0});
    tr.add(e.p_star, m.cost->mc(e.q_star));
  }
  return tr.result("equilibrium.perfect_competition", 1e-10);
}

CheckResult check_idempotence(const std::vector<ScenarioSpec>& scenarios) {
  ErrorTracker tr;
  each_scenario(scenarios, tr, [&](const ScenarioSpec& s) {
    const Market m = build_market(s);
    const SymmetricEquilibrium a = solve_symmetric(m, s.T);
    const SymmetricEquilibrium b = solve_symmetric(m, a.T);
    tr.add(b.p_star, a.p_star);
    tr.add(b.q_star, a.q_star);
  });
  return tr.result("equilibrium.idempotence", 1e-12);
}

CheckResult check_foc_forms(const std::vector<ScenarioSpec>& scenarios) {
  ErrorTracker tr;
  each_scenario(scenarios, tr, [&](const ScenarioSpec& s0) {
    ScenarioSpec s = s0;
    s.scheme.kind = SchemeKind::unit_adval;
    s.scheme.marginal_taxes = false;
    s.T.resize(2);
    const Market m = build_market(s);
    const SymmetricEquilibrium e = solve_symmetric(m, s.T);
    const double t = s.T[0], v = s.T[1];
    // markup on the net-of-tax price
    auto G = [&](double q) {
      const double p = m.demand->price(q);
      return p - (t + m.cost->mc(q)) / (1 - v) - m.conduct.markup(*m.demand, q);
    };
    double lo = e.q_star * 0.95, hi = std::min(e.q_star * 1.05, 0.5 * (e.q_star + m.demand->quantity_range().hi));
    std::uintmax_t it = 300;
    auto r = boost::math::tools::toms748_solve(G, lo, hi, boost::math::tools::eps_tolerance<double>(50), it);
    tr.add(0.5 * (r.first + r.second), e.q_star);
  });
  return tr.result("equilibrium.foc_forms_agree", 1e-10);
}

CheckResult check_ordering() {
  ErrorTracker tr;
  int bad = 0, cases = 0;
  std::string why;
  auto test = [&](const Market& m, const std::string& label) {
    const std::vector<double> T{0.05, 0.1};
    const SymmetricEquilibrium e = solve_symmetric(m, T);
    if (!(e.theta > 0 && e.theta <= e.diag.eps)) return;
    const PassThroughVector ptv = passthrough_vector(e);
    const WelfareRatios w = welfare_ratios(e, ptv);
    ++cases;
    if (!(ptv.rho[0] > ptv.rho[1]) || !(w.MC[0] > w.MC[1])) {
      ++bad;
      why = label;
    }
  };
  for (int n = 1; n <= 10; ++n) {
    for (double share : {0.0, 0.3, 0.6}) {
      if (n == 1 && share > 0) continue;
      const double mu = n > 1 ? share / (n - 1) : 0;
      for (int mode = 0; mode < 2; ++mode) {
        const ConductModel c = mode == 0 ? ConductModel::price_competition() : ConductModel::quantity_competition();
        test(Market{linear_demand({1, 1, mu, n}), constant_cost(0), c, scheme_unit_adval()}, "linear");
      }
    }
    for (double beta : {0.5, 1.0, 2.0}) {
      for (int mode = 0; mode < 2; ++mode) {
        const ConductModel c = mode == 0 ? ConductModel::price_competition() : ConductModel::quantity_competition();
        test(Market{logit_demand({1, beta, n}), constant_cost(0), c, scheme_unit_adval()}, "logit");
      }
    }
  }
  CheckResult r;
  r.name = "welfare.unit_exceeds_adval";
  r.cases = cases;
  r.tolerance = 0;
  r.abs_error = r.rel_error = bad;
  r.pass = bad == 0 && cases > 0;
  r.note = r.pass ? "rho_t > rho_v and MC_t > MC_v on the figure grids" : "ordering violated: " + why;
  return r;
}

CheckResult check_currency_rescaling(const std::vector<ScenarioSpec>& scenarios) {
  ErrorTracker tr;
  each_scenario(scenarios, tr, [&](const ScenarioSpec& s) {
    const Solved a = solve_scenario(s);
    const Solved b = solve_scenario(rescale_currency(s, 4));
    tr.add(b.eq.theta, a.eq.theta);
    tr.add(b.eq.diag.eps, a.eq.diag.eps);
    const WelfareRatios wa = welfare_ratios(a.eq, a.ptv), wb = welfare_ratios(b.eq, b.ptv);
    for (std::size_t l : {overlay_t(s), overlay_v(s)}) {
      tr.add(b.ptv.rho[l], a.ptv.rho[l]);
      tr.add(wb.MC[l], wa.MC[l]);
      tr.add(wb.I[l], wa.I[l]);
      tr.add(wb.SI[l], wa.SI[l]);
    }
  });
  return tr.result("welfare.currency_invariance", 1e-12);
}

CheckResult check_dual_path() {
  ErrorTracker tr(1e-12);
  for (const SymmetricCase& c : symmetric_cases()) {
    const SymmetricEquilibrium eq = solve_symmetric(c.market, c.T, oracle_solver_options());
    const HeteroMarket hm = hetero_from_symmetric(c.market, c.mode);
    const HeteroPoint pt = hetero_point(hm, Vec::Constant(hm.demand->firms(), eq.p_star), c.T);
    const PassThroughMatrix ptm = passthrough_matrix(hm, pt);
    const HeteroGradients g = hetero_welfare_gradients(pt, ptm);
    for (std::size_t l = 0; l < c.T.size(); ++l) {
      const SurplusChange s = surplus_change_via_lambda(pt, ptm, l);
      tr.add(s.dCS, g.total_CS[static_cast<Eigen::Index>(l)]);
      tr.add(s.dPS, g.total_PS[static_cast<Eigen::Index>(l)]);
    }
  }
  return tr.result("hetero.lambda_decomposition", 1e-10);
}

CheckResult check_aggregative() {
  ErrorTracker tr;
  for (int n : {2, 3}) {
    LinearCournotGame game(n, 10, 1.5);
    HeteroMarket m;
    m.demand = game.as_demand();
    m.mode = Mode::quantity;
    Vec mc(n), q(n);
    for (int i = 0; i < n; ++i) {
      mc[i] = 1 + 0.5 * i;
      m.costs.push_back(constant_cost(mc[i]));
      m.schemes.push_back(scheme_unit_adval());
    }
    // linear Cournot: q_i = (alpha - (n+1) c_i + sum c) / ((n+1) beta)
    for (int i = 0; i < n; ++i) q[i] = (10 - (n + 1) * mc[i] + mc.sum()) / ((n + 1) * 1.5);
    const std::vector<double> T{0, 0};
    const HeteroPoint pt = hetero_point(m, m.demand->prices(q), q, T);
    const ConductIndices ci = conduct_index_hetero(pt);
    const AggregativeResult ar = aggregative_reduction(game, q, Vec::Zero(n));
    for (int i = 0; i < n; ++i) {
      tr.add(ar.theta[i], ci.theta[i]);
      tr.add(ar.theta_chain[i], ci.theta[i]);
      tr.add(ar.psi[i], pt.psi[i]);
    }
  }
  return tr.result("hetero.aggregative_reduction", 1e-10);
}

CheckResult check_fd_order() {
  // halving h cuts the central-difference error by four
  const Market m{logit_demand({1.5, 1, 2}), constant_cost(0.3), ConductModel::price_competition(), scheme_unit_adval()};
  const SolverOptions o = oracle_solver_options();
  PriceAt f = [&](std::span<const double> x) { return solve_symmetric(m, x, o).p_star; };
  const std::vector<double> T{0.1, 0.1};
  CheckResult c;
  c.name = "oracle.fd_second_order";
  ErrorTracker tr;
  double worst = 0;
  for (std::size_t l = 0; l < 2; ++l) {
    const double h = 0.05;
    const double d1 = central(f, T, l, h), d2 = central(f, T, l, h / 2), d3 = central(f, T, l, h / 4);
    const double r = (d1 - d2) / (d2 - d3);
    tr.add(r, 4);
    worst = std::max(worst, std::abs(r - 4));
  }
  c = tr.result("oracle.fd_second_order", 0.125);
  c.note = "observed error ratio must lie in [3.5, 4.5]";
  c.pass = worst <= 0.5;
  return c;
}

CheckResult check_fd_examples() {
  ErrorTracker tr;
  const Market mono{linear_demand({1, 1, 0, 1}), constant_cost(0), ConductModel::constant(1), scheme_unit_adval()};
  tr.add_abs(fd_passthrough(mono, std::vector<double>{0, 0})[0], 0.5);
  tr.add_abs(quadrature_cs(*linear_demand({1, 1, 0, 1}), 0.5, 1), 0.125);
  tr.add_abs(quadrature_cs(*linear_demand({1, 1, 0, 1}), 0.5, 0.5), 0);
  return tr.result("oracle.reference_values", 1e-8);
}

CheckResult check_fd_zero_tax_mc(const std::vector<ScenarioSpec>& scenarios) {
  ErrorTracker tr(1e-9);
  each_scenario(scenarios, tr, [&](const ScenarioSpec& s0) {
    ScenarioSpec s = s0;
    s.scheme.kind = SchemeKind::unit_adval;
    s.scheme.marginal_taxes = false;
    s.T = {0, 0};
    const Solved r = solve_scenario(s);
    const FDWelfareGradients fd = fd_welfare_gradients(r.market, s.T);
    tr.add(-fd.W[0] / fd.R[0], r.eq.theta * r.ptv.rho[0]);
  });
  return tr.result("oracle.zero_tax_mc_vs_fd", 1e-5);
}

std::vector<ScenarioSpec> first_of_each(const std::vector<ScenarioSpec>& all) {
  std::vector<ScenarioSpec> out;
  for (const auto& s : all) {
    if (s.label.size() >= 2 && s.label.compare(s.label.size() - 2, 2, "/0") == 0) out.push_back(s);
  }
  return out;
}

}  // namespace

ValidationSuite default_suite(const ValidationOptions& o) {
  const std::uint64_t seed = o.seed;
  auto scenarios = std::make_shared<const std::vector<ScenarioSpec>>(generate_scenarios(
      seed, o.per_combination,
      {SchemeKind::unit_adval, SchemeKind::exogenous_competition, SchemeKind::sales_restriction, SchemeKind::evasion}));
  auto few = std::make_shared<const std::vector<ScenarioSpec>>(first_of_each(*scenarios));
  const bool corrupt = o.corrupt;

  ValidationSuite s;
  s.add("demand.elasticity_identities", [=] { return check_demand_identities(seed); });
  s.add("demand.partials_vs_fd", [=] { return check_demand_partials(seed); });
  s.add("demand.family_curvatures", [=] { return check_family_curvatures(seed); });
  s.add("market.unit_adval_sensitivities", [] { return check_unit_adval_sensitivities(); });
  s.add("market.g_factors", [] { return check_g_factors(); });
  s.add("market.scheme_partials_vs_fd", [=] { return check_scheme_partials(seed); });
  s.add("market.conduct_identities", [=] { return check_conduct_identities(seed); });
  s.add("equilibrium.linear_closed_form", [] { return check_linear_closed_forms(1e-10); });
  s.add("equilibrium.perfect_competition", [] { return check_perfect_competition(); });
  s.add("equilibrium.idempotence", [=] { return check_idempotence(*few); });
  s.add("equilibrium.foc_forms_agree", [=] { return check_foc_forms(*few); });
  s.add("welfare.passthrough_vs_fd", [=] { return check_passthrough_oracle(*scenarios, 1e-6, corrupt); });
  s.add("welfare.rho_v_relation", [=] { return check_rho_v_relation(*scenarios, 1e-10); });
  s.add("welfare.gradients_vs_fd", [=] { return check_gradient_oracle(*few, 1e-5); });
  s.add("welfare.ledger_identity", [=] { return check_ledger_identity(*scenarios, 1e-12); });
  s.add("welfare.zero_tax_mc", [=] { return check_zero_tax_reduction(*few, 1e-12); });
  s.add("welfare.unit_exceeds_adval", [] { return check_ordering(); });
  s.add("welfare.currency_invariance", [=] { return check_currency_rescaling(*few); });
  s.add("welfare.g1_reduces_to_pure_tax", [=] { return check_pure_tax_reduction(*scenarios, 1e-12); });
  s.add("welfare.g0_hand_case", [] { return check_pure_cost_case(1e-12); });
  s.add("welfare.g0_vs_fd", [] { return check_pure_cost_fd(1e-5); });
  s.add("welfare.global_ratio_levels", [] { return check_global_ratio(1e-6); });
  s.add("hetero.symmetric_reduction", [] { return check_hetero_symmetric_reduction(1e-8); });
  s.add("hetero.psi_row_sums", [] { return check_psi_identity(1e-8); });
  s.add("hetero.lambda_decomposition", [] { return check_dual_path(); });
  s.add("hetero.passthrough_vs_fd", [=] { return check_hetero_oracle(seed, 1e-5); });
  s.add("hetero.aggregate_mc_between_firms", [=] { return check_aggregate_mc_bounds(seed); });
  s.add("hetero.aggregative_reduction", [] { return check_aggregative(); });
  s.add("oracle.fd_second_order", [] { return check_fd_order(); });
  s.add("oracle.reference_values", [] { return check_fd_examples(); });
  s.add("oracle.zero_tax_mc_vs_fd", [=] { return check_fd_zero_tax_mc(*few); });
  return s;
}

ValidationReport run_validation_suite(const ValidationOptions& o) {
  return default_suite(o).run(o.seed, o.corrupt ? "corrupted" : "default", o.threads);
}

}  // namespace oligo
