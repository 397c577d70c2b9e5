#include "oligo/welfare.hpp"

#include <algorithm>
#include <cmath>

#include "oligo/errors.hpp"

namespace oligo {

Ratio mc_unit(double theta, double eps, double tau, double v, double rho_t) {
  return ratio((1 - v) * theta + eps * tau, 1 / rho_t + v - eps * tau);
}

Ratio mc_adval(double theta, double eps, double tau, double v, double rho_v) {
  return ratio((1 - v) * theta + eps * tau, 1 / rho_v + v - eps * tau);
}

Ratio incidence(double theta, double v, double rho) { return ratio(1.0, 1 / rho - (1 - v) * (1 - theta)); }

double rho_v_from_rho_t(double rho_t, double theta, double eps) {
  if (!(eps > 0)) throw DomainError("rho_v_from_rho_t: elasticity must be positive");
  return (1 - theta / eps) * rho_t;
}

MCPair mc_sufficient_stats(double rho_t, double rho_v, double eps, double v, double tau) {
  if (rho_t == 0) return {};
  const double num = (1 - v + tau) * rho_t - (1 - v) * rho_v;
  MCPair r;
  r.mc_t = ratio(num * eps, 1 + (v - eps * tau) * rho_t);
  r.mc_v = ratio(num * (rho_v / rho_t) * eps, 1 + (v - eps * tau) * rho_v);
  return r;
}

namespace {

void require_unit_adval(const SymmetricEquilibrium& eq) {
  const Sensitivities& s = eq.sens;
  if (std::abs(s.kappa - s.nu) > 1e-12 || s.nu2 != 0 || s.tau2 != 0) {
    throw ConfigError("pass-through display needs a unit + ad valorem scheme (kappa = nu, no second partials)");
  }
}

double chi_or_zero(const SymmetricEquilibrium& eq, bool constant_mc) { return constant_mc ? 0.0 : eq.chi; }

}  // namespace

RhoPair passthrough_general(const SymmetricEquilibrium& eq) {
  require_unit_adval(eq);
  const double v = eq.sens.nu, tau = eq.sens.tau;
  const double eps = eq.diag.eps, eta = eq.diag.eta, th = eq.theta, chi = eq.chi;
  // eps q (theta eta)' = eps eta theta omega
  const double den = (1 + (1 - tau) / (1 - v) * eps * chi) - (eta + chi) * th + eps * eta * th * eq.omega;
  RhoPair r;
  r.rho_t = ratio(1 / (1 - v), den);
  r.rho_v = ratio((eps - th) / ((1 - v) * eps), den);
  return r;
}

RhoPair passthrough_price(const SymmetricEquilibrium& eq, bool constant_mc) {
  require_unit_adval(eq);
  const double v = eq.sens.nu, tau = eq.sens.tau, chi = chi_or_zero(eq, constant_mc);
  const double eps = eq.diag.eps, eF = eq.diag.eps_F, a = eq.diag.alpha;
  const double k = (1 - tau) / (1 - v);
  RhoPair r;
  r.rho_t = ratio(1 / (1 - v), 1 + (1 - a / eF) * eps / eF + (k - 1 / eF) * eps * chi);
  if (std::abs(eF - 1) > kZeroDenominator) {
    const double den = 1 / (1 - 1 / eF) + (1 - a / eF) * eps / (eF - 1) + (k * eF / (eF - 1) - 1 / (eF - 1)) * eps * chi;
    r.rho_v = ratio(1 / (1 - v), den);
  }
  return r;
}

RhoPair passthrough_quantity(const SymmetricEquilibrium& eq, bool constant_mc) {
  require_unit_adval(eq);
  const double v = eq.sens.nu, tau = eq.sens.tau, chi = chi_or_zero(eq, constant_mc);
  const double eta = eq.diag.eta, hF = eq.diag.eta_F, s = eq.diag.sigma;
  const double den = 1 + hF / eta - s + ((1 - tau) / (1 - v) - hF) * chi / eta;
  RhoPair r;
  r.rho_t = ratio(1 / (1 - v), den);
  r.rho_v = ratio((1 - hF) / (1 - v), den);
  return r;
}

Ratio wf_equivalent_form(const SymmetricEquilibrium& eq) {
  require_unit_adval(eq);
  const double v = eq.sens.nu, tau = eq.sens.tau, th = eq.theta;
  const double inv_eS = eq.chi;                 // 1 / elasticity of supply
  const double inv_eTheta = eq.theta_log_slope;  // q theta' / theta
  const double inv_eMs = eq.diag.inv_eps_ms;
  const double den = 1 + ((1 - tau) / (1 - v) * eq.diag.eps - th) * inv_eS + th * inv_eTheta + th * inv_eMs;
  return ratio(1 / (1 - v), den);
}

Ratio rho0_general(const Sensitivities& s, const DemandDiagnostics& d, double theta, double omega, double chi) {
  const double inv = 1 - s.kappa + d.eps * s.tau2 + (1 - s.tau) * d.eps * chi +
                     (s.nu - s.kappa + d.eta * s.nu2 + (omega - d.eta - chi) * (1 - s.nu)) * theta;
  return ratio(1.0, inv);
}

PassThroughVector passthrough_vector(const SymmetricEquilibrium& eq, double rho0) {
  const Sensitivities& s = eq.sens;
  const std::size_t d = s.f.size();
  PassThroughVector v;
  v.rho0 = rho0;
  v.rho_tilde.resize(d);
  v.rho.resize(d);
  const double markup = eq.diag.eta * eq.theta;
  for (std::size_t l = 0; l < d; ++l) {
    v.rho_tilde[l] = (s.dtau_dT[l] - s.dnu_dT[l] * markup) * eq.p_star * rho0;
    v.rho[l] = ratio(v.rho_tilde[l], s.f[l]).value;
  }
  return v;
}

PassThroughVector passthrough_vector(const SymmetricEquilibrium& eq) {
  const Ratio r0 = rho0_general(eq.sens, eq.diag, eq.theta, eq.omega, eq.chi);
  return passthrough_vector(eq, r0.get("common pass-through factor"));
}

WelfareGradients welfare_gradients(const SymmetricEquilibrium& eq, const PassThroughVector& ptv) {
  const Sensitivities& s = eq.sens;
  const double q = eq.q_star, th = eq.theta, eps = eq.diag.eps;
  const std::size_t d = ptv.rho_tilde.size();
  WelfareGradients g;
  g.grad_CS.resize(d);
  g.grad_PS.resize(d);
  g.grad_R.resize(d);
  g.grad_W.resize(d);
  for (std::size_t l = 0; l < d; ++l) {
    const double r = ptv.rho_tilde[l];
    g.grad_CS[l] = -q * r;
    g.grad_PS[l] = q * ((1 - s.nu) * (1 - th) * r - s.f[l]);
    g.grad_R[l] = q * (s.f_tilde[l] + (s.nu_tilde - eps * s.tau_tilde) * r);
    g.grad_W[l] = q * ((s.nu_tilde - s.nu - (1 - s.nu) * th - eps * s.tau_tilde) * r + s.f_tilde[l] - s.f[l]);
  }
  return g;
}

WelfareRatios welfare_ratios(const SymmetricEquilibrium& eq, const PassThroughVector& ptv) {
  return welfare_ratios(eq, ptv, eq.sens.g);
}

WelfareRatios welfare_ratios(const SymmetricEquilibrium& eq, const PassThroughVector& ptv,
                             std::span<const double> g) {
  const Sensitivities& s = eq.sens;
  const double th = eq.theta, eps = eq.diag.eps;
  const std::size_t d = ptv.rho.size();
  if (g.size() != d) throw ConfigError("welfare_ratios: g must have one entry per tax dimension");
  WelfareRatios w;
  w.MC.assign(d, kNaN);
  w.I.assign(d, kNaN);
  w.SI.assign(d, kNaN);
  // deadweight part shared by MC and SI
  const double dead = (1 - s.nu) * th + eps * s.tau_tilde + s.nu - s.nu_tilde;
  for (std::size_t l = 0; l < d; ++l) {
    const double rho = ptv.rho[l];
    if (!std::isfinite(rho) || rho == 0 || !std::isfinite(g[l])) continue;
    const double inv = 1 / rho;
    const double ps = inv - (1 - s.nu) * (1 - th);
    w.MC[l] = ratio((1 - g[l]) * inv + dead, g[l] * inv + s.nu_tilde - eps * s.tau_tilde).value;
    w.I[l] = ratio(1.0, ps).value;
    w.SI[l] = ratio(dead + (1 - g[l]) * inv, ps).value;
  }
  return w;
}

WelfareRatios pure_tax_ratios(const SymmetricEquilibrium& eq, const PassThroughVector& ptv) {
  const Sensitivities& s = eq.sens;
  const double th = eq.theta, eps = eq.diag.eps;
  const std::size_t d = ptv.rho.size();
  WelfareRatios w;
  w.MC.assign(d, kNaN);
  w.I.assign(d, kNaN);
  w.SI.assign(d, kNaN);
  const double loss = (1 - s.nu) * th + eps * s.tau;
  for (std::size_t l = 0; l < d; ++l) {
    const double rho = ptv.rho[l];
    if (!std::isfinite(rho) || rho == 0) continue;
    const double ps = 1 / rho - (1 - s.nu) * (1 - th);
    w.MC[l] = ratio(loss, 1 / rho + s.nu - eps * s.tau).value;
    w.I[l] = ratio(1.0, ps).value;
    w.SI[l] = ratio(loss, ps).value;
  }
  return w;
}

WelfareRatios ratios_from_gradients(const WelfareGradients& g) {
  const std::size_t d = g.grad_W.size();
  WelfareRatios w;
  w.MC.resize(d);
  w.I.resize(d);
  w.SI.resize(d);
  for (std::size_t l = 0; l < d; ++l) {
    w.MC[l] = ratio(-g.grad_W[l], g.grad_R[l]).value;
    w.I[l] = ratio(g.grad_CS[l], g.grad_PS[l]).value;
    w.SI[l] = ratio(g.grad_W[l], g.grad_PS[l]).value;
  }
  return w;
}

// ---------------------------------------------------------------- levels

double consumer_surplus(const SymmetricDemand& demand, double p) {
  demand.check_price(p);
  const double choke = demand.choke_price();
  auto q = [&](double s) { return demand.quantity(s); };
  if (std::isfinite(choke)) {
    if (p >= choke) return 0;
    return integrate(q, p, choke);
  }
  const double far = std::max(1.0, std::abs(p)) * 1e6;
  if (demand.quantity(far) * far > 1e-6) throw TailError("consumer surplus: demand does not vanish at high prices");
  try {
    return integrate(q, p, kInf);
  } catch (const OracleError& e) {
    throw TailError(std::string("consumer surplus: tail integral failed: ") + e.what());
  }
}

WelfareLevels welfare_levels(const Market& m, const SymmetricEquilibrium& eq) {
  const double p = eq.p_star, q = eq.q_star;
  WelfareLevels w;
  w.CS = consumer_surplus(*m.demand, p);
  w.PS = p * q - m.cost->cost(q) - m.scheme->phi(p, q, eq.T);
  w.R = m.scheme->phi_tilde(p, q, eq.T);
  w.W = w.CS + w.PS + w.R;
  w.external = m.scheme->external_cost(eq.T);
  return w;
}

Measure measure_from_string(const std::string& s) {
  if (s == "CS") return Measure::CS;
  if (s == "PS") return Measure::PS;
  if (s == "R") return Measure::R;
  if (s == "W") return Measure::W;
  throw ConfigError("unknown surplus measure '" + s + "' (expected CS, PS, R or W)");
}

namespace {

double pick(const WelfareGradients& g, Measure m, std::size_t l) {
  switch (m) {
    case Measure::CS: return g.grad_CS[l];
    case Measure::PS: return g.grad_PS[l];
    case Measure::R: return g.grad_R[l];
    case Measure::W: return g.grad_W[l];
  }
  return kNaN;
}

double pick(const WelfareLevels& w, Measure m) {
  switch (m) {
    case Measure::CS: return w.CS;
    case Measure::PS: return w.PS;
    case Measure::R: return w.R;
    case Measure::W: return w.W;
  }
  return kNaN;
}

}  // namespace

GlobalRatio global_ratio(const Market& m, std::span<const double> T, std::size_t index, double T1, double T2,
                         Measure A, Measure B, const SolverOptions& opt) {
  if (index >= T.size()) throw ConfigError("global_ratio: tax index out of range");
  std::vector<double> x(T.begin(), T.end());
  auto solve_at = [&](double value) {
    x[index] = value;
    return solve_symmetric(m, x, opt);
  };
  auto grads_at = [&](double value) {
    const SymmetricEquilibrium eq = solve_at(value);
    return welfare_gradients(eq, passthrough_vector(eq));
  };
  auto solvable = [&](double value) {
    try {
      const SymmetricEquilibrium eq = solve_at(value);
      return eq.q_star > 0;
    } catch (const Error&) {
      return false;
    }
  };

  GlobalRatio out;
  if (T1 == T2) {
    out.t_end = T2;
    return out;
  }
  double end = T2;
  if (!std::isfinite(T2)) {
    // walk up until the market closes or the path is long enough that B's
    // density is negligible
    double step = 1, hi = T1 + step;
    const double b0 = std::abs(pick(grads_at(T1), B, index));
    int guard = 0;
    while (guard++ < 60) {
      if (!solvable(hi)) break;
      if (std::abs(pick(grads_at(hi), B, index)) <= 1e-14 * std::max(1.0, b0)) break;
      step *= 2;
      hi = T1 + step;
    }
    if (solvable(hi)) {
      end = hi;
    } else {
      double lo = T1 + (guard > 1 ? step / 2 : 0);
      for (int k = 0; k < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++k) {
        const double mid = 0.5 * (lo + hi);
        (solvable(mid) ? lo : hi) = mid;
      }
      end = lo;
    }
  }
  out.t_end = end;

  auto dA = [&](double s) { return pick(grads_at(s), A, index); };
  auto dB = [&](double s) { return pick(grads_at(s), B, index); };
  // local ratio from the closed-form incidence / MC displays where one
  // exists, weighted by dB/dT
  auto theta_dB = [&](double s) {
    const SymmetricEquilibrium eq = solve_at(s);
    const PassThroughVector ptv = passthrough_vector(eq);
    const WelfareGradients g = welfare_gradients(eq, ptv);
    const WelfareRatios r = welfare_ratios(eq, ptv);
    const double b = pick(g, B, index);
    double local = ratio(pick(g, A, index), b).value;
    if (A == Measure::CS && B == Measure::PS) local = r.I[index];
    if (A == Measure::W && B == Measure::R) local = -r.MC[index];
    if (A == Measure::W && B == Measure::PS) local = r.SI[index];
    return std::isfinite(local) ? local * b : 0.0;
  };
  const double IA = integrate(dA, T1, end, 1e-11);
  const double IB = integrate(dB, T1, end, 1e-11);
  out.ratio = ratio(IA, IB);
  out.weighted_average = ratio(integrate(theta_dB, T1, end, 1e-11), IB);

  const WelfareLevels l1 = welfare_levels(m, solve_at(T1));
  double a2 = 0, b2 = 0;
  if (std::isfinite(T2)) {
    const WelfareLevels l2 = welfare_levels(m, solve_at(T2));
    a2 = pick(l2, A);
    b2 = pick(l2, B);
  } else {
    // the declared infinite limit needs A and B to have vanished
    const WelfareLevels l2 = welfare_levels(m, solve_at(end));
    const double scale = std::max(std::abs(pick(l1, A)), std::abs(pick(l1, B)));
    if (std::abs(pick(l2, A)) > 1e-6 * scale || std::abs(pick(l2, B)) > 1e-6 * scale) {
      throw TailError("global_ratio: surplus measures do not vanish at the end of the tax path");
    }
  }
  out.level_ratio = ratio(pick(l1, A) - a2, pick(l1, B) - b2);
  // integrals run T1 -> T2, levels are A(T1) - A(T2); both ratios are sign-free
  return out;
}

}  // namespace oligo
