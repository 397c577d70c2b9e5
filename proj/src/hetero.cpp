#include "oligo/hetero.hpp"

#include <algorithm>
#include <cmath>

#include "oligo/errors.hpp"

namespace oligo {

// ---------------------------------------------------------------- demand systems

HeteroLinearDemand::HeteroLinearDemand(Vec a, Mat B) : a_(std::move(a)), B_(std::move(B)) {
  if (a_.size() == 0 || B_.rows() != a_.size() || B_.cols() != a_.size()) {
    throw ConfigError("linear demand system: a must be n-vector and B n x n");
  }
  Eigen::FullPivLU<Mat> lu(B_);
  invertible_ = lu.isInvertible();
  if (invertible_) Binv_ = lu.inverse();
}

std::shared_ptr<HeteroLinearDemand> HeteroLinearDemand::from_direct(const Vec& b, const Vec& lambda, double mu) {
  const Eigen::Index n = b.size();
  if (n == 0 || lambda.size() != n) throw ConfigError("linear demand system: b and lambda need one entry per firm");
  Mat Lam = Mat::Constant(n, n, -mu);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(lambda[i] > 0)) throw ConfigError("linear demand system: lambda_i must be positive");
    Lam(i, i) = lambda[i];
  }
  Eigen::FullPivLU<Mat> lu(Lam);
  if (!lu.isInvertible()) throw ConfigError("linear demand system: price slopes are singular");
  const Mat B = lu.inverse();
  return std::make_shared<HeteroLinearDemand>(B * b, B);
}

Vec HeteroLinearDemand::quantities(const Vec& p) const {
  if (!invertible_) throw SingularSystem("linear demand system: no direct demand for singular B", kInf);
  return Binv_ * (a_ - p);
}

Vec HeteroLinearDemand::prices(const Vec& q) const { return a_ - B_ * q; }

Mat HeteroLinearDemand::jacobian(const Vec&) const {
  if (!invertible_) throw SingularSystem("linear demand system: no direct demand for singular B", kInf);
  return -Binv_;
}

Mat HeteroLinearDemand::inverse_jacobian(const Vec&) const { return -B_; }

HeteroLogitDemand::HeteroLogitDemand(Vec delta, double beta) : delta_(std::move(delta)), beta_(beta) {
  if (delta_.size() == 0) throw ConfigError("logit system: at least one firm");
  if (!(beta_ > 0)) throw ConfigError("logit system: beta must be positive");
}

Vec HeteroLogitDemand::quantities(const Vec& p) const {
  const Vec u = delta_ - beta_ * p;
  const double m = std::max(0.0, u.maxCoeff());
  const Vec e = (u.array() - m).exp().matrix();
  return e / (std::exp(-m) + e.sum());
}

Vec HeteroLogitDemand::prices(const Vec& q) const {
  const double q0 = 1 - q.sum();
  if (!(q.minCoeff() > 0) || !(q0 > 0)) throw DomainError("logit system: shares must be positive and sum below one");
  return ((delta_.array() - (q.array() / q0).log()) / beta_).matrix();
}

Mat HeteroLogitDemand::jacobian(const Vec& p) const {
  const Vec s = quantities(p);
  Mat J = beta_ * s * s.transpose();
  J.diagonal() -= beta_ * s;
  return J;
}

Mat HeteroLogitDemand::inverse_jacobian(const Vec& q) const {
  const double q0 = 1 - q.sum();
  if (!(q.minCoeff() > 0) || !(q0 > 0)) throw DomainError("logit system: shares must be positive and sum below one");
  Mat M = Mat::Constant(q.size(), q.size(), -1 / (beta_ * q0));
  M.diagonal() -= (1 / (beta_ * q.array())).matrix();
  return M;
}

HeteroMarket hetero_from_symmetric(const Market& market, Mode mode) {
  HeteroMarket h;
  h.mode = mode;
  int n = 0;
  if (auto lin = std::dynamic_pointer_cast<const LinearDemand>(market.demand)) {
    const auto& prm = lin->params();
    n = prm.n;
    h.demand = HeteroLinearDemand::from_direct(Vec::Constant(n, prm.b), Vec::Constant(n, prm.lambda), prm.mu);
  } else if (auto lg = std::dynamic_pointer_cast<const LogitDemand>(market.demand)) {
    const auto& prm = lg->params();
    n = prm.n;
    h.demand = std::make_shared<HeteroLogitDemand>(Vec::Constant(n, prm.delta), prm.beta);
  } else {
    throw ConfigError("firm-level restatement supports linear and logit demand");
  }
  h.costs.assign(static_cast<std::size_t>(n), market.cost);
  h.schemes.assign(static_cast<std::size_t>(n), market.scheme);
  return h;
}

// ---------------------------------------------------------------- points

namespace {

void check_market(const HeteroMarket& m, std::span<const double> T) {
  if (!m.demand) throw ConfigError("firm-level market: demand system required");
  const auto n = static_cast<std::size_t>(m.demand->firms());
  if (m.costs.size() != n || m.schemes.size() != n) {
    throw ConfigError("firm-level market: one cost function and one scheme per firm");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!m.costs[i] || !m.schemes[i]) throw ConfigError("firm-level market: null cost or scheme");
    m.schemes[i]->check_taxes(T);
  }
}

// psi_i p_i at (p, q) from the demand system; q must match p.
Vec psi_times_p(const HeteroMarket& m, const Vec& p, const Vec& q) {
  const Eigen::Index n = p.size();
  Vec r(n);
  if (m.mode == Mode::price) {
    const Mat J = m.demand->jacobian(p);
    for (Eigen::Index i = 0; i < n; ++i) r[i] = -q[i] / J(i, i);
  } else {
    const Mat IJ = m.demand->inverse_jacobian(q);
    for (Eigen::Index i = 0; i < n; ++i) r[i] = -q[i] * IJ(i, i);
  }
  return r;
}

struct State {
  Vec p, q;
};

State state_of(const HeteroMarket& m, const Vec& x) {
  State s;
  if (m.mode == Mode::price) {
    s.p = x;
    s.q = m.demand->quantities(x);
  } else {
    s.q = x;
    s.p = m.demand->prices(x);
  }
  if (!(s.p.minCoeff() > 0) || !(s.q.minCoeff() > 0)) throw DomainError("firm-level market: prices and quantities must be positive");
  return s;
}

Vec foc(const HeteroMarket& m, std::span<const double> T, const State& s) {
  const Eigen::Index n = s.p.size();
  const Vec psip = psi_times_p(m, s.p, s.q);
  Vec G(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    m.schemes[k]->check_point(s.p[i], s.q[i], T);
    const SchemePartials d = m.schemes[k]->partials(s.p[i], s.q[i], T);
    const double nu = d.phi_p / s.q[i];
    G[i] = s.p[i] - d.phi_q - (1 - nu) * psip[i] - m.costs[k]->mc(s.q[i]);
  }
  return G;
}

}  // namespace

Vec pricing_strength_model(const HeteroMarket& m, const Vec& p) {
  const Vec q = m.demand->quantities(p);
  return (psi_times_p(m, p, q).array() / p.array()).matrix();
}

HeteroPoint hetero_point(const HeteroMarket& m, const Vec& p, std::span<const double> T) {
  if (!m.demand) throw ConfigError("firm-level market: demand system required");
  return hetero_point(m, p, m.demand->quantities(p), T);
}

HeteroPoint hetero_point(const HeteroMarket& m, const Vec& p, const Vec& q, std::span<const double> T) {
  check_market(m, T);
  const Eigen::Index n = m.demand->firms();
  if (p.size() != n || q.size() != n) throw ConfigError("firm-level market: price or quantity vector has the wrong length");
  HeteroPoint pt;
  pt.p = p;
  pt.T.assign(T.begin(), T.end());
  pt.q = q;
  if (!(p.minCoeff() > 0) || !(pt.q.minCoeff() > 0)) throw DomainError("firm-level market: prices and quantities must be positive");

  pt.mc.resize(n);
  pt.chi.resize(n);
  pt.sens.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    pt.sens.push_back(sensitivities_at(*m.schemes[k], p[i], pt.q[i], T));
    pt.mc[i] = m.costs[k]->mc(pt.q[i]);
    pt.chi[i] = m.costs[k]->chi(pt.q[i]);
  }
  pt.psi = pricing_strength(m, pt);
  pt.psi_model = (psi_times_p(m, p, pt.q).array() / p.array()).matrix();
  pt.foc_residual = foc(m, T, {p, pt.q});

  Mat J = Mat::Constant(n, n, kNaN);
  bool direct = true;
  try {
    J = m.demand->jacobian(p);
  } catch (const SingularSystem&) {
    direct = false;
  }
  pt.eps.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) pt.eps(i, j) = -(p[i] / pt.q[i]) * J(i, j);
  }

  pt.Psi = Mat::Constant(n, n, kNaN);
  for (Eigen::Index j = 0; direct && j < n; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(p[j]));
    Vec up = p, dn = p;
    up[j] += h;
    dn[j] -= h;
    const Vec d = (pricing_strength_model(m, up) - pricing_strength_model(m, dn)) / (2 * h);
    for (Eigen::Index i = 0; i < n; ++i) pt.Psi(i, j) = p[i] / pt.psi_model[i] * d[i];
  }

  if (m.mode == Mode::price) {
    pt.zeta = Mat::Identity(n, n);
    pt.dq_dsigma = J;
  } else {
    pt.zeta = m.demand->inverse_jacobian(pt.q);
    pt.dq_dsigma = Mat::Identity(n, n);
  }
  return pt;
}

Vec pricing_strength(const HeteroMarket&, const HeteroPoint& pt) {
  const Eigen::Index n = pt.p.size();
  Vec psi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Sensitivities& s = pt.sens[static_cast<std::size_t>(i)];
    psi[i] = (1 - s.tau - pt.mc[i] / pt.p[i]) / (1 - s.nu);
  }
  return psi;
}

// ---------------------------------------------------------------- solver

Vec solve_hetero(const HeteroMarket& m, std::span<const double> T, const Vec& p0, const HeteroSolveOptions& o) {
  check_market(m, T);
  const Eigen::Index n = m.demand->firms();
  if (p0.size() != n) throw ConfigError("firm-level solver: start vector has the wrong length");

  Vec x = m.mode == Mode::price ? p0 : m.demand->quantities(p0);
  auto eval = [&](const Vec& y) { return foc(m, T, state_of(m, y)); };
  Vec G = eval(x);
  double err = G.lpNorm<Eigen::Infinity>();
  double w = 1;
  int polish = 0;

  for (int it = 0; it < o.max_iter; ++it) {
    const double scale = std::max(1.0, state_of(m, x).p.lpNorm<Eigen::Infinity>());
    if (err <= o.tol * scale) {
      // a few extra steps push the residual towards rounding level
      if (++polish > 3) break;
    }
    Vec step(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double h = 1e-7 * std::max(1e-3, std::abs(x[i]));
      Vec up = x, dn = x;
      up[i] += h;
      dn[i] -= h;
      double dG;
      try {
        dG = (eval(up)[i] - eval(dn)[i]) / (2 * h);
      } catch (const DomainError&) {
        up[i] = x[i];
        dG = (eval(x)[i] - eval(dn)[i]) / h;
      }
      if (dG == 0 || !std::isfinite(dG)) throw NoConvergence("firm-level solver: flat best-response condition", {x.data(), x.data() + n});
      step[i] = G[i] / dG;
    }
    bool moved = false;
    while (w >= 1.0 / 1024) {
      const Vec trial = x - w * step;
      try {
        const Vec Gt = eval(trial);
        const double et = Gt.lpNorm<Eigen::Infinity>();
        if (std::isfinite(et) && et < err) {
          x = trial;
          G = Gt;
          err = et;
          moved = true;
          w = std::min(1.0, 2 * w);
          break;
        }
      } catch (const DomainError&) {
      }
      w *= 0.5;
    }
    if (!moved) {
      w = 1;
      break;  // no further progress at this precision
    }
  }
  const State s = state_of(m, x);
  if (!(err <= o.tol * std::max(1.0, s.p.lpNorm<Eigen::Infinity>()))) {
    throw NoConvergence("firm-level solver: first-order conditions not met", {s.p.data(), s.p.data() + n});
  }
  return s.p;
}

// ---------------------------------------------------------------- pass-through

PassThroughMatrix passthrough_matrix(const HeteroMarket&, const HeteroPoint& pt) {
  const Eigen::Index n = pt.p.size();
  if (pt.sens.empty()) throw ConfigError("pass-through matrix: empty point");
  const auto d = static_cast<Eigen::Index>(pt.sens[0].f.size());
  PassThroughMatrix r;
  r.b.resize(n, n);
  r.iota.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Sensitivities& s = pt.sens[static_cast<std::size_t>(i)];
    const double psi = pt.psi[i];
    const double margin_share = 1 - s.tau - psi * (1 - s.nu);
    const double ce = s.tau2 - psi * s.kappa + psi * s.nu + pt.chi[i] * margin_share;
    for (Eigen::Index j = 0; j < n; ++j) {
      r.b(i, j) = -(1 - s.nu) * psi * pt.Psi(i, j) + ce * pt.eps(i, j);
    }
    r.b(i, i) += 1 - s.kappa - psi * (1 - s.nu - s.nu2);
    for (Eigen::Index l = 0; l < d; ++l) {
      const auto k = static_cast<std::size_t>(l);
      r.iota(i, l) = pt.p[i] * (s.dtau_dT[k] - psi * s.dnu_dT[k]);
    }
  }
  Eigen::PartialPivLU<Mat> lu(r.b);
  const double rc = lu.rcond();
  r.condition = rc > 0 ? 1 / rc : kInf;
  if (!(rc > 1e-15)) throw SingularSystem("pass-through matrix: singular first-order system", r.condition);
  r.low_confidence = r.condition > 1e10;
  r.rho_tilde = lu.solve(r.iota);
  r.rho.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index l = 0; l < d; ++l) {
      r.rho(i, l) = ratio(r.rho_tilde(i, l), pt.sens[static_cast<std::size_t>(i)].f[static_cast<std::size_t>(l)]).value;
    }
  }
  return r;
}

// ---------------------------------------------------------------- welfare

HeteroGradients hetero_welfare_gradients(const HeteroPoint& pt, const PassThroughMatrix& ptm) {
  const Eigen::Index n = pt.p.size(), d = ptm.rho_tilde.cols();
  const Mat er = pt.eps * ptm.rho_tilde;  // eps_i . rho_tilde_l
  HeteroGradients g;
  g.CS.resize(n, d);
  g.PS.resize(n, d);
  g.R.resize(n, d);
  g.W.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Sensitivities& s = pt.sens[static_cast<std::size_t>(i)];
    const double q = pt.q[i], psi = pt.psi[i];
    for (Eigen::Index l = 0; l < d; ++l) {
      const auto k = static_cast<std::size_t>(l);
      const double r = ptm.rho_tilde(i, l);
      g.CS(i, l) = -q * r;
      g.PS(i, l) = q * ((1 - s.nu) * (r - psi * er(i, l)) - s.f[k]);
      g.R(i, l) = q * (s.nu_tilde * r - s.tau_tilde * er(i, l) + s.f_tilde[k]);
      g.W(i, l) = q * ((s.nu_tilde - s.nu) * r - (s.tau_tilde + psi * (1 - s.nu)) * er(i, l) + s.f_tilde[k] - s.f[k]);
    }
  }
  g.total_CS = g.CS.colwise().sum().transpose();
  g.total_PS = g.PS.colwise().sum().transpose();
  g.total_R = g.R.colwise().sum().transpose();
  g.total_W = g.W.colwise().sum().transpose();
  return g;
}

HeteroRatios hetero_welfare_ratios(const HeteroPoint& pt, const PassThroughMatrix& ptm) {
  const Eigen::Index n = pt.p.size(), d = ptm.rho_tilde.cols();
  Mat g(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index l = 0; l < d; ++l) g(i, l) = pt.sens[static_cast<std::size_t>(i)].g[static_cast<std::size_t>(l)];
  }
  return hetero_welfare_ratios(pt, ptm, g);
}

HeteroRatios hetero_welfare_ratios(const HeteroPoint& pt, const PassThroughMatrix& ptm, const Mat& g) {
  const Eigen::Index n = pt.p.size(), d = ptm.rho_tilde.cols();
  if (g.rows() != n || g.cols() != d) throw ConfigError("welfare ratios: g must be firms x dimensions");
  const Mat er = pt.eps * ptm.rho_tilde;
  HeteroRatios r;
  r.MC = Mat::Constant(n, d, kNaN);
  r.I = Mat::Constant(n, d, kNaN);
  r.SI = Mat::Constant(n, d, kNaN);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Sensitivities& s = pt.sens[static_cast<std::size_t>(i)];
    const double psi = pt.psi[i];
    for (Eigen::Index l = 0; l < d; ++l) {
      const double rt = ptm.rho_tilde(i, l), rho = ptm.rho(i, l);
      if (!std::isfinite(rho) || rt == 0) continue;
      const double e = er(i, l) / rt;  // eps_i . rho_tilde_l / rho_tilde_il
      const double inv = 1 / rho;
      const double leak = (s.nu - s.nu_tilde) + (s.tau_tilde + (1 - s.nu) * psi) * e;
      const double ps_den = inv - (1 - s.nu) * (1 - psi * e);
      r.MC(i, l) = ratio((1 - g(i, l)) * inv + leak, g(i, l) * inv + s.nu_tilde - s.tau_tilde * e).value;
      r.I(i, l) = ratio(1.0, ps_den).value;
      r.SI(i, l) = ratio(leak + (1 - g(i, l)) * inv, ps_den).value;
    }
  }
  const HeteroGradients gr = hetero_welfare_gradients(pt, ptm);
  r.total_MC.resize(d);
  r.total_I.resize(d);
  r.total_SI.resize(d);
  r.mc_within_bounds.assign(static_cast<std::size_t>(d), false);
  for (Eigen::Index l = 0; l < d; ++l) {
    r.total_MC[l] = ratio(-gr.total_W[l], gr.total_R[l]).value;
    r.total_I[l] = ratio(gr.total_CS[l], gr.total_PS[l]).value;
    r.total_SI[l] = ratio(gr.total_W[l], gr.total_PS[l]).value;
    const Vec col = r.MC.col(l);
    if (col.allFinite() && std::isfinite(r.total_MC[l])) {
      const double slack = 1e-10 * std::max(1.0, col.cwiseAbs().maxCoeff());
      r.mc_within_bounds[static_cast<std::size_t>(l)] =
          r.total_MC[l] >= col.minCoeff() - slack && r.total_MC[l] <= col.maxCoeff() + slack;
    }
  }
  return r;
}

ConductIndices conduct_index_hetero(const HeteroPoint& pt) {
  const Eigen::Index n = pt.p.size();
  ConductIndices c;
  c.theta.resize(n);
  c.theta_psi.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double num = 0, num_psi = 0, den = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Sensitivities& s = pt.sens[static_cast<std::size_t>(j)];
      num += (pt.p[j] * (1 - s.tau) - pt.mc[j]) * pt.dq_dsigma(j, i);
      num_psi += pt.psi_model[j] * (1 - s.nu) * pt.p[j] * pt.dq_dsigma(j, i);
      den += (1 - s.nu) * pt.q[j] * pt.zeta(j, i);
    }
    c.theta[i] = ratio(-num, den).value;
    c.theta_psi[i] = ratio(-num_psi, den).value;
  }
  return c;
}

SurplusChange surplus_change_via_lambda(const HeteroPoint& pt, const PassThroughMatrix& ptm, std::size_t index) {
  const Eigen::Index n = pt.p.size();
  if (static_cast<Eigen::Index>(index) >= ptm.rho_tilde.cols()) throw ConfigError("surplus change: tax index out of range");
  Eigen::PartialPivLU<Mat> lu(pt.zeta);
  SurplusChange r;
  r.lambda = lu.solve(Vec(ptm.rho_tilde.col(static_cast<Eigen::Index>(index))));
  const ConductIndices th = conduct_index_hetero(pt);
  Vec nu(n);
  for (Eigen::Index i = 0; i < n; ++i) nu[i] = pt.sens[static_cast<std::size_t>(i)].nu;
  const Vec qz = pt.zeta.transpose() * pt.q;                                   // sum_i q_i zeta_ij
  const Vec qz_hat = pt.zeta.transpose() * (pt.q.array() * (1 - nu.array())).matrix();  // sum_i (1-nu_i) q_i zeta_ij
  r.dCS = -qz.dot(r.lambda);
  r.dPS = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    r.dPS += qz_hat[j] * (1 - th.theta[j]) * r.lambda[j];
    r.dPS -= pt.q[j] * pt.sens[static_cast<std::size_t>(j)].f[index];
  }
  return r;
}

// ---------------------------------------------------------------- aggregative games

namespace {
double diff(const std::function<double(double)>& f, double x) {
  return richardson_difference(f, x, 1e-4 * std::max(1.0, std::abs(x)));
}
}  // namespace

double AggregativeGame::dp_da(int i, double A, double a) const {
  return diff([&](double x) { return price(i, A, x); }, a);
}
double AggregativeGame::dp_dA(int i, double A, double a) const {
  return diff([&](double x) { return price(i, x, a); }, A);
}
double AggregativeGame::dq_da(int i, double A, double a) const {
  return diff([&](double x) { return quantity(i, A, x); }, a);
}
double AggregativeGame::dq_dA(int i, double A, double a) const {
  return diff([&](double x) { return quantity(i, x, a); }, A);
}

LinearCournotGame::LinearCournotGame(int n, double alpha, double beta) : n_(n), alpha_(alpha), beta_(beta) {
  if (n < 1) throw ConfigError("Cournot game: at least one firm");
  if (!(alpha > 0) || !(beta > 0)) throw ConfigError("Cournot game: alpha and beta must be positive");
}

HeteroDemandPtr LinearCournotGame::as_demand() const {
  return std::make_shared<HeteroLinearDemand>(Vec::Constant(n_, alpha_), Mat::Constant(n_, n_, beta_));
}

AggregativeResult aggregative_reduction(const AggregativeGame& game, const Vec& a, const Vec& nu) {
  const int n = game.firms();
  if (a.size() != n || nu.size() != n) throw ConfigError("aggregative game: actions and nu need one entry per firm");
  const double A = a.sum();
  Vec p(n), q(n), pa(n), pA(n), qa(n), qA(n);
  for (int i = 0; i < n; ++i) {
    p[i] = game.price(i, A, a[i]);
    q[i] = game.quantity(i, A, a[i]);
    pa[i] = game.dp_da(i, A, a[i]);
    pA[i] = game.dp_dA(i, A, a[i]);
    qa[i] = game.dq_da(i, A, a[i]);
    qA[i] = game.dq_dA(i, A, a[i]);
  }
  // total derivatives of firm j's price and quantity in firm i's action
  auto dp = [&](int j, int i) { return (i == j ? pa[j] : 0.0) + pA[j]; };
  auto gamma = [&](int j, int i) { return (i == j ? qa[j] : 0.0) + qA[j]; };

  AggregativeResult r;
  r.psi.resize(n);
  for (int i = 0; i < n; ++i) {
    const double g = gamma(i, i);
    if (g == 0) throw DomainError("aggregative game: own action leaves own quantity unchanged");
    r.psi[i] = -(q[i] / p[i]) * dp(i, i) / g;
  }
  r.theta.resize(n);
  r.theta_chain.resize(n);
  r.weights.resize(n * n);
  for (int i = 0; i < n; ++i) {
    double wsum = 0, num = 0;
    for (int j = 0; j < n; ++j) wsum += (1 - nu[j]) * q[j] * dp(j, i);
    double th = 0;
    for (int j = 0; j < n; ++j) {
      const double w = ratio((1 - nu[j]) * q[j] * dp(j, i), wsum).value;
      r.weights[i * n + j] = w;
      th += w * gamma(j, i) / gamma(j, j);
      num += (1 - nu[j]) * r.psi[j] * p[j] * gamma(j, i);
    }
    r.theta[i] = th;
    r.theta_chain[i] = ratio(-num, wsum).value;
  }
  return r;
}

}  // namespace oligo
