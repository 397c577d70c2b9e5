#include "oligo/market.hpp"

#include <algorithm>
#include <cmath>

#include "oligo/errors.hpp"

namespace oligo {

// ---------------------------------------------------------------- costs

double CostFunction::chi(double q) const {
  const double m = mc(q), d = mc_prime(q);
  if (d == 0) return 0;
  if (m == 0) return kNaN;
  return q * d / m;
}

ConstantMarginalCost::ConstantMarginalCost(double m, double fixed) : m_(m), fixed_(fixed) {
  if (!std::isfinite(m) || !std::isfinite(fixed)) throw ConfigError("cost: constant marginal cost must be finite");
}

LinearMarginalCost::LinearMarginalCost(double m0, double m1, double fixed) : m0_(m0), m1_(m1), fixed_(fixed) {
  if (!std::isfinite(m0) || !std::isfinite(m1) || !std::isfinite(fixed)) {
    throw ConfigError("cost: linear marginal cost coefficients must be finite");
  }
}

PowerCost::PowerCost(double k, double gamma) : k_(k), gamma_(gamma) {
  if (!(k > 0)) throw ConfigError("cost: power cost scale k must be positive");
  if (!(gamma >= 1)) throw ConfigError("cost: power cost exponent must be at least 1");
}

double PowerCost::cost(double q) const { return k_ * std::pow(q, gamma_); }
double PowerCost::mc(double q) const { return k_ * gamma_ * std::pow(q, gamma_ - 1); }
double PowerCost::mc_prime(double q) const {
  if (gamma_ == 1) return 0;
  return k_ * gamma_ * (gamma_ - 1) * std::pow(q, gamma_ - 2);
}

CustomCost::CustomCost(std::function<double(double)> cost, std::function<double(double)> mc)
    : cost_(std::move(cost)), mc_(std::move(mc)) {
  if (!cost_ || !mc_) throw ConfigError("cost: custom cost needs both c(q) and mc(q)");
}

double CustomCost::mc_prime(double q) const {
  return richardson_difference(mc_, q, 1e-4 * std::max(std::abs(q), 1e-8));
}

CostPtr constant_cost(double m, double fixed) { return std::make_shared<ConstantMarginalCost>(m, fixed); }

// ---------------------------------------------------------------- conduct

ConductModel ConductModel::constant(double theta0) {
  if (!std::isfinite(theta0) || theta0 < 0) throw ConfigError("conduct: theta must be finite and non-negative");
  ConductModel c;
  c.kind_ = ConductKind::constant_theta;
  c.theta0_ = theta0;
  return c;
}

ConductModel ConductModel::price_competition() {
  ConductModel c;
  c.kind_ = ConductKind::price;
  return c;
}

ConductModel ConductModel::quantity_competition() {
  ConductModel c;
  c.kind_ = ConductKind::quantity;
  return c;
}

ConductModel ConductModel::user(std::function<double(double)> theta, std::function<double(double)> theta_prime) {
  if (!theta || !theta_prime) throw ConfigError("conduct: user conduct needs theta(q) and theta'(q)");
  ConductModel c;
  c.kind_ = ConductKind::user;
  c.theta_ = std::move(theta);
  c.theta_prime_ = std::move(theta_prime);
  return c;
}

std::string ConductModel::name() const {
  switch (kind_) {
    case ConductKind::constant_theta: return "constant_theta";
    case ConductKind::price: return "price";
    case ConductKind::quantity: return "quantity";
    case ConductKind::user: return "user";
  }
  return "unknown";
}

double ConductModel::markup(const SymmetricDemand& demand, double q) const {
  switch (kind_) {
    case ConductKind::price: {
      const DirectPartials d = demand.direct(demand.price(q));
      return -q / d.own;
    }
    case ConductKind::quantity:
      return -q * demand.inverse(q).own;
    case ConductKind::constant_theta:
      return -theta0_ * q * inverse_slopes(demand, q).first;
    case ConductKind::user:
      return -theta_(q) * q * inverse_slopes(demand, q).first;
  }
  return kNaN;
}

ConductValues ConductModel::evaluate(const SymmetricDemand&, const DemandDiagnostics& g) const {
  ConductValues v;
  // q eta'/eta along the symmetric diagonal
  const double eta_log_slope = 1 - g.sigma_industry + g.eta;
  switch (kind_) {
    case ConductKind::price:
      v.theta = g.eps / g.eps_F;
      v.omega = (1 + g.eps - g.alpha_F - g.alpha_C) / g.eps;
      v.theta_log_slope = v.omega - eta_log_slope;
      break;
    case ConductKind::quantity:
      v.theta = g.eta_F / g.eta;
      v.omega = 1 + g.eta - g.sigma_F - g.sigma_C;
      v.theta_log_slope = v.omega - eta_log_slope;
      break;
    case ConductKind::constant_theta:
      v.theta = theta0_;
      v.omega = eta_log_slope;
      v.theta_log_slope = 0;
      break;
    case ConductKind::user: {
      v.theta = theta_(g.q);
      v.theta_log_slope = v.theta == 0 ? 0 : g.q * theta_prime_(g.q) / v.theta;
      v.omega = v.theta_log_slope + eta_log_slope;
      break;
    }
  }
  return v;
}

double omega_numeric(const SymmetricDemand& demand, const ConductModel& conduct, double q, double h_rel) {
  auto log_eta_theta = [&](double x) { return std::log(conduct.markup(demand, x) / demand.price(x)); };
  auto in_log_q = [&](double s) { return log_eta_theta(q * std::exp(s)); };
  return richardson_difference(in_log_q, 0.0, h_rel);
}

// ---------------------------------------------------------------- schemes

namespace {

double take(std::span<const double> T, std::size_t i) { return i < T.size() ? T[i] : 0.0; }

void require_size(const TaxScheme& s, std::span<const double> T) {
  if (T.size() != s.dim()) {
    throw ConfigError(s.name() + ": expected " + std::to_string(s.dim()) + " tax values, got " +
                      std::to_string(T.size()));
  }
}

void require_v_below_one(const TaxScheme& s, std::span<const double> T) {
  const double v = take(T, 1);
  if (!std::isfinite(v) || v >= 1) throw ConfigError(s.name() + ": ad valorem rate v must be below 1");
  for (double x : T) {
    if (!std::isfinite(x)) throw ConfigError(s.name() + ": tax values must be finite");
  }
}

SchemePartials with_size(std::size_t d) {
  SchemePartials o;
  o.phi_T.assign(d, 0);
  o.phi_pT.assign(d, 0);
  o.phi_qT.assign(d, 0);
  o.phi_tilde_T.assign(d, 0);
  return o;
}

}  // namespace

void TaxScheme::check_point(double p, double q, std::span<const double>) const {
  if (!(p > 0) || !(q > 0)) throw DomainError(name() + ": p and q must be positive");
}

void TaxScheme::check_taxes(std::span<const double> T) const { require_size(*this, T); }

std::size_t TaxScheme::index_of(const std::string& dimension) const {
  const auto dims = dimensions();
  const auto it = std::find(dims.begin(), dims.end(), dimension);
  if (it == dims.end()) throw ConfigError(name() + ": no tax dimension named '" + dimension + "'");
  return static_cast<std::size_t>(it - dims.begin());
}

SchemePartials TaxScheme::partials(double p, double q, std::span<const double> T) const {
  return numeric_scheme_partials(*this, p, q, T);
}

SchemePartials numeric_scheme_partials(const TaxScheme& s, double p, double q, std::span<const double> T,
                                       double h_rel) {
  const std::size_t d = T.size();
  std::vector<double> x(T.begin(), T.end());
  SchemePartials o = with_size(d);
  const double hp = h_rel * std::abs(p), hq = h_rel * std::abs(q);

  auto phi_at = [&](double pp, double qq) { return s.phi(pp, qq, x); };
  auto rich2 = [](auto&& f, double h) {
    const double a = f(h), b = f(h / 2);
    return (4 * b - a) / 3;
  };

  o.phi = s.phi(p, q, x);
  o.phi_tilde = s.phi_tilde(p, q, x);
  o.phi_p = rich2([&](double h) { return (phi_at(p + h, q) - phi_at(p - h, q)) / (2 * h); }, hp);
  o.phi_q = rich2([&](double h) { return (phi_at(p, q + h) - phi_at(p, q - h)) / (2 * h); }, hq);
  o.phi_pp = rich2([&](double h) { return (phi_at(p + h, q) - 2 * o.phi + phi_at(p - h, q)) / (h * h); }, hp);
  o.phi_qq = rich2([&](double h) { return (phi_at(p, q + h) - 2 * o.phi + phi_at(p, q - h)) / (h * h); }, hq);
  o.phi_pq = rich2(
      [&](double h) {
        const double k = h * hq / hp;
        return (phi_at(p + h, q + k) - phi_at(p + h, q - k) - phi_at(p - h, q + k) + phi_at(p - h, q - k)) /
               (4 * h * k);
      },
      hp);
  o.phi_tilde_p =
      rich2([&](double h) { return (s.phi_tilde(p + h, q, x) - s.phi_tilde(p - h, q, x)) / (2 * h); }, hp);
  o.phi_tilde_q =
      rich2([&](double h) { return (s.phi_tilde(p, q + h, x) - s.phi_tilde(p, q - h, x)) / (2 * h); }, hq);

  for (std::size_t l = 0; l < d; ++l) {
    const double t0 = x[l];
    const double ht = h_rel * std::max(1.0, std::abs(t0));
    auto at = [&](double dt, auto&& f) {
      x[l] = t0 + dt;
      const double r = f();
      x[l] = t0;
      return r;
    };
    o.phi_T[l] = rich2(
        [&](double h) { return (at(h, [&] { return s.phi(p, q, x); }) - at(-h, [&] { return s.phi(p, q, x); })) / (2 * h); },
        ht);
    o.phi_tilde_T[l] = rich2(
        [&](double h) {
          return (at(h, [&] { return s.phi_tilde(p, q, x); }) - at(-h, [&] { return s.phi_tilde(p, q, x); })) /
                 (2 * h);
        },
        ht);
    auto dphi_dp = [&] { return (s.phi(p + hp, q, x) - s.phi(p - hp, q, x)) / (2 * hp); };
    auto dphi_dq = [&] { return (s.phi(p, q + hq, x) - s.phi(p, q - hq, x)) / (2 * hq); };
    o.phi_pT[l] = (at(ht, dphi_dp) - at(-ht, dphi_dp)) / (2 * ht);
    o.phi_qT[l] = (at(ht, dphi_dq) - at(-ht, dphi_dq)) / (2 * ht);
  }
  return o;
}

// unit + ad valorem

double UnitAdValorem::phi(double p, double q, std::span<const double> T) const {
  return take(T, 0) * q + take(T, 1) * p * q;
}

SchemePartials UnitAdValorem::partials(double p, double q, std::span<const double> T) const {
  const double t = take(T, 0), v = take(T, 1);
  SchemePartials o = with_size(2);
  o.phi = o.phi_tilde = t * q + v * p * q;
  o.phi_p = o.phi_tilde_p = v * q;
  o.phi_q = o.phi_tilde_q = t + v * p;
  o.phi_pq = v;
  o.phi_T = o.phi_tilde_T = {q, p * q};
  o.phi_pT = {0, q};
  o.phi_qT = {1, p};
  return o;
}

void UnitAdValorem::check_taxes(std::span<const double> T) const {
  require_size(*this, T);
  require_v_below_one(*this, T);
}

// exogenous competition

ExogenousCompetition::ExogenousCompetition(CostPtr cost) : cost_(std::move(cost)) {
  if (!cost_) throw ConfigError("exogenous_competition: a cost function is required");
}

double ExogenousCompetition::phi(double p, double q, std::span<const double> T) const {
  const double t = take(T, 0), v = take(T, 1), qx = take(T, 2), y = q - qx;
  return cost_->cost(y) + v * y * p + (1 - v) * qx * p + t * y - cost_->cost(q);
}

SchemePartials ExogenousCompetition::partials(double p, double q, std::span<const double> T) const {
  const double t = take(T, 0), v = take(T, 1), qx = take(T, 2), y = q - qx;
  SchemePartials o = with_size(3);
  o.phi = o.phi_tilde = phi(p, q, T);
  o.phi_p = o.phi_tilde_p = v * y + (1 - v) * qx;
  o.phi_q = o.phi_tilde_q = cost_->mc(y) + v * p + t - cost_->mc(q);
  o.phi_qq = cost_->mc_prime(y) - cost_->mc_prime(q);
  o.phi_pq = v;
  o.phi_T = o.phi_tilde_T = {y, (q - 2 * qx) * p, -cost_->mc(y) + (1 - 2 * v) * p - t};
  o.phi_pT = {0, y - qx, 1 - 2 * v};
  o.phi_qT = {1, p, -cost_->mc_prime(y)};
  return o;
}

void ExogenousCompetition::check_point(double p, double q, std::span<const double> T) const {
  TaxScheme::check_point(p, q, T);
  if (!(q > take(T, 2))) throw DomainError("exogenous_competition: requires q > q_exo");
}

void ExogenousCompetition::check_taxes(std::span<const double> T) const {
  require_size(*this, T);
  require_v_below_one(*this, T);
  if (T[2] < 0) throw ConfigError("exogenous_competition: q_exo must be non-negative");
}

// sales restriction

SalesRestriction::SalesRestriction(DemandPtr demand) : demand_(std::move(demand)) {
  if (!demand_) throw ConfigError("sales_restriction: a demand system is required");
}

double SalesRestriction::h(double q, double kappa) const {
  return 1 - demand_->price((1 + kappa) * q) / demand_->price(q);
}

double SalesRestriction::phi(double p, double q, std::span<const double> T) const {
  const double t = take(T, 0), v = take(T, 1), k = take(T, 2);
  return (1 - (1 - v) * (1 - h(q, k))) * p * q + t * q;
}

double SalesRestriction::phi_tilde(double p, double q, std::span<const double> T) const {
  return take(T, 0) * q + take(T, 1) * p * q;
}

SchemePartials SalesRestriction::partials(double p, double q, std::span<const double> T) const {
  const double t = take(T, 0), v = take(T, 1), k = take(T, 2), K = 1 + k;
  const double P = demand_->price(q), PK = demand_->price(K * q);
  const IndustrySlopes s = inverse_slopes(*demand_, q), sK = inverse_slopes(*demand_, K * q);
  // r = p(Kq)/p(q) = 1 - h; derivatives through log p
  const double L1 = s.first / P, L1K = sK.first / PK;
  const double L2 = s.second / P - L1 * L1, L2K = sK.second / PK - L1K * L1K;
  const double r = PK / P;
  const double a = K * L1K - L1;        // (log r)'
  const double b = K * K * L2K - L2;    // (log r)''
  const double r1 = r * a, r2 = r * (a * a + b);
  const double r_k = r * q * L1K;                 // dr/dkappa
  const double a_k = L1K + K * q * L2K;           // d(log r)'/dkappa
  const double r1_k = r_k * a + r * a_k;          // dr'/dkappa
  const double w = 1 - (1 - v) * r;

  SchemePartials o = with_size(3);
  o.phi = w * p * q + t * q;
  o.phi_p = w * q;
  o.phi_q = w * p - (1 - v) * r1 * p * q + t;
  o.phi_qq = -2 * (1 - v) * r1 * p - (1 - v) * r2 * p * q;
  o.phi_pq = w - (1 - v) * r1 * q;
  o.phi_T = {q, r * p * q, -(1 - v) * r_k * p * q};
  o.phi_pT = {0, r * q, -(1 - v) * r_k * q};
  o.phi_qT = {1, r * p + r1 * p * q, -(1 - v) * (r_k * p + r1_k * p * q)};
  o.phi_tilde = t * q + v * p * q;
  o.phi_tilde_p = v * q;
  o.phi_tilde_q = t + v * p;
  o.phi_tilde_T = {q, p * q, 0};
  return o;
}

void SalesRestriction::check_point(double p, double q, std::span<const double> T) const {
  TaxScheme::check_point(p, q, T);
  if (!demand_->quantity_in_domain((1 + take(T, 2)) * q)) {
    throw DomainError("sales_restriction: (1 + kappa_r) q outside the demand domain");
  }
}

void SalesRestriction::check_taxes(std::span<const double> T) const {
  require_size(*this, T);
  require_v_below_one(*this, T);
  if (T[2] < 0) throw ConfigError("sales_restriction: kappa_r must be non-negative");
}

// evasion

TaxEvasion::TaxEvasion(double zeta_c, double xi_c, std::function<double(double)> enforcement_cost)
    : zeta_(zeta_c), xi_(xi_c), enforcement_(std::move(enforcement_cost)) {
  if (!std::isfinite(zeta_c) || !std::isfinite(xi_c)) throw ConfigError("evasion: exponents must be finite");
}

double TaxEvasion::phi(double p, double q, std::span<const double> T) const {
  const double t = take(T, 0), v = take(T, 1), lam = take(T, 2);
  return t * q + p * q * v - lam * v * v * std::pow(p, zeta_) * std::pow(q, 1 + xi_);
}

double TaxEvasion::phi_tilde(double p, double q, std::span<const double> T) const {
  const double t = take(T, 0), v = take(T, 1), lam = take(T, 2);
  return t * q + p * q * v - 2 * lam * v * v * std::pow(p, zeta_) * std::pow(q, 1 + xi_);
}

double TaxEvasion::reported_price(double p, double q, std::span<const double> T) const {
  return p - 2 * take(T, 2) * take(T, 1) * std::pow(p, zeta_) * std::pow(q, xi_);
}

SchemePartials TaxEvasion::partials(double p, double q, std::span<const double> T) const {
  const double t = take(T, 0), v = take(T, 1), lam = take(T, 2);
  const double base = std::pow(p, zeta_) * std::pow(q, 1 + xi_);
  const double E = lam * v * v * base;
  const double E_p = zeta_ * E / p, E_q = (1 + xi_) * E / q;
  const double E_v = 2 * lam * v * base, E_l = v * v * base;
  SchemePartials o = with_size(3);
  o.phi = t * q + p * q * v - E;
  o.phi_p = v * q - E_p;
  o.phi_q = t + v * p - E_q;
  o.phi_pp = -zeta_ * (zeta_ - 1) * E / (p * p);
  o.phi_qq = -(1 + xi_) * xi_ * E / (q * q);
  o.phi_pq = v - zeta_ * (1 + xi_) * E / (p * q);
  o.phi_T = {q, p * q - E_v, -E_l};
  o.phi_pT = {0, q - zeta_ * E_v / p, -zeta_ * E_l / p};
  o.phi_qT = {1, p - (1 + xi_) * E_v / q, -(1 + xi_) * E_l / q};
  o.phi_tilde = t * q + p * q * v - 2 * E;
  o.phi_tilde_p = v * q - 2 * E_p;
  o.phi_tilde_q = t + v * p - 2 * E_q;
  o.phi_tilde_T = {q, p * q - 2 * E_v, -2 * E_l};
  return o;
}

void TaxEvasion::check_point(double p, double q, std::span<const double> T) const {
  TaxScheme::check_point(p, q, T);
  if (!(reported_price(p, q, T) > 0)) throw DomainError("evasion: concealment exceeds the price");
}

void TaxEvasion::check_taxes(std::span<const double> T) const {
  require_size(*this, T);
  require_v_below_one(*this, T);
  if (T[2] < 0) throw ConfigError("evasion: lam_c must be non-negative");
}

double TaxEvasion::external_cost(std::span<const double> T) const {
  return enforcement_ ? enforcement_(take(T, 2)) : 0.0;
}

// cost shift

double CostShift::phi(double p, double q, std::span<const double> T) const {
  return take(T, 0) * q + take(T, 1) * p * q + take(T, 2) * q;
}

double CostShift::phi_tilde(double p, double q, std::span<const double> T) const {
  return take(T, 0) * q + take(T, 1) * p * q;
}

SchemePartials CostShift::partials(double p, double q, std::span<const double> T) const {
  const double t = take(T, 0), v = take(T, 1), z = take(T, 2);
  SchemePartials o = with_size(3);
  o.phi = (t + z) * q + v * p * q;
  o.phi_p = v * q;
  o.phi_q = t + z + v * p;
  o.phi_pq = v;
  o.phi_T = {q, p * q, q};
  o.phi_pT = {0, q, 0};
  o.phi_qT = {1, p, 1};
  o.phi_tilde = t * q + v * p * q;
  o.phi_tilde_p = v * q;
  o.phi_tilde_q = t + v * p;
  o.phi_tilde_T = {q, p * q, 0};
  return o;
}

void CostShift::check_taxes(std::span<const double> T) const {
  require_size(*this, T);
  require_v_below_one(*this, T);
}

// overlay

MarginalTaxOverlay::MarginalTaxOverlay(SchemePtr base) : base_(std::move(base)) {
  if (!base_) throw ConfigError("marginal tax overlay: base scheme required");
}

std::vector<std::string> MarginalTaxOverlay::dimensions() const {
  auto d = base_->dimensions();
  d.push_back("dt");
  d.push_back("dv");
  return d;
}

double MarginalTaxOverlay::phi(double p, double q, std::span<const double> T) const {
  const std::size_t k = base_->dim();
  return base_->phi(p, q, T.first(k)) + take(T, k) * q + take(T, k + 1) * p * q;
}

double MarginalTaxOverlay::phi_tilde(double p, double q, std::span<const double> T) const {
  const std::size_t k = base_->dim();
  return base_->phi_tilde(p, q, T.first(k)) + take(T, k) * q + take(T, k + 1) * p * q;
}

SchemePartials MarginalTaxOverlay::partials(double p, double q, std::span<const double> T) const {
  const std::size_t k = base_->dim();
  const double dt = take(T, k), dv = take(T, k + 1);
  SchemePartials o = base_->partials(p, q, T.first(k));
  o.phi += dt * q + dv * p * q;
  o.phi_tilde += dt * q + dv * p * q;
  o.phi_p += dv * q;
  o.phi_tilde_p += dv * q;
  o.phi_q += dt + dv * p;
  o.phi_tilde_q += dt + dv * p;
  o.phi_pq += dv;
  o.phi_T.insert(o.phi_T.end(), {q, p * q});
  o.phi_tilde_T.insert(o.phi_tilde_T.end(), {q, p * q});
  o.phi_pT.insert(o.phi_pT.end(), {0, q});
  o.phi_qT.insert(o.phi_qT.end(), {1, p});
  return o;
}

void MarginalTaxOverlay::check_point(double p, double q, std::span<const double> T) const {
  base_->check_point(p, q, T.first(base_->dim()));
}

void MarginalTaxOverlay::check_taxes(std::span<const double> T) const {
  require_size(*this, T);
  base_->check_taxes(T.first(base_->dim()));
  const double v_total = take(T, 1) + take(T, base_->dim() + 1);
  if (v_total >= 1) throw ConfigError(name() + ": combined ad valorem rate must be below 1");
}

double MarginalTaxOverlay::external_cost(std::span<const double> T) const {
  return base_->external_cost(T.first(base_->dim()));
}

SchemePtr scheme_unit_adval() { return std::make_shared<UnitAdValorem>(); }
SchemePtr scheme_exogenous_competition(CostPtr cost) { return std::make_shared<ExogenousCompetition>(std::move(cost)); }
SchemePtr scheme_sales_restriction(DemandPtr demand) { return std::make_shared<SalesRestriction>(std::move(demand)); }
SchemePtr scheme_tax_evasion(double zeta_c, double xi_c, std::function<double(double)> enforcement_cost) {
  return std::make_shared<TaxEvasion>(zeta_c, xi_c, std::move(enforcement_cost));
}
SchemePtr scheme_cost_shift() { return std::make_shared<CostShift>(); }
SchemePtr with_marginal_taxes(SchemePtr base) { return std::make_shared<MarginalTaxOverlay>(std::move(base)); }

ExchangeRateTaxes exchange_rate_taxes(double t, double v, double a, double e) {
  const double d = 1 + a * e;
  if (!(d > 0)) throw DomainError("exchange rate: requires 1 + a e > 0");
  ExchangeRateTaxes x;
  x.t_eff = t / d;
  x.v_eff = (v + a * e) / d;
  x.dt_de = -a * t / (d * d);
  // d/de of (v + a e)/(1 + a e); the shorter (a - v)/(1 + a e)^2 misses a
  // v (1 - a) term and would not vanish at a = 0
  x.dv_de = a * (1 - v) / (d * d);
  return x;
}

// ---------------------------------------------------------------- sensitivities

Sensitivities sensitivities_from(const SchemePartials& d, double p, double q) {
  Sensitivities s;
  s.nu = d.phi_p / q;
  s.tau = d.phi_q / p;
  s.nu2 = (p / q) * d.phi_pp;
  s.tau2 = (q / p) * d.phi_qq;
  s.kappa = d.phi_pq;
  s.nu_tilde = d.phi_tilde_p / q;
  s.tau_tilde = d.phi_tilde_q / p;
  const std::size_t n = d.phi_T.size();
  s.f.resize(n);
  s.f_tilde.resize(n);
  s.g.resize(n);
  s.dtau_dT.resize(n);
  s.dnu_dT.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    s.f[l] = d.phi_T[l] / q;
    s.f_tilde[l] = d.phi_tilde_T[l] / q;
    s.g[l] = ratio(s.f_tilde[l], s.f[l]).value;
    s.dtau_dT[l] = d.phi_qT[l] / p;
    s.dnu_dT[l] = d.phi_pT[l] / q;
  }
  return s;
}

Sensitivities sensitivities_at(const TaxScheme& scheme, double p, double q, std::span<const double> T) {
  if (!(p > 0) || !(q > 0)) throw DomainError("sensitivities: p and q must be positive");
  return sensitivities_from(scheme.partials(p, q, T), p, q);
}

}  // namespace oligo
