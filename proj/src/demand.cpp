#include "oligo/demand.hpp"

#include <cmath>
#include <string>

#include "oligo/errors.hpp"
#include "oligo/numeric.hpp"

namespace oligo {

SymmetricDemand::SymmetricDemand(int n) : n_(n) {
  if (n < 1) throw ConfigError("demand: number of firms n must be at least 1");
}

void SymmetricDemand::check_price(double p) const {
  if (!std::isfinite(p) || !price_in_domain(p)) {
    throw DomainError(family() + " demand: price " + std::to_string(p) + " outside the declared domain");
  }
}

void SymmetricDemand::check_quantity(double q) const {
  if (!std::isfinite(q) || !quantity_in_domain(q)) {
    throw DomainError(family() + " demand: quantity " + std::to_string(q) + " outside the declared domain");
  }
}

DemandDiagnostics diagnostics_at(const SymmetricDemand& demand, double p) {
  demand.check_price(p);
  const DirectPartials d = demand.direct(p);
  if (!(d.q > 0)) throw DomainError("diagnostics: q(p) must be positive");
  const InversePartials iv = demand.inverse(d.q);
  const double m = demand.firms() - 1;

  DemandDiagnostics g;
  g.p = p;
  g.q = d.q;
  g.dq_dp = d.own + m * d.cross;
  g.d2q_dp2 = d.own_own + 2 * m * d.own_cross + m * d.cross_cross + m * (m - 1) * d.cross_pair;
  g.eps = -p * g.dq_dp / g.q;
  g.eps_F = -p * d.own / g.q;
  g.eps_C = m * p * d.cross / g.q;
  g.alpha_F = -p * d.own_own / d.own;
  g.alpha_C = -m * p * d.own_cross / d.own;
  g.alpha = (g.alpha_F + g.alpha_C) * g.eps_F / g.eps;
  g.alpha_industry = -p * g.d2q_dp2 / g.dq_dp;

  g.dp_dq = iv.own + m * iv.cross;
  g.d2p_dq2 = iv.own_own + 2 * m * iv.own_cross + m * iv.cross_cross + m * (m - 1) * iv.cross_pair;
  g.eta = -g.q * g.dp_dq / p;
  g.eta_F = -g.q * iv.own / p;
  g.eta_C = m * g.q * iv.cross / p;
  g.sigma_F = -g.q * iv.own_own / iv.own;
  g.sigma_C = -m * g.q * iv.own_cross / iv.own;
  g.sigma = (g.sigma_F + g.sigma_C) * g.eta_F / g.eta;
  g.sigma_industry = -g.q * g.d2p_dq2 / g.dp_dq;

  g.ms = -g.dp_dq * g.q;
  g.inv_eps_ms = 1 + g.q * g.d2p_dq2 / g.dp_dq;
  g.eps_ms = g.inv_eps_ms == 0 ? kInf : 1 / g.inv_eps_ms;
  return g;
}

IndustrySlopes direct_slopes(const SymmetricDemand& demand, double p) {
  const DirectPartials d = demand.direct(p);
  const double m = demand.firms() - 1;
  return {d.own + m * d.cross, d.own_own + 2 * m * d.own_cross + m * d.cross_cross + m * (m - 1) * d.cross_pair};
}

IndustrySlopes inverse_slopes(const SymmetricDemand& demand, double q) {
  const InversePartials d = demand.inverse(q);
  const double m = demand.firms() - 1;
  return {d.own + m * d.cross, d.own_own + 2 * m * d.own_cross + m * d.cross_cross + m * (m - 1) * d.cross_pair};
}

DemandDiagnostics diagnostics_at_quantity(const SymmetricDemand& demand, double q) {
  demand.check_quantity(q);
  return diagnostics_at(demand, demand.price(q));
}

namespace {

using VecFn = std::function<double(std::span<const double>)>;

double partial1(const VecFn& f, std::vector<double> x, std::size_t i, double h) {
  const double x0 = x[i];
  auto g = [&](double v) {
    x[i] = v;
    return f(x);
  };
  double r = richardson_difference(g, x0, h);
  return r;
}

double partial2_same(const VecFn& f, std::vector<double> x, std::size_t i, double h) {
  const double x0 = x[i];
  auto g = [&](double v) {
    x[i] = v;
    return f(x);
  };
  double a = central_second_difference(g, x0, h);
  double b = central_second_difference(g, x0, h / 2);
  return (4 * b - a) / 3;
}

double partial2_mixed(const VecFn& f, std::vector<double> x, std::size_t i, std::size_t j, double h) {
  const double xi = x[i], xj = x[j];
  auto at = [&](double di, double dj) {
    x[i] = xi + di;
    x[j] = xj + dj;
    return f(x);
  };
  auto mixed = [&](double s) { return (at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (4 * s * s); };
  return (4 * mixed(h / 2) - mixed(h)) / 3;
}

template <class Out>
Out numeric_partials(const VecFn& f, int n, double x0, double h) {
  std::vector<double> x(static_cast<std::size_t>(n), x0);
  Out o;
  if constexpr (std::is_same_v<Out, DirectPartials>) {
    o.q = f(x);
  } else {
    o.p = f(x);
  }
  o.own = partial1(f, x, 0, h);
  o.own_own = partial2_same(f, x, 0, h);
  if (n >= 2) {
    o.cross = partial1(f, x, 1, h);
    o.own_cross = partial2_mixed(f, x, 0, 1, h);
    o.cross_cross = partial2_same(f, x, 1, h);
  }
  if (n >= 3) o.cross_pair = partial2_mixed(f, x, 1, 2, h);
  return o;
}

}  // namespace

DirectPartials numeric_direct_partials(const SymmetricDemand& demand, double p, double h_rel) {
  VecFn f = [&](std::span<const double> x) { return demand.firm_quantity(x); };
  return numeric_partials<DirectPartials>(f, demand.firms(), p, h_rel * std::max(1.0, std::abs(p)));
}

InversePartials numeric_inverse_partials(const SymmetricDemand& demand, double q, double h_rel) {
  VecFn f = [&](std::span<const double> x) { return demand.firm_price(x); };
  // Relative step in q: shares and small quantities need it.
  return numeric_partials<InversePartials>(f, demand.firms(), q, h_rel * std::abs(q));
}

// ---------------------------------------------------------------- linear

LinearDemand::LinearDemand(const LinearDemandParams& params) : SymmetricDemand(params.n), prm_(params) {
  const double m = params.n - 1;
  if (!(params.b > 0)) throw ConfigError("linear demand: b must be positive");
  if (!(params.mu >= 0)) throw ConfigError("linear demand: mu must be non-negative");
  if (!(params.lambda > m * params.mu)) throw ConfigError("linear demand: requires lambda > (n-1) mu");
  slope_ = params.lambda - m * params.mu;
  const double den = (params.lambda + params.mu) * slope_;
  inv_own_ = -(params.lambda - (m - 1) * params.mu) / den;
  inv_cross_ = -params.mu / den;
}

double LinearDemand::quantity(double p) const { return prm_.b - slope_ * p; }
double LinearDemand::price(double q) const { return (prm_.b - q) / slope_; }

DirectPartials LinearDemand::direct(double p) const {
  DirectPartials d;
  d.q = quantity(p);
  d.own = -prm_.lambda;
  d.cross = firms() > 1 ? prm_.mu : 0.0;
  return d;
}

InversePartials LinearDemand::inverse(double q) const {
  InversePartials d;
  d.p = price(q);
  d.own = inv_own_;
  d.cross = firms() > 1 ? inv_cross_ : 0.0;
  return d;
}

double LinearDemand::firm_quantity(std::span<const double> prices) const {
  double rivals = 0;
  for (std::size_t k = 1; k < prices.size(); ++k) rivals += prices[k];
  return prm_.b - prm_.lambda * prices[0] + prm_.mu * rivals;
}

double LinearDemand::firm_price(std::span<const double> quantities) const {
  double rivals = 0;
  for (std::size_t k = 1; k < quantities.size(); ++k) rivals += prm_.b - quantities[k];
  return -inv_own_ * (prm_.b - quantities[0]) - inv_cross_ * rivals;
}

bool LinearDemand::price_in_domain(double p) const { return p >= 0 && p < choke_price(); }
bool LinearDemand::quantity_in_domain(double q) const { return q > 0 && q <= prm_.b; }
QuantityRange LinearDemand::quantity_range() const { return {0.0, prm_.b, true}; }
double LinearDemand::choke_price() const { return prm_.b / slope_; }

// ---------------------------------------------------------------- logit

LogitDemand::LogitDemand(const LogitDemandParams& params) : SymmetricDemand(params.n), prm_(params) {
  if (!(params.beta > 0)) throw ConfigError("logit demand: beta must be positive");
  if (!std::isfinite(params.delta)) throw ConfigError("logit demand: delta must be finite");
}

double LogitDemand::quantity(double p) const {
  // e / (1 + n e) written to avoid overflow for very low prices
  return 1.0 / (std::exp(-(prm_.delta - prm_.beta * p)) + firms());
}

double LogitDemand::price(double s) const {
  check_quantity(s);
  const double s0 = 1 - firms() * s;
  return (prm_.delta - std::log(s / s0)) / prm_.beta;
}

DirectPartials LogitDemand::direct(double p) const {
  const double s = quantity(p), b = prm_.beta, b2 = b * b;
  DirectPartials d;
  d.q = s;
  d.own = -b * s * (1 - s);
  d.own_own = b2 * s * (1 - s) * (1 - 2 * s);
  if (firms() > 1) {
    d.cross = b * s * s;
    d.own_cross = -b2 * s * s * (1 - 2 * s);
    d.cross_cross = b2 * s * s * (2 * s - 1);
    d.cross_pair = 2 * b2 * s * s * s;
  }
  return d;
}

InversePartials LogitDemand::inverse(double s) const {
  const double s0 = 1 - firms() * s, b = prm_.beta;
  InversePartials d;
  d.p = price(s);
  d.own = -(1 / s + 1 / s0) / b;
  d.own_own = (1 / (s * s) - 1 / (s0 * s0)) / b;
  if (firms() > 1) {
    d.cross = -1 / (b * s0);
    d.own_cross = -1 / (b * s0 * s0);
    d.cross_cross = -1 / (b * s0 * s0);
    d.cross_pair = -1 / (b * s0 * s0);
  }
  return d;
}

double LogitDemand::firm_quantity(std::span<const double> prices) const {
  double den = 1;
  for (double p : prices) den += std::exp(prm_.delta - prm_.beta * p);
  return std::exp(prm_.delta - prm_.beta * prices[0]) / den;
}

double LogitDemand::firm_price(std::span<const double> shares) const {
  double s0 = 1;
  for (double s : shares) s0 -= s;
  if (!(s0 > 0) || !(shares[0] > 0)) throw DomainError("logit demand: shares outside the simplex");
  return (prm_.delta - std::log(shares[0] / s0)) / prm_.beta;
}

bool LogitDemand::price_in_domain(double p) const { return std::isfinite(p); }
bool LogitDemand::quantity_in_domain(double s) const { return s > 0 && s * firms() < 1; }
QuantityRange LogitDemand::quantity_range() const { return {0.0, 1.0 / firms(), true}; }
double LogitDemand::choke_price() const { return kInf; }

double LogitDemand::table_alpha(double p) const {
  const double ns = firms() * quantity(p);
  return ((2 * ns - 3) * ns / (1 - ns)) * p;
}

double LogitDemand::table_sigma(double s) const {
  const double ns = firms() * s;
  return (1 - 2 * ns) / (1 - ns);
}

// ---------------------------------------------------------------- constant elasticity

ConstantElasticityDemand::ConstantElasticityDemand(const ConstantElasticityParams& params)
    : SymmetricDemand(params.n), prm_(params) {
  if (!(params.A > 0)) throw ConfigError("constant-elasticity demand: A must be positive");
  if (!(params.eps0 > 0)) throw ConfigError("constant-elasticity demand: eps0 must be positive");
  if (!(params.gamma > 0)) throw ConfigError("constant-elasticity demand: gamma must be positive");
  const double n = params.n;
  a_own_ = -params.eps0 / n - params.gamma * (n - 1) / n;
  a_cross_ = (params.gamma - params.eps0) / n;
  // inverse of (a_own - a_cross) I + a_cross 11'
  n_own_ = -(1 + a_cross_ / params.eps0) / params.gamma;
  n_cross_ = -(a_cross_ / params.eps0) / params.gamma;
}

double ConstantElasticityDemand::quantity(double p) const { return prm_.A * std::pow(p, -prm_.eps0); }
double ConstantElasticityDemand::price(double q) const { return std::pow(q / prm_.A, -1 / prm_.eps0); }

DirectPartials ConstantElasticityDemand::direct(double p) const {
  const double q = quantity(p), a = a_own_, c = a_cross_, p2 = p * p;
  DirectPartials d;
  d.q = q;
  d.own = q * a / p;
  d.own_own = q * (a * a - a) / p2;
  if (firms() > 1) {
    d.cross = q * c / p;
    d.own_cross = q * a * c / p2;
    d.cross_cross = q * (c * c - c) / p2;
    d.cross_pair = q * c * c / p2;
  }
  return d;
}

InversePartials ConstantElasticityDemand::inverse(double q) const {
  const double p = price(q), a = n_own_, c = n_cross_, q2 = q * q;
  InversePartials d;
  d.p = p;
  d.own = p * a / q;
  d.own_own = p * (a * a - a) / q2;
  if (firms() > 1) {
    d.cross = p * c / q;
    d.own_cross = p * a * c / q2;
    d.cross_cross = p * (c * c - c) / q2;
    d.cross_pair = p * c * c / q2;
  }
  return d;
}

double ConstantElasticityDemand::firm_quantity(std::span<const double> prices) const {
  double l = std::log(prm_.A) + a_own_ * std::log(prices[0]);
  for (std::size_t k = 1; k < prices.size(); ++k) l += a_cross_ * std::log(prices[k]);
  return std::exp(l);
}

double ConstantElasticityDemand::firm_price(std::span<const double> quantities) const {
  const double la = std::log(prm_.A);
  double l = n_own_ * (std::log(quantities[0]) - la);
  for (std::size_t k = 1; k < quantities.size(); ++k) l += n_cross_ * (std::log(quantities[k]) - la);
  return std::exp(l);
}

bool ConstantElasticityDemand::price_in_domain(double p) const { return p > 0 && std::isfinite(p); }
bool ConstantElasticityDemand::quantity_in_domain(double q) const { return q > 0 && std::isfinite(q); }

QuantityRange ConstantElasticityDemand::quantity_range() const {
  return {quantity(1e8), quantity(1e-8), false};
}

// ---------------------------------------------------------------- numeric

NumericDemand::NumericDemand(NumericDemandSpec spec) : SymmetricDemand(spec.n), spec_(std::move(spec)) {
  if (!spec_.firm_quantity || !spec_.firm_price) {
    throw ConfigError("numeric demand: both firm_quantity and firm_price are required");
  }
  if (!(spec_.range.hi > spec_.range.lo)) throw ConfigError("numeric demand: empty quantity range");
}

double NumericDemand::quantity(double p) const {
  std::vector<double> x(static_cast<std::size_t>(firms()), p);
  return spec_.firm_quantity(x);
}

double NumericDemand::price(double q) const {
  std::vector<double> x(static_cast<std::size_t>(firms()), q);
  return spec_.firm_price(x);
}

DirectPartials NumericDemand::direct(double p) const { return numeric_direct_partials(*this, p); }
InversePartials NumericDemand::inverse(double q) const { return numeric_inverse_partials(*this, q); }

double NumericDemand::firm_quantity(std::span<const double> prices) const { return spec_.firm_quantity(prices); }
double NumericDemand::firm_price(std::span<const double> quantities) const { return spec_.firm_price(quantities); }

bool NumericDemand::price_in_domain(double p) const { return p > spec_.p_lo && p < spec_.p_hi; }

bool NumericDemand::quantity_in_domain(double q) const {
  if (!(q > 0)) return false;
  return spec_.range.bounded_above ? q < spec_.range.hi : true;
}

// ---------------------------------------------------------------- factories

std::shared_ptr<LinearDemand> linear_demand(const LinearDemandParams& params) {
  return std::make_shared<LinearDemand>(params);
}

std::shared_ptr<LogitDemand> logit_demand(const LogitDemandParams& params) {
  return std::make_shared<LogitDemand>(params);
}

std::shared_ptr<ConstantElasticityDemand> constant_elasticity_demand(const ConstantElasticityParams& params) {
  return std::make_shared<ConstantElasticityDemand>(params);
}

// ---------------------------------------------------------------- multi-product

MultiProductAggregates multiproduct_aggregate(const MultiProductPartials& x, int n, int n_p) {
  if (n < 1 || n_p < 1) throw ConfigError("multiproduct: n and n_p must be at least 1");
  if (x.q == 0) throw DomainError("multiproduct: q must be nonzero");
  const double m = n - 1, k = n_p - 1;
  MultiProductAggregates a;
  a.eps_F = -(x.p / x.q) * (x.x1 + k * x.x01);
  a.eps = -(x.p / x.q) * (x.x1 + k * x.x01 + m * x.r1 + m * k * x.r01);
  const double pre = x.p * x.p / (x.q * a.eps_F);
  // a uniform change of the firm's own prices moves own slope through every
  // ordered pair of its products, so the sibling-mixed term counts twice
  a.alpha_F = pre * (x.x2 + k * (2 * x.x11 + x.x02 + (k - 1) * x.x011));
  a.alpha_C = m * pre * (x.r2 + k * (x.r11 + x.r02 + x.r_sib + (k - 1) * x.r011));
  return a;
}

MultiProductInverseAggregates multiproduct_aggregate_inverse(const MultiProductPartials& z, int n, int n_p) {
  if (z.p == 0) throw DomainError("multiproduct: p must be nonzero");
  // identical algebra with the roles of p and q exchanged
  MultiProductPartials swapped = z;
  swapped.p = z.q;
  swapped.q = z.p;
  const MultiProductAggregates a = multiproduct_aggregate(swapped, n, n_p);
  return {a.eps_F, a.eps, a.alpha_F, a.alpha_C};
}

}  // namespace oligo
