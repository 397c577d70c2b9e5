#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "oligo/demand.hpp"
#include "oligo/numeric.hpp"

namespace oligo {

// ---------------------------------------------------------------- costs

class CostFunction {
 public:
  virtual ~CostFunction() = default;
  virtual std::string kind() const = 0;
  virtual double cost(double q) const = 0;
  virtual double mc(double q) const = 0;
  virtual double mc_prime(double q) const = 0;
  // q mc'(q) / mc(q); zero when mc is constant, NaN when mc = 0 and mc' != 0
  double chi(double q) const;
};

using CostPtr = std::shared_ptr<const CostFunction>;

// c(q) = fixed + m q
class ConstantMarginalCost final : public CostFunction {
 public:
  explicit ConstantMarginalCost(double m, double fixed = 0);
  std::string kind() const override { return "constant"; }
  double cost(double q) const override { return fixed_ + m_ * q; }
  double mc(double) const override { return m_; }
  double mc_prime(double) const override { return 0; }

 private:
  double m_, fixed_;
};

// mc(q) = m0 + m1 q
class LinearMarginalCost final : public CostFunction {
 public:
  LinearMarginalCost(double m0, double m1, double fixed = 0);
  std::string kind() const override { return "linear_mc"; }
  double cost(double q) const override { return fixed_ + m0_ * q + 0.5 * m1_ * q * q; }
  double mc(double q) const override { return m0_ + m1_ * q; }
  double mc_prime(double) const override { return m1_; }

 private:
  double m0_, m1_, fixed_;
};

// c(q) = k q^gamma, so chi = gamma - 1
class PowerCost final : public CostFunction {
 public:
  PowerCost(double k, double gamma);
  std::string kind() const override { return "power"; }
  double cost(double q) const override;
  double mc(double q) const override;
  double mc_prime(double q) const override;

 private:
  double k_, gamma_;
};

// User-supplied c and mc; mc' by Richardson central differences.
class CustomCost final : public CostFunction {
 public:
  CustomCost(std::function<double(double)> cost, std::function<double(double)> mc);
  std::string kind() const override { return "custom"; }
  double cost(double q) const override { return cost_(q); }
  double mc(double q) const override { return mc_(q); }
  double mc_prime(double q) const override;

 private:
  std::function<double(double)> cost_, mc_;
};

CostPtr constant_cost(double m, double fixed = 0);

// ---------------------------------------------------------------- conduct

enum class ConductKind { constant_theta, price, quantity, user };

struct ConductValues {
  double theta = 0;
  double omega = 0;          // q (eta theta)' / (eta theta)
  double theta_log_slope = 0;  // q theta' / theta
};

class ConductModel {
 public:
  static ConductModel constant(double theta0);
  static ConductModel price_competition();
  static ConductModel quantity_competition();
  // theta(q) and theta'(q) supplied by the caller
  static ConductModel user(std::function<double(double)> theta, std::function<double(double)> theta_prime);

  ConductKind kind() const { return kind_; }
  std::string name() const;
  double theta0() const { return theta0_; }

  // eta theta p at symmetric quantity q, written without dividing by the
  // own-price slope so it stays finite wherever the partials are.
  double markup(const SymmetricDemand& demand, double q) const;
  ConductValues evaluate(const SymmetricDemand& demand, const DemandDiagnostics& diag) const;

 private:
  ConductKind kind_ = ConductKind::constant_theta;
  double theta0_ = 1;
  std::function<double(double)> theta_, theta_prime_;
};

// omega by a central difference of eta(q) theta(q); used to check the
// analytic values above.
double omega_numeric(const SymmetricDemand& demand, const ConductModel& conduct, double q, double h_rel = 1e-5);

// ---------------------------------------------------------------- schemes

// phi is the firm's extra cost, phi_tilde the government's receipts.
struct SchemePartials {
  double phi = 0, phi_p = 0, phi_q = 0, phi_pp = 0, phi_qq = 0, phi_pq = 0;
  double phi_tilde = 0, phi_tilde_p = 0, phi_tilde_q = 0;
  std::vector<double> phi_T, phi_pT, phi_qT, phi_tilde_T;
};

class TaxScheme {
 public:
  virtual ~TaxScheme() = default;
  virtual std::string name() const = 0;
  virtual std::vector<std::string> dimensions() const = 0;
  std::size_t dim() const { return dimensions().size(); }

  virtual double phi(double p, double q, std::span<const double> T) const = 0;
  virtual double phi_tilde(double p, double q, std::span<const double> T) const = 0;
  // Analytic partials where available; the default differentiates phi and
  // phi_tilde numerically.
  virtual SchemePartials partials(double p, double q, std::span<const double> T) const;
  // Throws DomainError when (p, q, T) is outside the scheme's support.
  virtual void check_point(double p, double q, std::span<const double> T) const;
  // Throws ConfigError for a bad tax vector.
  virtual void check_taxes(std::span<const double> T) const;
  // Extra social cost outside the firm/government ledger (e.g. enforcement).
  virtual double external_cost(std::span<const double>) const { return 0; }

  std::size_t index_of(const std::string& dimension) const;
};

using SchemePtr = std::shared_ptr<const TaxScheme>;

SchemePartials numeric_scheme_partials(const TaxScheme& scheme, double p, double q, std::span<const double> T,
                                       double h_rel = 1e-4);

// phi = t q + v p q; T = (t, v)
class UnitAdValorem final : public TaxScheme {
 public:
  std::string name() const override { return "unit_adval"; }
  std::vector<std::string> dimensions() const override { return {"t", "v"}; }
  double phi(double p, double q, std::span<const double> T) const override;
  double phi_tilde(double p, double q, std::span<const double> T) const override { return phi(p, q, T); }
  SchemePartials partials(double p, double q, std::span<const double> T) const override;
  void check_taxes(std::span<const double> T) const override;
};

// Rivals supply q_exo units outside the firm's control. T = (t, v, q_exo).
class ExogenousCompetition final : public TaxScheme {
 public:
  explicit ExogenousCompetition(CostPtr cost);
  std::string name() const override { return "exogenous_competition"; }
  std::vector<std::string> dimensions() const override { return {"t", "v", "q_exo"}; }
  double phi(double p, double q, std::span<const double> T) const override;
  double phi_tilde(double p, double q, std::span<const double> T) const override { return phi(p, q, T); }
  SchemePartials partials(double p, double q, std::span<const double> T) const override;
  void check_point(double p, double q, std::span<const double> T) const override;
  void check_taxes(std::span<const double> T) const override;

 private:
  CostPtr cost_;
};

// The firm loses a share of customers: selling q only earns the price at
// (1 + kappa_r) q. T = (t, v, kappa_r). The loss is not government revenue.
class SalesRestriction final : public TaxScheme {
 public:
  explicit SalesRestriction(DemandPtr demand);
  std::string name() const override { return "sales_restriction"; }
  std::vector<std::string> dimensions() const override { return {"t", "v", "kappa_r"}; }
  double phi(double p, double q, std::span<const double> T) const override;
  double phi_tilde(double p, double q, std::span<const double> T) const override;
  SchemePartials partials(double p, double q, std::span<const double> T) const override;
  void check_point(double p, double q, std::span<const double> T) const override;
  void check_taxes(std::span<const double> T) const override;

  // Proportional price loss 1 - p((1+kappa) q)/p(q).
  double h(double q, double kappa) const;

 private:
  DemandPtr demand_;
};

// Concealment of ad valorem revenue at cost lam_c v^2 p^zeta q^(1+xi).
// T = (t, v, lam_c).
class TaxEvasion final : public TaxScheme {
 public:
  TaxEvasion(double zeta_c, double xi_c, std::function<double(double)> enforcement_cost = {});
  std::string name() const override { return "evasion"; }
  std::vector<std::string> dimensions() const override { return {"t", "v", "lam_c"}; }
  double phi(double p, double q, std::span<const double> T) const override;
  double phi_tilde(double p, double q, std::span<const double> T) const override;
  SchemePartials partials(double p, double q, std::span<const double> T) const override;
  void check_point(double p, double q, std::span<const double> T) const override;
  void check_taxes(std::span<const double> T) const override;
  double external_cost(std::span<const double> T) const override;

  // Price the firm reports to the tax authority.
  double reported_price(double p, double q, std::span<const double> T) const;

 private:
  double zeta_, xi_;
  std::function<double(double)> enforcement_;
};

// Unit and ad valorem taxes plus a per-unit production cost z that raises
// nothing for the government. T = (t, v, z).
class CostShift final : public TaxScheme {
 public:
  std::string name() const override { return "cost_shift"; }
  std::vector<std::string> dimensions() const override { return {"t", "v", "z"}; }
  double phi(double p, double q, std::span<const double> T) const override;
  double phi_tilde(double p, double q, std::span<const double> T) const override;
  SchemePartials partials(double p, double q, std::span<const double> T) const override;
  void check_taxes(std::span<const double> T) const override;
};

// Appends marginal unit and ad valorem taxes (dt, dv) to a base scheme.
// Evaluated at dt = dv = 0 they give the unit/ad valorem pass-through of any
// scheme.
class MarginalTaxOverlay final : public TaxScheme {
 public:
  explicit MarginalTaxOverlay(SchemePtr base);
  std::string name() const override { return base_->name() + "+marginal"; }
  std::vector<std::string> dimensions() const override;
  double phi(double p, double q, std::span<const double> T) const override;
  double phi_tilde(double p, double q, std::span<const double> T) const override;
  SchemePartials partials(double p, double q, std::span<const double> T) const override;
  void check_point(double p, double q, std::span<const double> T) const override;
  void check_taxes(std::span<const double> T) const override;
  double external_cost(std::span<const double> T) const override;
  const TaxScheme& base() const { return *base_; }

 private:
  SchemePtr base_;
};

SchemePtr scheme_unit_adval();
SchemePtr scheme_exogenous_competition(CostPtr cost);
SchemePtr scheme_sales_restriction(DemandPtr demand);
SchemePtr scheme_tax_evasion(double zeta_c, double xi_c, std::function<double(double)> enforcement_cost = {});
SchemePtr scheme_cost_shift();
SchemePtr with_marginal_taxes(SchemePtr base);

struct ExchangeRateTaxes {
  double t_eff = 0, v_eff = 0, dt_de = 0, dv_de = 0;
};

// Effective taxes when a share a of costs is paid in foreign currency at
// exchange rate e.
ExchangeRateTaxes exchange_rate_taxes(double t, double v, double a, double e);

// ---------------------------------------------------------------- sensitivities

struct Sensitivities {
  double nu = 0, tau = 0, nu2 = 0, tau2 = 0, kappa = 0;
  // receipts counterparts phi_tilde_p / q and phi_tilde_q / p
  double nu_tilde = 0, tau_tilde = 0;
  std::vector<double> f, f_tilde;
  std::vector<double> g;  // f_tilde / f; NaN where f = 0
  std::vector<double> dtau_dT, dnu_dT;
};

Sensitivities sensitivities_from(const SchemePartials& d, double p, double q);
Sensitivities sensitivities_at(const TaxScheme& scheme, double p, double q, std::span<const double> T);

}  // namespace oligo
