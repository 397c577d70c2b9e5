#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace oligo {

// Partials of firm j's demand q_j(p_1..p_n) at a symmetric price vector.
// "cross" differentiates with respect to a rival price p_k (k != j);
// "cross_pair" with respect to two distinct rival prices.
struct DirectPartials {
  double q = 0;
  double own = 0;          // dq_j/dp_j
  double cross = 0;        // dq_j/dp_k
  double own_own = 0;      // d2q_j/dp_j2
  double own_cross = 0;    // d2q_j/dp_j dp_k
  double cross_cross = 0;  // d2q_j/dp_k2
  double cross_pair = 0;   // d2q_j/dp_k dp_l
};

// Same layout for the inverse system p_j(q_1..q_n) at symmetric quantities.
struct InversePartials {
  double p = 0;
  double own = 0;
  double cross = 0;
  double own_own = 0;
  double own_cross = 0;
  double cross_cross = 0;
  double cross_pair = 0;
};

struct DemandDiagnostics {
  double p = 0, q = 0;
  double eps = 0, eps_F = 0, eps_C = 0;
  // alpha = (alpha_F + alpha_C) eps_F / eps, the curvature that enters the
  // pass-through formulas. alpha_industry = -p q''/q' along the diagonal. The
  // two coincide for n = 1 or when cross second partials vanish.
  double alpha = 0, alpha_F = 0, alpha_C = 0, alpha_industry = 0;
  double eta = 0, eta_F = 0, eta_C = 0;
  double sigma = 0, sigma_F = 0, sigma_C = 0, sigma_industry = 0;
  double ms = 0;      // -p'(q) q
  double eps_ms = 0;  // ms / (ms' q); infinite when p'' = 0
  double inv_eps_ms = 0;
  // industry slopes along the symmetric diagonal
  double dq_dp = 0, d2q_dp2 = 0, dp_dq = 0, d2p_dq2 = 0;
};

// Quantity range used for bracket scans. bounded_above means the natural
// domain is (0, hi) with hi a hard bound (e.g. the 1/n share cap).
struct QuantityRange {
  double lo = 0;
  double hi = 0;
  bool bounded_above = true;
};

class SymmetricDemand {
 public:
  explicit SymmetricDemand(int n);
  virtual ~SymmetricDemand() = default;

  int firms() const { return n_; }
  virtual std::string family() const = 0;

  // Per-firm industry demand at symmetric prices and its inverse.
  virtual double quantity(double p) const = 0;
  virtual double price(double q) const = 0;

  virtual DirectPartials direct(double p) const = 0;
  virtual InversePartials inverse(double q) const = 0;

  // Demand of firm 0 at an arbitrary price vector, and the inverse.
  virtual double firm_quantity(std::span<const double> prices) const = 0;
  virtual double firm_price(std::span<const double> quantities) const = 0;

  virtual bool price_in_domain(double p) const = 0;
  virtual bool quantity_in_domain(double q) const = 0;
  virtual QuantityRange quantity_range() const = 0;
  // Price at which symmetric demand reaches zero; +inf if it never does.
  virtual double choke_price() const = 0;

  void check_price(double p) const;
  void check_quantity(double q) const;

 private:
  int n_;
};

using DemandPtr = std::shared_ptr<const SymmetricDemand>;

DemandDiagnostics diagnostics_at(const SymmetricDemand& demand, double p);

// First and second derivative of the symmetric industry curve.
struct IndustrySlopes {
  double first = 0, second = 0;
};
IndustrySlopes direct_slopes(const SymmetricDemand& demand, double p);
IndustrySlopes inverse_slopes(const SymmetricDemand& demand, double q);
DemandDiagnostics diagnostics_at_quantity(const SymmetricDemand& demand, double q);

// Partials from the firm-level functions by Richardson-extrapolated central
// differences. Used for user-supplied systems and as a test oracle.
DirectPartials numeric_direct_partials(const SymmetricDemand& demand, double p, double h_rel = 1e-4);
InversePartials numeric_inverse_partials(const SymmetricDemand& demand, double q, double h_rel = 1e-4);

struct LinearDemandParams {
  double b = 1, lambda = 1, mu = 0;
  int n = 1;
};

// q_j = b - lambda p_j + mu sum_{k != j} p_k
class LinearDemand final : public SymmetricDemand {
 public:
  explicit LinearDemand(const LinearDemandParams& params);
  const LinearDemandParams& params() const { return prm_; }
  std::string family() const override { return "linear"; }
  double quantity(double p) const override;
  double price(double q) const override;
  DirectPartials direct(double p) const override;
  InversePartials inverse(double q) const override;
  double firm_quantity(std::span<const double> prices) const override;
  double firm_price(std::span<const double> quantities) const override;
  bool price_in_domain(double p) const override;
  bool quantity_in_domain(double q) const override;
  QuantityRange quantity_range() const override;
  double choke_price() const override;

  // industry slope lambda - (n-1) mu
  double industry_slope() const { return slope_; }

 private:
  LinearDemandParams prm_;
  double slope_;
  double inv_own_, inv_cross_;
};

struct LogitDemandParams {
  double delta = 1, beta = 1;
  int n = 1;
};

// s_j = exp(delta - beta p_j) / (1 + sum_k exp(delta - beta p_k)); quantity
// is the market share.
class LogitDemand final : public SymmetricDemand {
 public:
  explicit LogitDemand(const LogitDemandParams& params);
  const LogitDemandParams& params() const { return prm_; }
  std::string family() const override { return "logit"; }
  double quantity(double p) const override;
  double price(double q) const override;
  DirectPartials direct(double p) const override;
  InversePartials inverse(double q) const override;
  double firm_quantity(std::span<const double> prices) const override;
  double firm_price(std::span<const double> quantities) const override;
  bool price_in_domain(double p) const override;
  bool quantity_in_domain(double q) const override;
  QuantityRange quantity_range() const override;
  double choke_price() const override;

  // Table entry for the direct curvature, kept verbatim for comparison.
  double table_alpha(double p) const;
  // Table entry for the inverse curvature; equals sigma_industry.
  double table_sigma(double s) const;

 private:
  LogitDemandParams prm_;
};

struct ConstantElasticityParams {
  double A = 1;
  double eps0 = 2;   // industry elasticity
  double gamma = 2;  // elasticity of relative demand; gamma = eps0 gives independent markets
  int n = 1;
};

// q_j = A pbar^-eps0 (p_j / pbar)^-gamma with pbar the geometric mean price,
// so symmetric demand is A p^-eps0.
class ConstantElasticityDemand final : public SymmetricDemand {
 public:
  explicit ConstantElasticityDemand(const ConstantElasticityParams& params);
  const ConstantElasticityParams& params() const { return prm_; }
  std::string family() const override { return "constant_elasticity"; }
  double quantity(double p) const override;
  double price(double q) const override;
  DirectPartials direct(double p) const override;
  InversePartials inverse(double q) const override;
  double firm_quantity(std::span<const double> prices) const override;
  double firm_price(std::span<const double> quantities) const override;
  bool price_in_domain(double p) const override;
  bool quantity_in_domain(double q) const override;
  QuantityRange quantity_range() const override;
  double choke_price() const override { return std::numeric_limits<double>::infinity(); }

 private:
  ConstantElasticityParams prm_;
  double a_own_, a_cross_;  // log-log slopes of direct demand
  double n_own_, n_cross_;  // log-log slopes of inverse demand
};

// User-supplied system: firm-level demand and inverse demand only. Partials
// come from numeric differentiation.
struct NumericDemandSpec {
  int n = 1;
  std::function<double(std::span<const double>)> firm_quantity;
  std::function<double(std::span<const double>)> firm_price;
  double p_lo = 0, p_hi = std::numeric_limits<double>::infinity();
  QuantityRange range;
  double choke = std::numeric_limits<double>::infinity();
};

class NumericDemand final : public SymmetricDemand {
 public:
  explicit NumericDemand(NumericDemandSpec spec);
  std::string family() const override { return "numeric"; }
  double quantity(double p) const override;
  double price(double q) const override;
  DirectPartials direct(double p) const override;
  InversePartials inverse(double q) const override;
  double firm_quantity(std::span<const double> prices) const override;
  double firm_price(std::span<const double> quantities) const override;
  bool price_in_domain(double p) const override;
  bool quantity_in_domain(double q) const override;
  QuantityRange quantity_range() const override { return spec_.range; }
  double choke_price() const override { return spec_.choke; }

 private:
  NumericDemandSpec spec_;
};

std::shared_ptr<LinearDemand> linear_demand(const LinearDemandParams& params);
std::shared_ptr<LogitDemand> logit_demand(const LogitDemandParams& params);
std::shared_ptr<ConstantElasticityDemand> constant_elasticity_demand(const ConstantElasticityParams& params);

// Multi-product firms: partials of one product's demand at the fully
// symmetric point. Index 1 is the own product, 0,1 a sibling product of the
// same firm; the rival set covers products of other firms.
struct MultiProductPartials {
  double p = 0, q = 0;
  double x1 = 0, x01 = 0;                     // first order, own firm
  double x2 = 0, x11 = 0, x02 = 0, x011 = 0;  // second order, own firm
  double r1 = 0, r01 = 0;                     // first order, rival firm
  double r2 = 0, r11 = 0, r02 = 0, r011 = 0;  // second order, rival firm
  // d2q_jk / dp_jk' dp_j'k: sibling price against the rival's same-category
  // price. Equals r11 under an identity-free substitution pattern.
  double r_sib = 0;
};

struct MultiProductAggregates {
  double eps_F = 0, eps = 0, alpha_F = 0, alpha_C = 0;
};

struct MultiProductInverseAggregates {
  double eta_F = 0, eta = 0, sigma_F = 0, sigma_C = 0;
};

MultiProductAggregates multiproduct_aggregate(const MultiProductPartials& xi, int n, int n_p);
// Same formulas on inverse-demand partials (p and q swap roles).
MultiProductInverseAggregates multiproduct_aggregate_inverse(const MultiProductPartials& zeta, int n,
                                                             int n_p);

}  // namespace oligo
