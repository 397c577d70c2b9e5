#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "oligo/equilibrium.hpp"
#include "oligo/market.hpp"

namespace oligo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Firm-indexed demand system q_i(p) with inverse p_i(q).
class HeteroDemand {
 public:
  virtual ~HeteroDemand() = default;
  virtual int firms() const = 0;
  virtual Vec quantities(const Vec& p) const = 0;
  virtual Vec prices(const Vec& q) const = 0;
  virtual Mat jacobian(const Vec& p) const = 0;          // dq_i/dp_j
  virtual Mat inverse_jacobian(const Vec& q) const = 0;  // dp_i/dq_j
};

using HeteroDemandPtr = std::shared_ptr<const HeteroDemand>;

// Linear system held in inverse form p = a - B q; the direct form
// q = B^-1 (a - p) exists when B is invertible (not for homogeneous goods).
class HeteroLinearDemand final : public HeteroDemand {
 public:
  HeteroLinearDemand(Vec a, Mat B);
  // q_i = b_i - lambda_i p_i + mu sum_{j != i} p_j
  static std::shared_ptr<HeteroLinearDemand> from_direct(const Vec& b, const Vec& lambda, double mu);
  int firms() const override { return static_cast<int>(a_.size()); }
  Vec quantities(const Vec& p) const override;
  Vec prices(const Vec& q) const override;
  Mat jacobian(const Vec& p) const override;
  Mat inverse_jacobian(const Vec& q) const override;

 private:
  Vec a_;
  Mat B_;
  bool invertible_;
  Mat Binv_;
};

// q_i = exp(delta_i - beta p_i) / (1 + sum_k exp(delta_k - beta p_k))
class HeteroLogitDemand final : public HeteroDemand {
 public:
  HeteroLogitDemand(Vec delta, double beta);
  int firms() const override { return static_cast<int>(delta_.size()); }
  Vec quantities(const Vec& p) const override;
  Vec prices(const Vec& q) const override;
  Mat jacobian(const Vec& p) const override;
  Mat inverse_jacobian(const Vec& q) const override;

 private:
  Vec delta_;
  double beta_;
};

struct HeteroMarket {
  HeteroDemandPtr demand;
  std::vector<CostPtr> costs;      // one per firm
  std::vector<SchemePtr> schemes;  // one per firm; all read the same T
  Mode mode = Mode::price;
};

// Symmetric market restated firm by firm (linear and logit families).
HeteroMarket hetero_from_symmetric(const Market& market, Mode mode);

struct HeteroPoint {
  Vec p, q;
  std::vector<double> T;
  std::vector<Sensitivities> sens;
  Vec psi;        // pricing strength from each firm's first-order condition
  Vec psi_model;  // the same index from the demand system alone
  Vec chi, mc;
  Mat eps;        // eps_ij = -(p_i/q_i) dq_i/dp_j
  Mat Psi;        // (p_i/psi_i) dpsi_i/dp_j
  Mat zeta;       // dp_i/dsigma_j
  Mat dq_dsigma;  // dq_i/dsigma_j
  Vec foc_residual;
};

// Pricing strength psi_i(p) implied by the demand system and the mode.
Vec pricing_strength_model(const HeteroMarket& market, const Vec& p);

HeteroPoint hetero_point(const HeteroMarket& market, const Vec& p, std::span<const double> T);
// Point given both prices and quantities; needed when the direct system does
// not exist (homogeneous goods). eps and Psi are then NaN.
HeteroPoint hetero_point(const HeteroMarket& market, const Vec& p, const Vec& q, std::span<const double> T);
Vec pricing_strength(const HeteroMarket& market, const HeteroPoint& point);

struct HeteroSolveOptions {
  double tol = 1e-11;
  int max_iter = 500;
};

// Asymmetric equilibrium by damped per-firm Newton steps on the first-order
// conditions, starting from p0.
Vec solve_hetero(const HeteroMarket& market, std::span<const double> T, const Vec& p0,
                 const HeteroSolveOptions& options = {});

struct PassThroughMatrix {
  Mat rho_tilde;  // n x d
  Mat rho;        // n x d, NaN where f_i = 0
  Mat b;
  Mat iota;
  double condition = 0;
  bool low_confidence = false;
};

PassThroughMatrix passthrough_matrix(const HeteroMarket& market, const HeteroPoint& point);

struct HeteroGradients {
  Mat CS, PS, R, W;  // n x d, firm contributions
  Vec total_CS, total_PS, total_R, total_W;
};

HeteroGradients hetero_welfare_gradients(const HeteroPoint& point, const PassThroughMatrix& ptm);

struct HeteroRatios {
  Mat MC, I, SI;  // n x d, NaN where undefined
  Vec total_MC, total_I, total_SI;
  std::vector<bool> mc_within_bounds;
};

HeteroRatios hetero_welfare_ratios(const HeteroPoint& point, const PassThroughMatrix& ptm);
HeteroRatios hetero_welfare_ratios(const HeteroPoint& point, const PassThroughMatrix& ptm, const Mat& g);

struct ConductIndices {
  Vec theta;      // from margins
  Vec theta_psi;  // from pricing strength
};

ConductIndices conduct_index_hetero(const HeteroPoint& point);

struct SurplusChange {
  double dCS = 0, dPS = 0;
  Vec lambda;
};

SurplusChange surplus_change_via_lambda(const HeteroPoint& point, const PassThroughMatrix& ptm, std::size_t index);

// ---------------------------------------------------------------- aggregative games

// Prices and quantities as functions of the aggregate A = sum a_i and the
// firm's own action.
class AggregativeGame {
 public:
  virtual ~AggregativeGame() = default;
  virtual int firms() const = 0;
  virtual double price(int i, double A, double a) const = 0;
  virtual double quantity(int i, double A, double a) const = 0;
  // partials; the defaults use central differences
  virtual double dp_da(int i, double A, double a) const;
  virtual double dp_dA(int i, double A, double a) const;
  virtual double dq_da(int i, double A, double a) const;
  virtual double dq_dA(int i, double A, double a) const;
};

// Cournot with homogeneous goods: a_i = q_i, p = alpha - beta A.
class LinearCournotGame final : public AggregativeGame {
 public:
  LinearCournotGame(int n, double alpha, double beta);
  int firms() const override { return n_; }
  double price(int, double A, double) const override { return alpha_ - beta_ * A; }
  double quantity(int, double, double a) const override { return a; }
  double dp_da(int, double, double) const override { return 0; }
  double dp_dA(int, double, double) const override { return -beta_; }
  double dq_da(int, double, double) const override { return 1; }
  double dq_dA(int, double, double) const override { return 0; }
  // the same market as a firm-indexed inverse demand system
  HeteroDemandPtr as_demand() const;

 private:
  int n_;
  double alpha_, beta_;
};

struct AggregativeResult {
  Vec psi, theta;
  Vec weights;  // row-major n x n, row i weights the firms for firm i's action
  Vec theta_chain;  // conduct index from the general chain-rule form
};

// nu holds each firm's price sensitivity (zero without ad valorem taxes).
AggregativeResult aggregative_reduction(const AggregativeGame& game, const Vec& a, const Vec& nu);

}  // namespace oligo
