#pragma once

#include <span>
#include <vector>

#include "oligo/demand.hpp"
#include "oligo/market.hpp"

namespace oligo {

struct Market {
  DemandPtr demand;
  CostPtr cost;
  ConductModel conduct;
  SchemePtr scheme;
};

enum class RootPolicy { unique, largest_q };

struct SolverOptions {
  double tol_rel = 1e-12;
  double tol_abs = 1e-14;
  int max_iter = 200;
  int scan_points = 64;
  RootPolicy policy = RootPolicy::unique;
};

struct SymmetricEquilibrium {
  double p_star = 0, q_star = 0;
  std::vector<double> T;
  DemandDiagnostics diag;
  Sensitivities sens;
  double theta = 0, omega = 0;
  double theta_log_slope = 0;  // q theta'/theta
  double chi = 0;
  double mc = 0, mc_prime = 0;
  double margin = 0;  // p - mc
  bool soc_ok = false;
  double residual = 0;
  // every root found on the scan grid, ascending in q
  std::vector<double> roots;
};

// F(q) = p - phi_q - (1 - phi_p/q) eta theta p - mc at symmetric quantity q.
double foc_residual(const Market& market, std::span<const double> T, double q);

// Diagnostics at a given symmetric quantity, without solving.
SymmetricEquilibrium equilibrium_at(const Market& market, std::span<const double> T, double q);

SymmetricEquilibrium solve_symmetric(const Market& market, std::span<const double> T,
                                     const SolverOptions& options = {});

enum class Mode { price, quantity };

struct PriceQuantity {
  double p = 0, q = 0;
};

// Closed-form symmetric equilibrium for linear demand with constant mc.
PriceQuantity linear_closed_form(const LinearDemandParams& params, double t, double v, Mode mode, double mc = 0);

// Symmetric logit equilibrium (price, share) from the first-order conditions.
PriceQuantity logit_foc_solve(const LogitDemandParams& params, double t, double v, Mode mode, double mc = 0,
                              int max_iter = 500);

}  // namespace oligo
