#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "oligo/equilibrium.hpp"
#include "oligo/numeric.hpp"

namespace oligo {

// ---------------------------------------------------------------- scalar forms

Ratio mc_unit(double theta, double eps, double tau, double v, double rho_t);
Ratio mc_adval(double theta, double eps, double tau, double v, double rho_v);
Ratio incidence(double theta, double v, double rho);
double rho_v_from_rho_t(double rho_t, double theta, double eps);

struct MCPair {
  Ratio mc_t, mc_v;
};
// Marginal costs of public funds from observable pass-through only.
MCPair mc_sufficient_stats(double rho_t, double rho_v, double eps, double v, double tau);

struct RhoPair {
  Ratio rho_t, rho_v;
};

// Unit and ad valorem pass-through for the unit + ad valorem scheme (the
// equilibrium's v and tau are read from its sensitivities).
RhoPair passthrough_general(const SymmetricEquilibrium& eq);
// Same quantities in terms of demand primitives under price / quantity
// competition. constant_mc drops the chi terms.
RhoPair passthrough_price(const SymmetricEquilibrium& eq, bool constant_mc = false);
RhoPair passthrough_quantity(const SymmetricEquilibrium& eq, bool constant_mc = false);
// The same rate through reciprocal elasticities of supply, conduct and
// marginal surplus.
Ratio wf_equivalent_form(const SymmetricEquilibrium& eq);

// ---------------------------------------------------------------- multi-dimensional

// Common factor of all components of the pass-through vector.
Ratio rho0_general(const Sensitivities& sens, const DemandDiagnostics& diag, double theta, double omega, double chi);

struct PassThroughVector {
  std::vector<double> rho_tilde;  // dp*/dT_l
  std::vector<double> rho;        // rho_tilde / f; NaN where f = 0
  double rho0 = kNaN;
};

PassThroughVector passthrough_vector(const SymmetricEquilibrium& eq, double rho0);
PassThroughVector passthrough_vector(const SymmetricEquilibrium& eq);

// Per-firm gradients of consumer surplus, producer surplus, receipts, welfare.
struct WelfareGradients {
  std::vector<double> grad_CS, grad_PS, grad_R, grad_W;
};

WelfareGradients welfare_gradients(const SymmetricEquilibrium& eq, const PassThroughVector& ptv);

// NaN marks an undefined ratio.
struct WelfareRatios {
  std::vector<double> MC, I, SI;
};

// Uses g from the equilibrium's sensitivities.
WelfareRatios welfare_ratios(const SymmetricEquilibrium& eq, const PassThroughVector& ptv);
WelfareRatios welfare_ratios(const SymmetricEquilibrium& eq, const PassThroughVector& ptv, std::span<const double> g);
// Ratios for schemes whose full cost reaches the government (no g).
WelfareRatios pure_tax_ratios(const SymmetricEquilibrium& eq, const PassThroughVector& ptv);
// -dW/dR, dCS/dPS and dW/dPS straight from the gradients.
WelfareRatios ratios_from_gradients(const WelfareGradients& grads);

// ---------------------------------------------------------------- levels

// Per-firm consumer surplus: integral of q(s) from p up to the choke price
// (or infinity). Throws TailError when demand does not vanish fast enough.
double consumer_surplus(const SymmetricDemand& demand, double p);

struct WelfareLevels {
  double CS = 0, PS = 0, R = 0, W = 0;
  double external = 0;  // enforcement and similar costs, not in W
};

WelfareLevels welfare_levels(const Market& market, const SymmetricEquilibrium& eq);

enum class Measure { CS, PS, R, W };
Measure measure_from_string(const std::string& s);

struct GlobalRatio {
  Ratio ratio;             // integral of dA/dT over integral of dB/dT
  Ratio level_ratio;       // from surplus levels at the two ends
  Ratio weighted_average;  // local ratio dA/dB averaged with weights dB/dT
  double t_end = 0;        // upper limit actually used
};

// Ratio of finite changes of A and B when tax dimension `index` moves from
// T1 to T2 (T2 may be +inf: the path then runs until the market closes or
// the measures vanish).
GlobalRatio global_ratio(const Market& market, std::span<const double> T, std::size_t index, double T1, double T2,
                         Measure A, Measure B, const SolverOptions& options = {});

}  // namespace oligo
