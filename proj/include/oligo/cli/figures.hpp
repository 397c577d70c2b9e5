#pragma once

#include <string>
#include <vector>

#include "oligo/cli/output.hpp"
#include "oligo/equilibrium.hpp"
#include "oligo/oracle.hpp"

namespace oligo::cli {

enum class Curvature { exact, table };
Curvature curvature_from_string(const std::string& s);

// MC / (theta rho) surfaces for unit and ad valorem changes.
struct Figure1Options {
  int points = 101;
  double rho_lo = 0.2, rho_hi = 2.0;
  double eps_lo = 1.1, eps_hi = 4.0;
  double theta_lo = 0.01, theta_hi = 1.0;
  double theta_held = 0.3, eps_held = 2.0, rho_held = 1.0;
};

// Linear demand with b = lambda = 1 and zero marginal cost.
struct Figure2Options {
  int n_max = 10;
  double mu_held = 0.1;  // substitutability on the n panel
  int n_held = 3;        // firms on the mu panel
  double mu_lo = 0.0, mu_hi = 0.45;
  int points = 101;
  double t = 0.05, v = 0.05;  // small positive taxes: at zero taxes and zero cost ad valorem pass-through vanishes
};

// Logit demand with delta = 1 and zero marginal cost.
struct Figure3Options {
  int n_max = 10;
  double beta_held = 1.0;
  int n_held = 3;
  double beta_lo = 0.5, beta_hi = 3.0;
  int points = 101;
  double t = 0.05, v = 0.05;
  Curvature curvature = Curvature::exact;
};

// Unit and ad valorem pass-through, marginal cost of public funds and
// incidence at one symmetric equilibrium with a unit + ad valorem scheme.
struct TaxMeasures {
  double p = kNaN, rho_t = kNaN, rho_v = kNaN, MC_t = kNaN, MC_v = kNaN, I_t = kNaN, I_v = kNaN;
};

// `table` swaps the logit curvature for the printed table entry (alpha under
// price setting, sigma under quantity setting) and uses the constant-cost
// displays.
TaxMeasures tax_measures(const Market& market, double t, double v, bool table = false);

// MC / (theta rho) at one point; unit: t = 0, v = tau = 0.2; ad valorem: v = 0, tau = 0.2.
double figure1_ratio(bool unit, double theta, double eps, double rho);

Table figure1(const Figure1Options& o = {});
Table figure2(const Figure2Options& o = {});
Table figure3(const Figure3Options& o = {});

// Qualitative claims re-checked on emitted figure data.
std::vector<CheckResult> figure1_claims(const Table& t);
std::vector<CheckResult> figure2_claims(const Table& t);
std::vector<CheckResult> figure3_claims(const Table& t);

// Table entry for the logit direct curvature against -p q''/q' by central
// differences, at the Figure-3 equilibria.
CheckResult logit_table_alpha_check();

// Registers the figure claims; claims the model itself contradicts are
// registered as informational.
void add_figure_checks(ValidationSuite& suite);

}  // namespace oligo::cli
