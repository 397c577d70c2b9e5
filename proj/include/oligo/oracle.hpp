#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "oligo/equilibrium.hpp"
#include "oligo/hetero.hpp"
#include "oligo/scenario.hpp"
#include "oligo/welfare.hpp"

namespace oligo {

struct FDConfig {
  double h_rel = 1e-6;     // step is h_rel * max(1, |T_l|)
  bool richardson = false;  // combine steps h and h/2
  double tol = 1e-5;
  void validate() const;
  double step(double x) const;
};

// Tight solver settings for brute-force differencing.
SolverOptions oracle_solver_options();

using PriceAt = std::function<double(std::span<const double>)>;

// Central difference of the equilibrium price in tax dimension `index`.
double fd_passthrough(const PriceAt& price_at, std::span<const double> T, std::size_t index, const FDConfig& cfg = {});
std::vector<double> fd_passthrough(const Market& market, std::span<const double> T, const FDConfig& cfg = {});

// Integral of symmetric demand q(s) over [p, p_bar]; p_bar may be +inf.
double quadrature_cs(const SymmetricDemand& demand, double p, double p_bar);

// Central differences of per-firm CS (quadrature), PS (profit ledger) and R
// (receipts) across the re-solved equilibria at T +- h e_l.
struct FDWelfareGradients {
  std::vector<double> CS, PS, R, W;
};

FDWelfareGradients fd_welfare_gradients(const Market& market, std::span<const double> T, const FDConfig& cfg = {});

// Columns of dp*/dT by re-solving the asymmetric equilibrium from p_star.
Mat fd_hetero_passthrough(const HeteroMarket& market, std::span<const double> T, const Vec& p_star,
                          const FDConfig& cfg = {});

// ---------------------------------------------------------------- suite

struct CheckResult {
  std::string name;
  double closed_form = kNaN;  // at the worst case
  double oracle = kNaN;
  double abs_error = kNaN;
  double rel_error = kNaN;
  double tolerance = kNaN;
  bool pass = false;
  bool informational = false;  // reported, not counted in the verdict
  int cases = 0;
  double runtime_ms = 0;
  std::string note;
};

struct ValidationReport {
  std::uint64_t seed = 0;
  std::string suite;
  std::vector<CheckResult> checks;
  bool all_pass() const;
  int failures() const;
  std::string to_json(bool timing = true) const;
  std::string to_table() const;
};

// Running maximum of |closed - oracle| / max(|oracle|, floor).
class ErrorTracker {
 public:
  explicit ErrorTracker(double floor = 1e-12) : floor_(floor) {}
  void add(double closed, double oracle);
  void add_abs(double closed, double oracle);  // absolute error only
  void fail(const std::string& why);
  CheckResult result(const std::string& name, double tol) const;

 private:
  double floor_;
  double closed_ = kNaN, oracle_ = kNaN, abs_ = 0, rel_ = 0;
  bool use_abs_ = false;
  int cases_ = 0;
  std::string failure_;
};

struct ValidationOptions {
  std::uint64_t seed = 20240611;
  int per_combination = 6;  // scenarios per family x conduct x scheme
  bool corrupt = false;     // replace the common pass-through factor by a wrong one
  int threads = 0;          // 0: hardware concurrency
};

class ValidationSuite {
 public:
  using Check = std::function<CheckResult()>;
  void add(std::string name, Check fn, bool informational = false);
  ValidationReport run(std::uint64_t seed, const std::string& suite, int threads) const;
  std::size_t size() const { return checks_.size(); }

 private:
  struct Entry {
    std::string name;
    Check fn;
    bool informational;
  };
  std::vector<Entry> checks_;
};

// Registers every model invariant; callers may append their own checks.
ValidationSuite default_suite(const ValidationOptions& options);
ValidationReport run_validation_suite(const ValidationOptions& options);

// Individual checks, also used by the acceptance binary.
CheckResult check_passthrough_oracle(const std::vector<ScenarioSpec>& scenarios, double tol, bool corrupt = false);
CheckResult check_rho_v_relation(const std::vector<ScenarioSpec>& scenarios, double tol);
CheckResult check_gradient_oracle(const std::vector<ScenarioSpec>& scenarios, double tol);
CheckResult check_ledger_identity(const std::vector<ScenarioSpec>& scenarios, double tol);
CheckResult check_zero_tax_reduction(const std::vector<ScenarioSpec>& scenarios, double tol);
CheckResult check_linear_closed_forms(double tol);
CheckResult check_hetero_symmetric_reduction(double tol);
CheckResult check_psi_identity(double tol);
CheckResult check_hetero_oracle(std::uint64_t seed, double tol);
CheckResult check_aggregate_mc_bounds(std::uint64_t seed);
CheckResult check_pure_tax_reduction(const std::vector<ScenarioSpec>& scenarios, double tol);
CheckResult check_pure_cost_case(double tol);
CheckResult check_pure_cost_fd(double tol);
CheckResult check_global_ratio(double tol);

}  // namespace oligo
