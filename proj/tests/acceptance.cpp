// Acceptance harness: one PASS/FAIL line per criterion.
// Usage: oligo_acceptance [--criterion N] [--seed S]

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oligo/cli/figures.hpp"
#include "oligo/oracle.hpp"

using namespace oligo;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fold(Outcome& o, const CheckResult& r) {
  char buf[256];
  if (std::isnan(r.rel_error))  // qualitative claim: no error magnitude
    std::snprintf(buf, sizeof buf, "%s%s: %s (%d cases)", o.detail.empty() ? "" : "; ", r.name.c_str(),
                  r.pass ? "holds" : "does not hold", r.cases);
  else
    std::snprintf(buf, sizeof buf, "%s%s: max rel %.2e (tol %.0e, %d cases)%s", o.detail.empty() ? "" : "; ",
                  r.name.c_str(), r.rel_error, r.tolerance, r.cases, r.pass ? "" : " FAILED");
  o.detail += buf;
  if (!r.note.empty() && !r.pass) o.detail += " [" + r.note + "]";
  o.pass = o.pass && r.pass;
}

std::vector<ScenarioSpec> criterion_scenarios(std::uint64_t seed) {
  return generate_scenarios(seed, 6, {SchemeKind::unit_adval, SchemeKind::exogenous_competition,
                                      SchemeKind::sales_restriction, SchemeKind::evasion});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  std::uint64_t seed = 20240611;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  app.add_option("--seed", seed, "scenario seed");
  CLI11_PARSE(app, argc, argv);

  std::vector<ScenarioSpec> scen;
  auto scenarios = [&]() -> const std::vector<ScenarioSpec>& {
    if (scen.empty()) scen = criterion_scenarios(seed);
    return scen;
  };

  std::vector<std::function<Outcome()>> crit = {
      [&] {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        const auto& s = scenarios();
        CheckResult r = check_passthrough_oracle(s, 1e-5);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        fold(o, r);
        o.detail += "; scenarios " + std::to_string(s.size()) + ", " + std::to_string(secs).substr(0, 5) + " s";
        o.pass = o.pass && s.size() >= 200 && secs <= 60;
        return o;
      },
      [&] {
        Outcome o;
        fold(o, check_rho_v_relation(scenarios(), 1e-10));
        return o;
      },
      [&] {
        Outcome o;
        fold(o, check_gradient_oracle(generate_scenarios(seed, 1, {SchemeKind::unit_adval, SchemeKind::exogenous_competition,
                                                                   SchemeKind::sales_restriction, SchemeKind::evasion}),
                                      1e-5));
        fold(o, check_ledger_identity(scenarios(), 1e-12));
        return o;
      },
      [&] {
        Outcome o;
        fold(o, check_zero_tax_reduction(generate_scenarios(seed, 2, {SchemeKind::unit_adval}), 1e-12));
        return o;
      },
      [&] {
        Outcome o;
        fold(o, check_linear_closed_forms(1e-10));
        return o;
      },
      [&] {
        Outcome o;
        for (const auto& r : cli::figure2_claims(cli::figure2())) fold(o, r);
        for (const auto& r : cli::figure3_claims(cli::figure3())) fold(o, r);
        return o;
      },
      [&] {
        Outcome o;
        fold(o, check_hetero_symmetric_reduction(1e-8));
        fold(o, check_psi_identity(1e-8));
        return o;
      },
      [&] {
        Outcome o;
        fold(o, check_hetero_oracle(seed, 1e-5));
        fold(o, check_aggregate_mc_bounds(seed));
        return o;
      },
      [&] {
        Outcome o;
        fold(o, check_pure_tax_reduction(scenarios(), 1e-12));
        fold(o, check_pure_cost_case(1e-12));
        fold(o, check_pure_cost_fd(1e-5));
        return o;
      },
      [&] {
        Outcome o;
        fold(o, check_global_ratio(1e-6));
        return o;
      },
  };

  bool all = true;
  for (int k = 1; k <= static_cast<int>(crit.size()); ++k) {
    if (only && k != only) continue;
    Outcome o;
    try {
      o = crit[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s | %s\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
