#include "oligo/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <sstream>
#include <thread>

#include "oligo/cli/figures.hpp"
#include "oligo/errors.hpp"
#include "oligo/oracle.hpp"

namespace oligo::cli {

using nlohmann::ordered_json;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kUsageError;
  if (dynamic_cast<const CLI::Error*>(&e)) return kUsageError;
  return kSolverError;
}

// ---------------------------------------------------------------- solve

SolveResult solve_scenario(const ScenarioSpec& s, const SolverOptions& o, double v_flag_threshold) {
  const Market m = build_market(s);
  SolveResult r;
  r.dims = m.scheme->dimensions();
  r.eq = solve_symmetric(m, s.T, o);
  r.ptv = passthrough_vector(r.eq);
  r.ratios = welfare_ratios(r.eq, r.ptv);
  if (!r.eq.soc_ok) r.flags.push_back("soc_failed");
  if (1 - r.eq.sens.nu <= v_flag_threshold) r.flags.push_back("near_v1");
  if (!std::isfinite(r.ptv.rho0)) r.flags.push_back("undefined:rho0");
  for (std::size_t l = 0; l < r.dims.size(); ++l) {
    if (!std::isfinite(r.ptv.rho[l])) r.flags.push_back("undefined:rho_" + r.dims[l]);
    if (!std::isfinite(r.ratios.MC[l])) r.flags.push_back("undefined:MC_" + r.dims[l]);
    if (!std::isfinite(r.ratios.I[l])) r.flags.push_back("undefined:I_" + r.dims[l]);
    if (!std::isfinite(r.ratios.SI[l])) r.flags.push_back("undefined:SI_" + r.dims[l]);
  }
  return r;
}

std::vector<std::string> result_columns(const std::vector<std::string>& dims) {
  std::vector<std::string> c{"p_star", "q_star", "theta", "eps", "rho0"};
  for (const auto& d : dims) {
    for (const char* m : {"rho_tilde_", "rho_", "MC_", "I_", "SI_"}) c.push_back(m + d);
  }
  c.push_back("flags");
  return c;
}

namespace {

std::string join(const std::vector<std::string>& xs, char sep) {
  std::string s;
  for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? std::string(1, sep) : "") + xs[k];
  return s;
}

ordered_json num(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

}  // namespace

std::vector<Cell> result_row(const SolveResult& r) {
  std::vector<Cell> row{r.eq.p_star, r.eq.q_star, r.eq.theta, r.eq.diag.eps, r.ptv.rho0};
  for (std::size_t l = 0; l < r.dims.size(); ++l) {
    row.emplace_back(r.ptv.rho_tilde[l]);
    row.emplace_back(r.ptv.rho[l]);
    row.emplace_back(r.ratios.MC[l]);
    row.emplace_back(r.ratios.I[l]);
    row.emplace_back(r.ratios.SI[l]);
  }
  row.emplace_back(join(r.flags, ';'));
  return row;
}

Table solve_table(const Config& c) {
  const SolveResult r = solve_scenario(c.scenario, c.solver, c.sweep.v_flag_threshold);
  Table t;
  t.columns = result_columns(r.dims);
  t.rows.push_back(result_row(r));
  return t;
}

ordered_json solve_json(const Config& c, std::uint64_t seed) {
  const SolveResult r = solve_scenario(c.scenario, c.solver, c.sweep.v_flag_threshold);
  ordered_json j;
  j["schema"] = "oligo.solve/1";
  j["seed"] = seed;
  j["scenario"] = config_to_json(c);
  ordered_json e;
  e["p_star"] = num(r.eq.p_star);
  e["q_star"] = num(r.eq.q_star);
  e["theta"] = num(r.eq.theta);
  e["omega"] = num(r.eq.omega);
  e["eps"] = num(r.eq.diag.eps);
  e["eta"] = num(r.eq.diag.eta);
  e["mc"] = num(r.eq.mc);
  e["rho0"] = num(r.ptv.rho0);
  e["soc_ok"] = r.eq.soc_ok;
  e["residual"] = num(r.eq.residual);
  e["roots"] = r.eq.roots;
  j["equilibrium"] = e;
  ordered_json dims = ordered_json::array();
  for (std::size_t l = 0; l < r.dims.size(); ++l) {
    ordered_json d;
    d["name"] = r.dims[l];
    d["T"] = num(c.scenario.T[l]);
    d["f"] = num(r.eq.sens.f[l]);
    d["g"] = num(r.eq.sens.g[l]);
    d["rho_tilde"] = num(r.ptv.rho_tilde[l]);
    d["rho"] = num(r.ptv.rho[l]);
    d["MC"] = num(r.ratios.MC[l]);
    d["I"] = num(r.ratios.I[l]);
    d["SI"] = num(r.ratios.SI[l]);
    dims.push_back(std::move(d));
  }
  j["dimensions"] = dims;
  j["flags"] = r.flags;
  return j;
}

// ---------------------------------------------------------------- sweep

Table sweep_table(const Config& c, int threads) {
  const auto& axes = c.sweep.axes;
  if (axes.empty()) throw ConfigError("config field 'sweep.axes': a sweep needs at least one axis");
  std::size_t total = 1;
  for (const Axis& a : axes) total *= a.values.size();

  const std::vector<std::string> dims = dimension_names(c.scenario);
  const std::size_t width = result_columns(dims).size();
  Table t;
  for (const Axis& a : axes) t.columns.push_back(a.param);
  const auto rc = result_columns(dims);
  t.columns.insert(t.columns.end(), rc.begin(), rc.end());
  t.rows.resize(total);
  const std::size_t v_index = static_cast<std::size_t>(std::find(dims.begin(), dims.end(), "v") - dims.begin());

  auto eval = [&](std::size_t idx) {
    std::vector<std::size_t> pos(axes.size());
    std::size_t rest = idx;
    for (std::size_t k = axes.size(); k-- > 0;) {
      pos[k] = rest % axes[k].values.size();
      rest /= axes[k].values.size();
    }
    std::vector<Cell> row;
    ScenarioSpec s = c.scenario;
    for (std::size_t k = 0; k < axes.size(); ++k) row.emplace_back(axes[k].values[pos[k]]);
    try {
      for (std::size_t k = 0; k < axes.size(); ++k) set_parameter(s, axes[k].param, axes[k].values[pos[k]]);
      const auto r = result_row(solve_scenario(s, c.solver, c.sweep.v_flag_threshold));
      row.insert(row.end(), r.begin(), r.end());
    } catch (const Error& e) {
      for (std::size_t k = 0; k + 1 < width; ++k) row.emplace_back(kNaN);
      const bool near = v_index < s.T.size() && 1 - s.T[v_index] <= c.sweep.v_flag_threshold;
      row.emplace_back(std::string(near ? "near_v1;" : "") + "error:" + e.what());
    }
    t.rows[idx] = std::move(row);
  };

  int nt = threads > 0 ? threads : (c.sweep.threads > 0 ? c.sweep.threads : static_cast<int>(std::thread::hardware_concurrency()));
  nt = std::clamp<int>(nt, 1, static_cast<int>(std::max<std::size_t>(1, total)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) eval(k);
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < nt; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return t;
}

// ---------------------------------------------------------------- entry point

namespace {

std::string render(const Table& t, Format f, const std::string& schema, const ordered_json& extra = {}) {
  if (f == Format::csv) {
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
  }
  ordered_json j = table_to_json(t, schema);
  if (extra.is_object()) {
    for (const auto& [k, v] : extra.items()) j[k] = v;
  }
  return j.dump(2) + "\n";
}

Table checks_table(const ValidationReport& rep, bool timing) {
  Table t;
  t.columns = {"name", "pass", "informational", "cases", "closed_form", "oracle", "abs_error", "rel_error", "tolerance"};
  if (timing) t.columns.push_back("runtime_ms");
  t.columns.push_back("note");
  for (const auto& c : rep.checks) {
    std::vector<Cell> r{c.name,         std::string(c.pass ? "true" : "false"), std::string(c.informational ? "true" : "false"),
                        std::int64_t{c.cases}, c.closed_form, c.oracle, c.abs_error, c.rel_error, c.tolerance};
    if (timing) r.emplace_back(c.runtime_ms);
    r.emplace_back(c.note);
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Oligopoly tax pass-through and welfare calculator"};
  app.require_subcommand(1);

  std::string config_path, out_path, format_name;
  std::uint64_t seed = ValidationOptions{}.seed;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "scenario JSON file");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output file (default: stdout)");
    sub->add_option("--format", format_name, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "random seed");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one scenario and report pass-through and welfare ratios");
  add_common(solve, true);

  CLI::App* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep over the config's axes");
  add_common(sweep, true);
  int sweep_threads = 0;
  sweep->add_option("--threads", sweep_threads, "worker threads (0: config or hardware)")->check(CLI::NonNegativeNumber);

  CLI::App* figure = app.add_subcommand("figure", "emit figure data as a grid");
  add_common(figure, false);
  int fig_id = 0;
  figure->add_option("--id", fig_id, "figure number")->required()->check(CLI::IsMember({1, 2, 3}));
  int points = 101, n_max = 10;
  double t_tax = Figure2Options{}.t, v_tax = Figure2Options{}.v;
  std::string curvature = "exact";
  std::vector<double> rho_range, eps_range, theta_range;
  figure->add_option("--points", points, "grid points per continuous axis")->check(CLI::Range(2, 100000));
  figure->add_option("--n-max", n_max, "largest number of firms (figures 2, 3)")->check(CLI::Range(2, 1000));
  figure->add_option("--t", t_tax, "unit tax (figures 2, 3)");
  figure->add_option("--v", v_tax, "ad valorem tax (figures 2, 3)");
  figure->add_option("--curvature", curvature, "logit curvature source (figure 3)")
      ->check(CLI::IsMember({"exact", "table"}));
  figure->add_option("--rho-range", rho_range, "pass-through axis (figure 1)")->expected(2);
  figure->add_option("--eps-range", eps_range, "elasticity axis (figure 1)")->expected(2);
  figure->add_option("--theta-range", theta_range, "conduct axis (figure 1)")->expected(2);

  CLI::App* validate = app.add_subcommand("validate", "run the oracle and invariant suite");
  add_common(validate, false);
  std::string suite_name = "default";
  int val_threads = 0, per_combination = ValidationOptions{}.per_combination;
  bool no_timing = false;
  validate->add_option("--suite", suite_name, "suite selector")->check(CLI::IsMember({"default", "corrupted"}));
  validate->add_option("--threads", val_threads, "worker threads (0: hardware)")->check(CLI::NonNegativeNumber);
  validate->add_option("--per-combination", per_combination, "scenarios per family x conduct x scheme")
      ->check(CLI::Range(1, 1000));
  validate->add_flag("--no-timing", no_timing, "omit runtimes so the report is byte-stable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*solve || *sweep) {
      const Config cfg = load_config(config_path);
      Format f = cfg.format;
      if (!format_name.empty()) f = format_from_string(format_name);
      if (*solve) {
        write_text(out_path, f == Format::json ? solve_json(cfg, seed).dump(2) + "\n"
                                               : render(solve_table(cfg), f, "oligo.solve/1"));
      } else {
        if (cfg.sweep.axes.empty()) throw ConfigError("config field 'sweep': required for the sweep command");
        const ordered_json extra = {{"seed", seed}, {"scenario", config_to_json(cfg)}};
        write_text(out_path, render(sweep_table(cfg, sweep_threads), f, "oligo.sweep/1", extra));
      }
      return kOk;
    }
    const Format f = format_name.empty() ? Format::csv : format_from_string(format_name);
    if (*figure) {
      if (!config_path.empty()) throw ConfigError("figure: --config is not used; grids are set by flags");
      auto range = [](const std::vector<double>& r, double& lo, double& hi) {
        if (r.empty()) return;
        lo = r[0];
        hi = r[1];
      };
      Table t;
      std::vector<CheckResult> claims;
      if (fig_id == 1) {
        Figure1Options o;
        o.points = points;
        range(rho_range, o.rho_lo, o.rho_hi);
        range(eps_range, o.eps_lo, o.eps_hi);
        range(theta_range, o.theta_lo, o.theta_hi);
        t = figure1(o);
        claims = figure1_claims(t);
      } else if (fig_id == 2) {
        Figure2Options o;
        o.points = points;
        o.n_max = n_max;
        o.t = t_tax;
        o.v = v_tax;
        t = figure2(o);
        claims = figure2_claims(t);
      } else {
        Figure3Options o;
        o.points = points;
        o.n_max = n_max;
        o.t = t_tax;
        o.v = v_tax;
        o.curvature = curvature_from_string(curvature);
        t = figure3(o);
        claims = figure3_claims(t);
      }
      const ordered_json extra = {{"id", fig_id}};
      write_text(out_path, render(t, f, "oligo.figure/1", extra));
      for (const auto& c : claims) {
        std::cerr << (c.pass ? "claim holds: " : "claim fails: ") << c.name << (c.pass ? "" : " (" + c.note + ")")
                  << "\n";
      }
      return kOk;
    }
    // validate
    ValidationOptions o;
    o.seed = seed;
    o.corrupt = suite_name == "corrupted";
    o.threads = val_threads;
    o.per_combination = per_combination;
    ValidationSuite suite = default_suite(o);
    add_figure_checks(suite);
    const ValidationReport rep = suite.run(o.seed, suite_name, o.threads);
    std::cerr << rep.to_table();
    if (f == Format::json) {
      write_text(out_path, rep.to_json(!no_timing) + "\n");
    } else {
      std::ostringstream os;
      write_csv(os, checks_table(rep, !no_timing));
      write_text(out_path, os.str());
    }
    return rep.all_pass() ? kOk : kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace oligo::cli
