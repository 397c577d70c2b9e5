#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>
#include <string>
#include <vector>

#include "oligo/cli/commands.hpp"
#include "oligo/cli/figures.hpp"
#include "oligo/errors.hpp"
#include "oligo/hetero.hpp"
#include "oligo/oracle.hpp"
#include "oligo/welfare.hpp"

namespace py = pybind11;
using nlohmann::ordered_json;
using namespace oligo;

namespace {

// Python objects cross the boundary as JSON text.
ordered_json to_json(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return ordered_json::parse(obj.cast<std::string>());
  auto dumps = py::module_::import("json").attr("dumps");
  return ordered_json::parse(dumps(obj).cast<std::string>());
}

py::object from_json(const ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict columns(const cli::Table& t) {
  py::dict d;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    py::list col;
    for (const auto& row : t.rows) {
      std::visit([&](const auto& v) { col.append(v); }, row[c]);
    }
    d[py::str(t.columns[c])] = col;
  }
  return d;
}

double checked(const Ratio& r, const char* what) { return r.get(what); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pass-through and welfare computations for symmetric and heterogeneous oligopoly";

  // translators run last-registered first, so the base class goes first
  py::register_exception<Error>(m, "OligoError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UndefinedRatio>(m, "UndefinedRatio", PyExc_ArithmeticError);

  m.def(
      "solve", [](const py::object& config) { return from_json(cli::solve_json(cli::parse_config(to_json(config)), 0)); },
      py::arg("config"), "Solve one scenario given a config (dict or JSON text).");

  m.def(
      "sweep",
      [](const py::object& config, int threads) {
        const cli::Config c = cli::parse_config(to_json(config));
        py::gil_scoped_release release;
        cli::Table t = cli::sweep_table(c, threads);
        py::gil_scoped_acquire acquire;
        return columns(t);
      },
      py::arg("config"), py::arg("threads") = 0, "Run the config's sweep; returns a dict of columns.");

  m.def(
      "figure",
      [](int id, int points, const std::string& curvature) {
        cli::Table t;
        if (id == 1) {
          cli::Figure1Options o;
          o.points = points;
          t = cli::figure1(o);
        } else if (id == 2) {
          cli::Figure2Options o;
          o.points = points;
          t = cli::figure2(o);
        } else if (id == 3) {
          cli::Figure3Options o;
          o.points = points;
          o.curvature = cli::curvature_from_string(curvature);
          t = cli::figure3(o);
        } else {
          throw ConfigError("figure id must be 1, 2 or 3");
        }
        return columns(t);
      },
      py::arg("id"), py::arg("points") = 101, py::arg("curvature") = "exact");

  m.def(
      "validate",
      [](bool corrupted, std::uint64_t seed, int per_combination) {
        ValidationOptions o;
        o.seed = seed;
        o.corrupt = corrupted;
        o.per_combination = per_combination;
        std::string text;
        {
          py::gil_scoped_release release;
          ValidationSuite s = default_suite(o);
          cli::add_figure_checks(s);
          text = s.run(seed, corrupted ? "corrupted" : "default", 0).to_json(false);
        }
        return from_json(ordered_json::parse(text));
      },
      py::arg("corrupted") = false, py::arg("seed") = ValidationOptions{}.seed, py::arg("per_combination") = 6);

  m.def(
      "hetero_linear_passthrough",
      [](const Vec& b, const Vec& lambda, double mu, const std::vector<double>& mc, double t, double v) {
        const int n = static_cast<int>(b.size());
        if (lambda.size() != n || static_cast<int>(mc.size()) != n) throw ConfigError("b, lambda and mc need equal length");
        HeteroMarket hm;
        hm.demand = HeteroLinearDemand::from_direct(b, lambda, mu);
        for (int i = 0; i < n; ++i) {
          hm.costs.push_back(constant_cost(mc[i]));
          hm.schemes.push_back(scheme_unit_adval());
        }
        const std::vector<double> T{t, v};
        const Vec p = solve_hetero(hm, T, (b.array() / lambda.array()).matrix() * 0.5 + Vec::Constant(n, 0.5 * mc[0]));
        const HeteroPoint pt = hetero_point(hm, p, T);
        const PassThroughMatrix ptm = passthrough_matrix(hm, pt);
        const HeteroRatios r = hetero_welfare_ratios(pt, ptm);
        py::dict d;
        d["p"] = pt.p;
        d["q"] = pt.q;
        d["rho_tilde"] = ptm.rho_tilde;
        d["MC"] = r.MC;
        d["total_MC"] = r.total_MC;
        d["condition"] = ptm.condition;
        return d;
      },
      py::arg("b"), py::arg("lambda_"), py::arg("mu"), py::arg("mc"), py::arg("t") = 0.0, py::arg("v") = 0.0,
      "Asymmetric linear price competition: equilibrium and pass-through matrix.");

  m.def("mc_unit", [](double theta, double eps, double tau, double v, double rho_t) {
    return checked(mc_unit(theta, eps, tau, v, rho_t), "MC_t");
  });
  m.def("mc_adval", [](double theta, double eps, double tau, double v, double rho_v) {
    return checked(mc_adval(theta, eps, tau, v, rho_v), "MC_v");
  });
  m.def("incidence", [](double theta, double v, double rho) { return checked(incidence(theta, v, rho), "I"); });
  m.def("rho_v_from_rho_t", &rho_v_from_rho_t, py::arg("rho_t"), py::arg("theta"), py::arg("eps"));
  m.def(
      "linear_closed_form",
      [](int n, double mu, double t, double v, const std::string& mode, double mc) {
        const auto r = linear_closed_form({.b = 1, .lambda = 1, .mu = mu, .n = n}, t, v,
                                          mode == "quantity" ? Mode::quantity : Mode::price, mc);
        return py::make_tuple(r.p, r.q);
      },
      py::arg("n"), py::arg("mu"), py::arg("t") = 0.0, py::arg("v") = 0.0, py::arg("mode") = "price",
      py::arg("mc") = 0.0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"oligo"};
        for (const auto& a : args) argv.push_back(a.c_str());
        return cli::run(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Run the command-line tool in-process; returns its exit code.");
}
