#include "oligo/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "oligo/errors.hpp"

namespace oligo::cli {

using nlohmann::ordered_json;

Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ConfigError("format: expected 'csv' or 'json', got '" + s + "'");
}

std::string to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

void require_object(const ordered_json& j, const std::string& field) {
  if (!j.is_object()) fail(field, "expected an object");
}

void only_keys(const ordered_json& j, const std::string& field, const std::set<std::string>& allowed) {
  require_object(j, field);
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) fail(field.empty() ? k : field + "." + k, "unknown key");
  }
}

std::string path(const std::string& field, const std::string& key) { return field.empty() ? key : field + "." + key; }

double get_number(const ordered_json& j, const std::string& field, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) fail(path(field, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path(field, key), "must be finite");
  return x;
}

int get_int(const ordered_json& j, const std::string& field, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) fail(path(field, key), "expected an integer");
  return v.get<int>();
}

bool get_bool(const ordered_json& j, const std::string& field, const std::string& key, bool fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_boolean()) fail(path(field, key), "expected true or false");
  return v.get<bool>();
}

std::string get_string(const ordered_json& j, const std::string& field, const std::string& key,
                       const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) fail(path(field, key), "expected a string");
  return v.get<std::string>();
}

template <class F>
auto named(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    fail(field, e.what());
  }
}

DemandSpec parse_demand(const ordered_json& j) {
  require_object(j, "demand");
  if (!j.contains("family")) fail("demand.family", "required");
  DemandSpec d;
  d.family = named("demand.family", [&] { return demand_family_from_string(get_string(j, "demand", "family", "")); });
  switch (d.family) {
    case DemandFamily::linear:
      only_keys(j, "demand", {"family", "n", "b", "lambda", "mu"});
      d.linear.b = get_number(j, "demand", "b", d.linear.b);
      d.linear.lambda = get_number(j, "demand", "lambda", d.linear.lambda);
      d.linear.mu = get_number(j, "demand", "mu", d.linear.mu);
      break;
    case DemandFamily::logit:
      only_keys(j, "demand", {"family", "n", "delta", "beta"});
      d.logit.delta = get_number(j, "demand", "delta", d.logit.delta);
      d.logit.beta = get_number(j, "demand", "beta", d.logit.beta);
      break;
    case DemandFamily::constant_elasticity:
      only_keys(j, "demand", {"family", "n", "A", "eps0", "gamma"});
      d.ce.A = get_number(j, "demand", "A", d.ce.A);
      d.ce.eps0 = get_number(j, "demand", "eps0", d.ce.eps0);
      d.ce.gamma = get_number(j, "demand", "gamma", d.ce.gamma);
      break;
  }
  const int n = get_int(j, "demand", "n", 1);
  if (n < 1) fail("demand.n", "must be at least 1");
  d.set_n(n);
  return d;
}

CostSpec parse_cost(const ordered_json& j) {
  require_object(j, "cost");
  CostSpec c;
  c.kind = named("cost.kind", [&] { return cost_kind_from_string(get_string(j, "cost", "kind", "constant")); });
  switch (c.kind) {
    case CostKind::constant:
      only_keys(j, "cost", {"kind", "mc", "fixed"});
      c.m0 = get_number(j, "cost", "mc", 0);
      break;
    case CostKind::linear_mc:
      only_keys(j, "cost", {"kind", "m0", "m1", "fixed"});
      c.m0 = get_number(j, "cost", "m0", 0);
      c.m1 = get_number(j, "cost", "m1", 0);
      break;
    case CostKind::power:
      only_keys(j, "cost", {"kind", "k", "gamma"});
      c.k = get_number(j, "cost", "k", 1);
      c.gamma = get_number(j, "cost", "gamma", 1);
      break;
  }
  c.fixed = get_number(j, "cost", "fixed", 0);
  return c;
}

ConductSpec parse_conduct(const ordered_json& j) {
  require_object(j, "conduct");
  ConductSpec c;
  c.kind = named("conduct.kind", [&] { return conduct_kind_from_string(get_string(j, "conduct", "kind", "price")); });
  if (c.kind == ConductKind::constant_theta) {
    only_keys(j, "conduct", {"kind", "theta"});
    if (!j.contains("theta")) fail("conduct.theta", "required for constant_theta");
    c.theta = get_number(j, "conduct", "theta", 1);
    if (!(c.theta >= 0 && c.theta <= 1)) fail("conduct.theta", "must lie in [0, 1]");
  } else {
    only_keys(j, "conduct", {"kind"});
  }
  return c;
}

SchemeSpec parse_scheme(const ordered_json& j) {
  require_object(j, "scheme");
  SchemeSpec s;
  s.kind = named("scheme.kind", [&] { return scheme_kind_from_string(get_string(j, "scheme", "kind", "unit_adval")); });
  if (s.kind == SchemeKind::evasion) {
    only_keys(j, "scheme", {"kind", "marginal_taxes", "zeta_c", "xi_c"});
    s.zeta_c = get_number(j, "scheme", "zeta_c", s.zeta_c);
    s.xi_c = get_number(j, "scheme", "xi_c", s.xi_c);
  } else {
    only_keys(j, "scheme", {"kind", "marginal_taxes"});
  }
  s.marginal_taxes = get_bool(j, "scheme", "marginal_taxes", false);
  return s;
}

std::vector<double> parse_taxes(const ordered_json& j, const std::vector<std::string>& dims) {
  std::vector<double> T(dims.size(), 0.0);
  if (j.is_array()) {
    if (j.size() != dims.size()) {
      fail("taxes", "expected " + std::to_string(dims.size()) + " values for the scheme's dimensions");
    }
    for (std::size_t l = 0; l < dims.size(); ++l) {
      if (!j[l].is_number()) fail("taxes[" + std::to_string(l) + "]", "expected a number");
      T[l] = j[l].get<double>();
    }
    return T;
  }
  require_object(j, "taxes");
  const std::set<std::string> allowed(dims.begin(), dims.end());
  only_keys(j, "taxes", allowed);
  for (std::size_t l = 0; l < dims.size(); ++l) T[l] = get_number(j, "taxes", dims[l], 0);
  return T;
}

SolverOptions parse_solver(const ordered_json& j) {
  only_keys(j, "solver", {"tol_rel", "tol_abs", "max_iter", "scan_points", "policy"});
  SolverOptions o;
  o.tol_rel = get_number(j, "solver", "tol_rel", o.tol_rel);
  o.tol_abs = get_number(j, "solver", "tol_abs", o.tol_abs);
  o.max_iter = get_int(j, "solver", "max_iter", o.max_iter);
  o.scan_points = get_int(j, "solver", "scan_points", o.scan_points);
  const std::string pol = get_string(j, "solver", "policy", "unique");
  if (pol == "unique") {
    o.policy = RootPolicy::unique;
  } else if (pol == "largest_q") {
    o.policy = RootPolicy::largest_q;
  } else {
    fail("solver.policy", "expected 'unique' or 'largest_q'");
  }
  if (!(o.tol_rel >= 0) || !(o.tol_abs >= 0)) fail("solver", "tolerances must be non-negative");
  if (o.max_iter < 1) fail("solver.max_iter", "must be positive");
  if (o.scan_points < 3) fail("solver.scan_points", "must be at least 3");
  return o;
}

Axis parse_axis(const ordered_json& j, const std::string& field) {
  require_object(j, field);
  Axis a;
  a.param = get_string(j, field, "param", "");
  if (a.param.empty()) fail(field + ".param", "required");
  if (j.contains("values")) {
    only_keys(j, field, {"param", "values"});
    const auto& v = j.at("values");
    if (!v.is_array() || v.empty()) fail(field + ".values", "expected a nonempty array");
    for (const auto& x : v) {
      if (!x.is_number()) fail(field + ".values", "expected numbers");
      a.values.push_back(x.get<double>());
    }
    return a;
  }
  only_keys(j, field, {"param", "from", "to", "steps"});
  for (const char* k : {"from", "to", "steps"}) {
    if (!j.contains(k)) fail(field + "." + k, "required");
  }
  const double lo = get_number(j, field, "from", 0), hi = get_number(j, field, "to", 0);
  const int steps = get_int(j, field, "steps", 0);
  if (steps < 1) fail(field + ".steps", "must be at least 1");
  if (steps == 1 && lo != hi) fail(field + ".steps", "a single step needs from == to");
  for (int k = 0; k < steps; ++k) a.values.push_back(steps == 1 ? lo : lo + (hi - lo) * k / (steps - 1));
  return a;
}

SweepSpec parse_sweep(const ordered_json& j, const ScenarioSpec& s) {
  only_keys(j, "sweep", {"axes", "threads", "v_flag_threshold"});
  SweepSpec w;
  if (!j.contains("axes") || !j.at("axes").is_array() || j.at("axes").empty()) {
    fail("sweep.axes", "expected a nonempty array");
  }
  std::set<std::string> seen;
  for (std::size_t k = 0; k < j.at("axes").size(); ++k) {
    const std::string field = "sweep.axes[" + std::to_string(k) + "]";
    Axis a = parse_axis(j.at("axes")[k], field);
    named(field + ".param", [&] {
      check_parameter(s, a.param);
      return 0;
    });
    if (!seen.insert(a.param).second) fail(field + ".param", "duplicate axis '" + a.param + "'");
    w.axes.push_back(std::move(a));
  }
  w.threads = get_int(j, "sweep", "threads", 0);
  if (w.threads < 0) fail("sweep.threads", "must be non-negative");
  w.v_flag_threshold = get_number(j, "sweep", "v_flag_threshold", w.v_flag_threshold);
  return w;
}

}  // namespace

std::vector<std::string> dimension_names(const ScenarioSpec& s) {
  const DemandPtr d = build_demand(s.demand);
  const CostPtr c = build_cost(s.cost);
  return build_scheme(s.scheme, d, c)->dimensions();
}

Config parse_config(const ordered_json& j) {
  only_keys(j, "", {"version", "demand", "cost", "conduct", "scheme", "taxes", "solver", "sweep", "format"});
  if (!j.contains("version")) fail("version", "required");
  Config c;
  c.version = get_int(j, "", "version", 0);
  if (c.version != kConfigVersion) fail("version", "unsupported version " + std::to_string(c.version));
  if (!j.contains("demand")) fail("demand", "required");
  c.scenario.demand = parse_demand(j.at("demand"));
  if (j.contains("cost")) c.scenario.cost = parse_cost(j.at("cost"));
  if (j.contains("conduct")) c.scenario.conduct = parse_conduct(j.at("conduct"));
  if (j.contains("scheme")) c.scenario.scheme = parse_scheme(j.at("scheme"));
  // building the demand validates its parameters
  const std::vector<std::string> dims = named("demand", [&] { return dimension_names(c.scenario); });
  c.scenario.T = j.contains("taxes") ? parse_taxes(j.at("taxes"), dims) : std::vector<double>(dims.size(), 0.0);
  if (j.contains("solver")) c.solver = parse_solver(j.at("solver"));
  if (j.contains("sweep")) c.sweep = parse_sweep(j.at("sweep"), c.scenario);
  if (j.contains("format")) {
    c.format = named("format", [&] { return format_from_string(get_string(j, "", "format", "csv")); });
    c.has_format = true;
  }
  named("taxes", [&] {
    build_market(c.scenario);
    return 0;
  });
  return c;
}

Config load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config: cannot open '" + file + "'");
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: '" + file + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

ordered_json config_to_json(const Config& c) {
  const ScenarioSpec& s = c.scenario;
  ordered_json j;
  j["version"] = c.version;
  ordered_json d;
  d["family"] = to_string(s.demand.family);
  d["n"] = s.demand.n();
  switch (s.demand.family) {
    case DemandFamily::linear:
      d["b"] = s.demand.linear.b;
      d["lambda"] = s.demand.linear.lambda;
      d["mu"] = s.demand.linear.mu;
      break;
    case DemandFamily::logit:
      d["delta"] = s.demand.logit.delta;
      d["beta"] = s.demand.logit.beta;
      break;
    case DemandFamily::constant_elasticity:
      d["A"] = s.demand.ce.A;
      d["eps0"] = s.demand.ce.eps0;
      d["gamma"] = s.demand.ce.gamma;
      break;
  }
  j["demand"] = d;
  ordered_json co;
  co["kind"] = to_string(s.cost.kind);
  switch (s.cost.kind) {
    case CostKind::constant:
      co["mc"] = s.cost.m0;
      co["fixed"] = s.cost.fixed;
      break;
    case CostKind::linear_mc:
      co["m0"] = s.cost.m0;
      co["m1"] = s.cost.m1;
      co["fixed"] = s.cost.fixed;
      break;
    case CostKind::power:
      co["k"] = s.cost.k;
      co["gamma"] = s.cost.gamma;
      break;
  }
  j["cost"] = co;
  ordered_json cd;
  cd["kind"] = to_string(s.conduct.kind);
  if (s.conduct.kind == ConductKind::constant_theta) cd["theta"] = s.conduct.theta;
  j["conduct"] = cd;
  ordered_json sc;
  sc["kind"] = to_string(s.scheme.kind);
  sc["marginal_taxes"] = s.scheme.marginal_taxes;
  if (s.scheme.kind == SchemeKind::evasion) {
    sc["zeta_c"] = s.scheme.zeta_c;
    sc["xi_c"] = s.scheme.xi_c;
  }
  j["scheme"] = sc;
  ordered_json T = ordered_json::object();
  const auto dims = dimension_names(s);
  for (std::size_t l = 0; l < dims.size(); ++l) T[dims[l]] = s.T[l];
  j["taxes"] = T;
  ordered_json so;
  so["tol_rel"] = c.solver.tol_rel;
  so["tol_abs"] = c.solver.tol_abs;
  so["max_iter"] = c.solver.max_iter;
  so["scan_points"] = c.solver.scan_points;
  so["policy"] = c.solver.policy == RootPolicy::unique ? "unique" : "largest_q";
  j["solver"] = so;
  if (!c.sweep.axes.empty()) {
    ordered_json w;
    ordered_json axes = ordered_json::array();
    for (const Axis& a : c.sweep.axes) axes.push_back({{"param", a.param}, {"values", a.values}});
    w["axes"] = axes;
    w["threads"] = c.sweep.threads;
    w["v_flag_threshold"] = c.sweep.v_flag_threshold;
    j["sweep"] = w;
  }
  if (c.has_format) j["format"] = to_string(c.format);
  return j;
}

// ---------------------------------------------------------------- parameters

namespace {

double* parameter_slot(ScenarioSpec& s, const std::string& p, bool* is_int) {
  *is_int = false;
  const DemandFamily f = s.demand.family;
  if (p == "demand.n") {
    *is_int = true;
    return nullptr;
  }
  if (f == DemandFamily::linear) {
    if (p == "demand.b") return &s.demand.linear.b;
    if (p == "demand.lambda") return &s.demand.linear.lambda;
    if (p == "demand.mu") return &s.demand.linear.mu;
  }
  if (f == DemandFamily::logit) {
    if (p == "demand.delta") return &s.demand.logit.delta;
    if (p == "demand.beta") return &s.demand.logit.beta;
  }
  if (f == DemandFamily::constant_elasticity) {
    if (p == "demand.A") return &s.demand.ce.A;
    if (p == "demand.eps0") return &s.demand.ce.eps0;
    if (p == "demand.gamma") return &s.demand.ce.gamma;
  }
  switch (s.cost.kind) {
    case CostKind::constant:
      if (p == "cost.mc") return &s.cost.m0;
      if (p == "cost.fixed") return &s.cost.fixed;
      break;
    case CostKind::linear_mc:
      if (p == "cost.m0") return &s.cost.m0;
      if (p == "cost.m1") return &s.cost.m1;
      if (p == "cost.fixed") return &s.cost.fixed;
      break;
    case CostKind::power:
      if (p == "cost.k") return &s.cost.k;
      if (p == "cost.gamma") return &s.cost.gamma;
      break;
  }
  if (p == "conduct.theta" && s.conduct.kind == ConductKind::constant_theta) return &s.conduct.theta;
  if (s.scheme.kind == SchemeKind::evasion) {
    if (p == "scheme.zeta_c") return &s.scheme.zeta_c;
    if (p == "scheme.xi_c") return &s.scheme.xi_c;
  }
  if (p.rfind("taxes.", 0) == 0) {
    const std::string name = p.substr(6);
    const auto dims = dimension_names(s);
    for (std::size_t l = 0; l < dims.size(); ++l) {
      if (dims[l] == name) {
        if (s.T.size() != dims.size()) s.T.resize(dims.size(), 0.0);
        return &s.T[l];
      }
    }
  }
  throw ConfigError("parameter '" + p + "' does not apply to this scenario");
}

}  // namespace

void check_parameter(const ScenarioSpec& s, const std::string& param) {
  ScenarioSpec copy = s;
  bool is_int = false;
  parameter_slot(copy, param, &is_int);
}

void set_parameter(ScenarioSpec& s, const std::string& param, double value) {
  bool is_int = false;
  double* slot = parameter_slot(s, param, &is_int);
  if (is_int) {
    if (value != std::floor(value) || value < 1) throw ConfigError("parameter '" + param + "' needs a positive integer");
    s.demand.set_n(static_cast<int>(value));
    return;
  }
  *slot = value;
}

}  // namespace oligo::cli
