#include "oligo/scenario.hpp"

#include <cmath>
#include <random>

#include "oligo/errors.hpp"

namespace oligo {

int DemandSpec::n() const {
  switch (family) {
    case DemandFamily::linear: return linear.n;
    case DemandFamily::logit: return logit.n;
    case DemandFamily::constant_elasticity: return ce.n;
  }
  return 0;
}

void DemandSpec::set_n(int n) { linear.n = logit.n = ce.n = n; }

DemandPtr build_demand(const DemandSpec& s) {
  switch (s.family) {
    case DemandFamily::linear: return linear_demand(s.linear);
    case DemandFamily::logit: return logit_demand(s.logit);
    case DemandFamily::constant_elasticity: return constant_elasticity_demand(s.ce);
  }
  throw ConfigError("unknown demand family");
}

CostPtr build_cost(const CostSpec& s) {
  switch (s.kind) {
    case CostKind::constant: return std::make_shared<ConstantMarginalCost>(s.m0, s.fixed);
    case CostKind::linear_mc: return std::make_shared<LinearMarginalCost>(s.m0, s.m1, s.fixed);
    case CostKind::power: return std::make_shared<PowerCost>(s.k, s.gamma);
  }
  throw ConfigError("unknown cost kind");
}

ConductModel build_conduct(const ConductSpec& s) {
  switch (s.kind) {
    case ConductKind::price: return ConductModel::price_competition();
    case ConductKind::quantity: return ConductModel::quantity_competition();
    case ConductKind::constant_theta: return ConductModel::constant(s.theta);
    case ConductKind::user: break;
  }
  throw ConfigError("conduct: user-supplied conduct cannot be built from a scenario");
}

SchemePtr build_scheme(const SchemeSpec& s, const DemandPtr& demand, const CostPtr& cost) {
  SchemePtr base;
  switch (s.kind) {
    case SchemeKind::unit_adval: base = scheme_unit_adval(); break;
    case SchemeKind::exogenous_competition: base = scheme_exogenous_competition(cost); break;
    case SchemeKind::sales_restriction: base = scheme_sales_restriction(demand); break;
    case SchemeKind::evasion: base = scheme_tax_evasion(s.zeta_c, s.xi_c); break;
    case SchemeKind::cost_shift: base = scheme_cost_shift(); break;
  }
  if (!base) throw ConfigError("unknown scheme kind");
  return s.marginal_taxes ? with_marginal_taxes(base) : base;
}

Market build_market(const ScenarioSpec& s) {
  Market m;
  m.demand = build_demand(s.demand);
  m.cost = build_cost(s.cost);
  m.conduct = build_conduct(s.conduct);
  m.scheme = build_scheme(s.scheme, m.demand, m.cost);
  m.scheme->check_taxes(s.T);
  return m;
}

ScenarioSpec rescale_currency(const ScenarioSpec& spec, double c) {
  if (!(c > 0)) throw ConfigError("rescale: factor must be positive");
  ScenarioSpec r = spec;
  r.demand.linear.lambda /= c;
  r.demand.linear.mu /= c;
  r.demand.logit.beta /= c;
  r.demand.ce.A *= std::pow(c, spec.demand.ce.eps0);
  r.cost.m0 *= c;
  r.cost.m1 *= c;
  r.cost.k *= c;
  r.cost.fixed *= c;
  const Market m = build_market(spec);
  const auto dims = m.scheme->dimensions();
  for (std::size_t l = 0; l < dims.size() && l < r.T.size(); ++l) {
    if (dims[l] == "t" || dims[l] == "dt" || dims[l] == "z") r.T[l] *= c;
    if (dims[l] == "lam_c") r.T[l] *= std::pow(c, 1 - spec.scheme.zeta_c);
  }
  return r;
}

// ---------------------------------------------------------------- generator

namespace {

struct Scale {
  double price, quantity;
};

Scale scale_of(const DemandSpec& d) {
  switch (d.family) {
    case DemandFamily::linear: {
      const double L = d.linear.lambda - (d.linear.n - 1) * d.linear.mu;
      return {d.linear.b / L, d.linear.b};
    }
    case DemandFamily::logit: return {1 / d.logit.beta, 1.0 / (d.logit.n + 1)};
    case DemandFamily::constant_elasticity: return {1.0, d.ce.A};
  }
  return {1, 1};
}

bool solvable(const ScenarioSpec& s, SymmetricEquilibrium* out) {
  try {
    const Market m = build_market(s);
    SymmetricEquilibrium e = solve_symmetric(m, s.T);
    if (!e.soc_ok || !std::isfinite(e.p_star)) return false;
    if (out) *out = e;
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::vector<ScenarioSpec> generate_scenarios(std::uint64_t seed, int per_combination,
                                             const std::vector<SchemeKind>& schemes) {
  std::mt19937_64 rng(seed);
  auto U = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto N = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };

  const DemandFamily families[] = {DemandFamily::linear, DemandFamily::logit, DemandFamily::constant_elasticity};
  const ConductKind conducts[] = {ConductKind::price, ConductKind::quantity, ConductKind::constant_theta};

  std::vector<ScenarioSpec> out;
  for (DemandFamily fam : families) {
    for (ConductKind ck : conducts) {
      for (SchemeKind sk : schemes) {
        int made = 0, attempts = 0;
        while (made < per_combination) {
          if (++attempts > 200 * per_combination) {
            throw ConfigError("scenario generator: could not draw solvable " + to_string(fam) + "/" + to_string(ck) +
                              "/" + to_string(sk) + " scenarios");
          }
          ScenarioSpec s;
          s.demand.family = fam;
          const int n = N(1, 4);
          s.demand.set_n(n);
          s.demand.linear.b = U(5, 15);
          s.demand.linear.lambda = U(1, 3);
          s.demand.linear.mu = n > 1 ? U(0, 0.6) * s.demand.linear.lambda / (n - 1) : 0;
          s.demand.logit.delta = U(0.5, 3);
          s.demand.logit.beta = U(0.5, 2);
          s.demand.ce.A = U(1, 5);
          s.demand.ce.eps0 = U(1.5, 4);
          s.demand.ce.gamma = s.demand.ce.eps0 + U(0, 3);
          s.conduct.kind = ck;
          s.conduct.theta = U(0.2, 0.9);

          const Scale sc = scale_of(s.demand);
          s.cost.kind = CostKind::linear_mc;
          s.cost.m0 = U(0.05, 0.4) * sc.price;
          s.cost.m1 = U(0, 0.2) * sc.price / sc.quantity;

          s.scheme.kind = sk;
          s.scheme.marginal_taxes = true;
          s.scheme.zeta_c = U(0.5, 1.5);
          s.scheme.xi_c = U(0, 0.5);

          // zero-tax equilibrium sets the scale of the interventions
          ScenarioSpec probe = s;
          probe.scheme.kind = SchemeKind::unit_adval;
          probe.scheme.marginal_taxes = false;
          probe.T = {0, 0};
          SymmetricEquilibrium e0;
          if (!solvable(probe, &e0)) continue;

          const double t = U(0, 0.15) * e0.p_star, v = U(0.02, 0.3);
          switch (sk) {
            case SchemeKind::unit_adval: s.T = {t, v}; break;
            case SchemeKind::exogenous_competition: s.T = {t, v, U(0.05, 0.3) * e0.q_star}; break;
            case SchemeKind::sales_restriction: s.T = {t, v, U(0.02, 0.25)}; break;
            case SchemeKind::evasion:
              s.T = {t, v,
                     U(0.05, 0.5) * std::pow(e0.p_star, 1 - s.scheme.zeta_c) * std::pow(e0.q_star, -s.scheme.xi_c)};
              break;
            case SchemeKind::cost_shift: s.T = {t, v, U(0, 0.15) * e0.p_star}; break;
          }
          s.T.push_back(0);
          s.T.push_back(0);
          if (!solvable(s, nullptr)) continue;
          s.label = to_string(fam) + "/" + to_string(ck) + "/" + to_string(sk) + "/" + std::to_string(made);
          out.push_back(std::move(s));
          ++made;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- names

std::string to_string(DemandFamily f) {
  switch (f) {
    case DemandFamily::linear: return "linear";
    case DemandFamily::logit: return "logit";
    case DemandFamily::constant_elasticity: return "constant_elasticity";
  }
  return "?";
}

std::string to_string(CostKind k) {
  switch (k) {
    case CostKind::constant: return "constant";
    case CostKind::linear_mc: return "linear_mc";
    case CostKind::power: return "power";
  }
  return "?";
}

std::string to_string(ConductKind k) {
  switch (k) {
    case ConductKind::price: return "price";
    case ConductKind::quantity: return "quantity";
    case ConductKind::constant_theta: return "constant_theta";
    case ConductKind::user: return "user";
  }
  return "?";
}

std::string to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::unit_adval: return "unit_adval";
    case SchemeKind::exogenous_competition: return "exogenous_competition";
    case SchemeKind::sales_restriction: return "sales_restriction";
    case SchemeKind::evasion: return "evasion";
    case SchemeKind::cost_shift: return "cost_shift";
  }
  return "?";
}

DemandFamily demand_family_from_string(const std::string& s) {
  if (s == "linear") return DemandFamily::linear;
  if (s == "logit") return DemandFamily::logit;
  if (s == "constant_elasticity") return DemandFamily::constant_elasticity;
  throw ConfigError("unknown demand family '" + s + "'");
}

CostKind cost_kind_from_string(const std::string& s) {
  if (s == "constant") return CostKind::constant;
  if (s == "linear_mc") return CostKind::linear_mc;
  if (s == "power") return CostKind::power;
  throw ConfigError("unknown cost kind '" + s + "'");
}

ConductKind conduct_kind_from_string(const std::string& s) {
  if (s == "price") return ConductKind::price;
  if (s == "quantity") return ConductKind::quantity;
  if (s == "constant_theta") return ConductKind::constant_theta;
  throw ConfigError("unknown conduct '" + s + "'");
}

SchemeKind scheme_kind_from_string(const std::string& s) {
  if (s == "unit_adval") return SchemeKind::unit_adval;
  if (s == "exogenous_competition") return SchemeKind::exogenous_competition;
  if (s == "sales_restriction") return SchemeKind::sales_restriction;
  if (s == "evasion") return SchemeKind::evasion;
  if (s == "cost_shift") return SchemeKind::cost_shift;
  throw ConfigError("unknown scheme '" + s + "'");
}

}  // namespace oligo
