#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oligo/equilibrium.hpp"

namespace oligo {

enum class DemandFamily { linear, logit, constant_elasticity };

struct DemandSpec {
  DemandFamily family = DemandFamily::linear;
  LinearDemandParams linear;
  LogitDemandParams logit;
  ConstantElasticityParams ce;
  int n() const;
  void set_n(int n);
};

enum class CostKind { constant, linear_mc, power };

struct CostSpec {
  CostKind kind = CostKind::constant;
  double m0 = 0, m1 = 0;      // constant: mc = m0; linear_mc: mc = m0 + m1 q
  double k = 1, gamma = 1;    // power: c = k q^gamma
  double fixed = 0;
};

struct ConductSpec {
  ConductKind kind = ConductKind::price;
  double theta = 1;  // constant_theta only
};

enum class SchemeKind { unit_adval, exogenous_competition, sales_restriction, evasion, cost_shift };

struct SchemeSpec {
  SchemeKind kind = SchemeKind::unit_adval;
  double zeta_c = 1, xi_c = 0;  // evasion exponents
  bool marginal_taxes = false;  // append (dt, dv)
};

struct ScenarioSpec {
  std::string label;
  DemandSpec demand;
  CostSpec cost;
  ConductSpec conduct;
  SchemeSpec scheme;
  std::vector<double> T;
};

DemandPtr build_demand(const DemandSpec& spec);
CostPtr build_cost(const CostSpec& spec);
ConductModel build_conduct(const ConductSpec& spec);
SchemePtr build_scheme(const SchemeSpec& spec, const DemandPtr& demand, const CostPtr& cost);
Market build_market(const ScenarioSpec& spec);

// Restates the scenario in a currency unit 1/c of the original: prices,
// unit taxes and costs are multiplied by c.
ScenarioSpec rescale_currency(const ScenarioSpec& spec, double c);

// Seeded draws across family x conduct x scheme, `per_combination` each.
// Draws whose equilibrium is not unique or does not exist are redrawn.
std::vector<ScenarioSpec> generate_scenarios(std::uint64_t seed, int per_combination,
                                             const std::vector<SchemeKind>& schemes);

std::string to_string(DemandFamily f);
std::string to_string(CostKind k);
std::string to_string(ConductKind k);
std::string to_string(SchemeKind k);
DemandFamily demand_family_from_string(const std::string& s);
CostKind cost_kind_from_string(const std::string& s);
ConductKind conduct_kind_from_string(const std::string& s);
SchemeKind scheme_kind_from_string(const std::string& s);

}  // namespace oligo
