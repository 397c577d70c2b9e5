#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "oligo/cli/commands.hpp"
#include "oligo/cli/config.hpp"
#include "oligo/cli/figures.hpp"
#include "oligo/cli/output.hpp"
#include "oligo/errors.hpp"

using namespace oligo;
using namespace oligo::cli;
using nlohmann::ordered_json;

namespace {

ordered_json base_config() {
  return ordered_json::parse(R"({
    "version": 1,
    "demand": {"family": "logit", "n": 3, "delta": 1, "beta": 1.2},
    "cost": {"kind": "linear_mc", "m0": 0.1, "m1": 0.2},
    "conduct": {"kind": "price"},
    "scheme": {"kind": "unit_adval"},
    "taxes": {"t": 0.05, "v": 0.1}
  })");
}

}  // namespace

TEST(Config, RoundTrips) {
  auto j = base_config();
  j["sweep"] = ordered_json::parse(R"({"axes": [{"param": "demand.n", "values": [1, 2]}], "threads": 2})");
  j["solver"] = ordered_json::parse(R"({"tol_rel": 1e-11, "policy": "largest_q"})");
  Config c = parse_config(j);
  Config c2 = parse_config(config_to_json(c));
  EXPECT_EQ(config_to_json(c).dump(), config_to_json(c2).dump());
  EXPECT_EQ(c2.solver.policy, RootPolicy::largest_q);
  EXPECT_EQ(c2.sweep.axes[0].values.size(), 2u);
}

TEST(Config, UnknownKeysRejected) {
  auto j = base_config();
  j["extra"] = 1;
  EXPECT_THROW(parse_config(j), ConfigError);
  j = base_config();
  j["demand"]["mu"] = 0.1;  // not a logit parameter
  EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, VersionRequired) {
  auto j = base_config();
  j.erase("version");
  EXPECT_THROW(parse_config(j), ConfigError);
  j["version"] = 99;
  EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, ErrorNamesField) {
  auto j = base_config();
  j["demand"]["beta"] = "high";
  try {
    parse_config(j);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("demand.beta"), std::string::npos);
  }
}

TEST(Config, SweepParameterMustApply) {
  Config c = parse_config(base_config());
  EXPECT_NO_THROW(check_parameter(c.scenario, "demand.beta"));
  EXPECT_NO_THROW(check_parameter(c.scenario, "taxes.v"));
  EXPECT_THROW(check_parameter(c.scenario, "demand.lambda"), ConfigError);
  EXPECT_THROW(check_parameter(c.scenario, "taxes.q_exo"), ConfigError);
}

TEST(Output, CsvEscaping) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"x\""), "\"say \"\"x\"\"\"");
  EXPECT_EQ(csv_escape("line\nbreak"), "\"line\nbreak\"");
}

TEST(Output, CsvLayout) {
  Table t{{"x", "note"}, {{1.5, std::string("a,b")}, {kNaN, std::string("")}}};
  std::ostringstream os;
  write_csv(os, t);
  EXPECT_EQ(os.str(), "x,note\r\n1.5,\"a,b\"\r\n,\r\n");
}

TEST(Output, DoublesRoundTrip) {
  for (double x : {0.1, 1.0 / 3, 1e-300, 123456789.125, -2.5e-7}) EXPECT_EQ(std::stod(format_double(x)), x);
  EXPECT_EQ(format_double(kNaN), "");
}

TEST(Output, JsonNullForNaN) {
  Table t{{"x"}, {{kNaN}, {2.0}}};
  auto j = table_to_json(t, "s/1");
  EXPECT_TRUE(j["rows"][0][0].is_null());
  EXPECT_EQ(j["rows"][1][0].get<double>(), 2.0);
}

TEST(Solve, SinglePointSweepEqualsSolve) {
  auto j = base_config();
  j["sweep"] = ordered_json::parse(R"({"axes": [{"param": "taxes.v", "values": [0.1]}]})");
  Config c = parse_config(j);
  Table s = solve_table(c), w = sweep_table(c, 1);
  ASSERT_EQ(w.rows.size(), 1u);
  for (const auto& col : s.columns) {
    if (col == "flags") continue;
    EXPECT_EQ(s.number(0, col), w.number(0, col)) << col;
  }
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  auto j = base_config();
  j["sweep"] = ordered_json::parse(
      R"({"axes": [{"param": "demand.n", "values": [1, 2, 4]}, {"param": "taxes.t", "from": 0, "to": 0.2, "steps": 5}]})");
  Config c = parse_config(j);
  std::ostringstream a, b;
  write_csv(a, sweep_table(c, 1));
  write_csv(b, sweep_table(c, 4));
  EXPECT_EQ(a.str(), b.str());
  Table t = sweep_table(c, 2);
  ASSERT_EQ(t.rows.size(), 15u);
  EXPECT_EQ(t.number(0, "demand.n"), 1);
  EXPECT_EQ(t.number(5, "demand.n"), 2);
  EXPECT_EQ(t.number(1, "taxes.t"), 0.05);
}

TEST(Sweep, FailedRowsAreFlaggedNotFatal) {
  auto j = base_config();
  j["sweep"] = ordered_json::parse(R"({"axes": [{"param": "taxes.v", "values": [0.1, 0.999, 1.5]}]})");
  Table t = sweep_table(parse_config(j), 1);
  const auto flags = t.column("flags");
  EXPECT_EQ(std::get<std::string>(t.rows[0][flags]).find("error"), std::string::npos);
  EXPECT_NE(std::get<std::string>(t.rows[2][flags]).find("error:"), std::string::npos);
  EXPECT_TRUE(std::isnan(t.number(2, "p_star")));
}

TEST(Solve, UndefinedQuasiElasticityFlagged) {
  auto j = base_config();
  j["scheme"] = ordered_json::parse(R"({"kind": "evasion"})");
  j["taxes"] = ordered_json::parse(R"({"t": 0.05, "v": 0, "lam_c": 0.1})");
  Table t = solve_table(parse_config(j));
  EXPECT_NE(std::get<std::string>(t.rows[0][t.column("flags")]).find("undefined:rho_lam_c"), std::string::npos);
}

TEST(Figures, ColumnSets) {
  Figure2Options o2;
  o2.points = 5;
  Table f2 = figure2(o2);
  for (const char* c : {"panel", "n", "mu", "rho_t_P", "rho_t_Q", "MC_v_P", "MC_t_Q", "I_v_Q", "p_P"})
    EXPECT_NO_THROW(f2.column(c)) << c;
  Figure3Options o3;
  o3.points = 5;
  Table f3 = figure3(o3);
  EXPECT_NO_THROW(f3.column("beta"));
  Figure1Options o1;
  o1.points = 7;
  Table f1 = figure1(o1);
  std::set<std::string> panels;
  for (std::size_t r = 0; r < f1.rows.size(); ++r) panels.insert(std::get<std::string>(f1.rows[r][f1.column("panel")]));
  EXPECT_EQ(panels.size(), 3u);
}

TEST(Figures, UnitReferencePoint) {
  // theta = 0.3, eps = 2, rho_t = 1 with tau = v = 0.2 gives MC_t = 0.8
  EXPECT_NEAR(figure1_ratio(true, 0.3, 2, 1), 0.8 / 0.3, 1e-12);
}

TEST(Figures, Figure2ClaimsHold) {
  for (const auto& c : figure2_claims(figure2())) EXPECT_TRUE(c.pass) << c.name << " " << c.note;
}

TEST(Figures, LogitQuantityPriceFlatInFirms) {
  Table t = figure3();
  const auto claims = figure3_claims(t);
  for (const auto& c : claims)
    if (c.name.find("flat") != std::string::npos) EXPECT_TRUE(c.pass) << c.note;
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ConfigError("x")), kUsageError);
  EXPECT_EQ(exit_code_for(NoBracket("x")), kSolverError);
  EXPECT_EQ(exit_code_for(DomainError("x")), kSolverError);
  const char* bad[] = {"oligo", "figure", "--id", "4"};
  EXPECT_EQ(run(4, bad), kUsageError);
  const char* none[] = {"oligo"};
  EXPECT_EQ(run(1, none), kUsageError);
}
