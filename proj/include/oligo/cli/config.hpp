#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "oligo/equilibrium.hpp"
#include "oligo/scenario.hpp"

namespace oligo::cli {

inline constexpr int kConfigVersion = 1;

enum class Format { csv, json };
Format format_from_string(const std::string& s);
std::string to_string(Format f);

// One sweep axis: either an inclusive linear range or an explicit list.
struct Axis {
  std::string param;  // e.g. "demand.n", "T.v", "cost.m0"
  std::vector<double> values;
};

struct SweepSpec {
  std::vector<Axis> axes;
  int threads = 0;                  // 0: hardware concurrency
  double v_flag_threshold = 1e-2;   // rows with 1 - nu below this are flagged
};

struct Config {
  int version = kConfigVersion;
  ScenarioSpec scenario;
  SolverOptions solver;
  SweepSpec sweep;
  Format format = Format::csv;
  bool has_format = false;  // format given in the file
};

// Throws ConfigError naming the offending field.
Config parse_config(const nlohmann::ordered_json& j);
Config load_config(const std::string& path);
// Inverse of parse_config; round-trips.
nlohmann::ordered_json config_to_json(const Config& c);

// Names of the tax dimensions of the scenario's scheme.
std::vector<std::string> dimension_names(const ScenarioSpec& s);

// Sets a named parameter; throws ConfigError when it does not apply to the
// scenario (e.g. "demand.mu" for logit demand).
void set_parameter(ScenarioSpec& s, const std::string& param, double value);
void check_parameter(const ScenarioSpec& s, const std::string& param);

}  // namespace oligo::cli
