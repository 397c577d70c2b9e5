#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "oligo/cli/config.hpp"
#include "oligo/cli/output.hpp"
#include "oligo/welfare.hpp"

namespace oligo::cli {

enum ExitCode { kOk = 0, kValidationFailure = 1, kUsageError = 2, kSolverError = 3 };

// Maps an exception thrown by the library to an exit code.
int exit_code_for(const std::exception& e);

// Everything `solve` reports for one scenario.
struct SolveResult {
  SymmetricEquilibrium eq;
  std::vector<std::string> dims;
  PassThroughVector ptv;
  WelfareRatios ratios;
  std::vector<std::string> flags;
};

SolveResult solve_scenario(const ScenarioSpec& s, const SolverOptions& o, double v_flag_threshold = 1e-2);

// Columns shared by `solve` (one row) and `sweep` (axis columns first).
std::vector<std::string> result_columns(const std::vector<std::string>& dims);
std::vector<Cell> result_row(const SolveResult& r);

Table solve_table(const Config& c);
nlohmann::ordered_json solve_json(const Config& c, std::uint64_t seed);

// Cartesian product of the axes, first axis slowest. Rows that fail carry
// empty cells and an error flag instead of aborting the sweep.
Table sweep_table(const Config& c, int threads = 0);

// Entry point of the command-line tool.
int run(int argc, const char* const* argv);

}  // namespace oligo::cli
