#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "enopt/analyze.hpp"
#include "enopt/scenario.hpp"

namespace enopt {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitInfeasible = 3,
  kExitUnbounded = 4,
  kExitLimit = 5,
  kExitSchema = 6,
  kExitValidation = 7,
  kExitVerifyFailed = 8,
};

int exit_code_for(SolveStatus status);
int exit_code_for(ScenarioErrorKind kind);

struct RunOptions {
  std::filesystem::path out_dir = "out";
  bool export_lp = false;
  bool verify = false;
};

struct RunResult {
  int exit_code = kExitOk;
  LinearProgram program;
  Solution solution;
  std::optional<RunReport> report;
};

/// Compiles, solves, analyzes, and writes the requested artifacts.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options);

// Artifact writers. Numbers use "%.6f"; columns are `time` then ids sorted.
std::string schedule_csv(const EnergySystem& sys, const RunReport& report);
std::string fill_csv(const EnergySystem& sys, const RunReport& report);
std::string plot_csv(const EnergySystem& sys, const RunReport& report);
std::string summary_text(const EnergySystem& sys, const RunReport& report);
std::string summary_json(const EnergySystem& sys, const RunReport& report);

}  // namespace enopt
