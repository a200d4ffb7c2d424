#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string_view>

#include "CLI11.hpp"
#include "enopt/formulate.hpp"
#include "enopt/run.hpp"

using namespace enopt;

namespace {

enum class LogLevel { Error, Warning, Info };

/// ENOPT_LOG_LEVEL: error, warning (default) or info.
LogLevel log_level() {
  const char* env = std::getenv("ENOPT_LOG_LEVEL");
  const std::string_view v = env ? env : "";
  if (v == "error") return LogLevel::Error;
  if (v == "info") return LogLevel::Info;
  return LogLevel::Warning;
}

const LogLevel kLevel = log_level();

void print_violations(const ValidationReport& report) {
  for (const auto& v : report.violations)
    if (v.severity == Severity::Error || kLevel >= LogLevel::Warning)
      std::cerr << (v.severity == Severity::Error ? "error" : "warning") << ": " << to_string(v.code) << " at "
              << v.field << ": " << v.message << "\n";
}

int fail(const ScenarioError& e) {
  std::cerr << "error: " << e.what() << "\n";
  return exit_code_for(e.kind());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-system design and dispatch optimizer"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "out";
  std::optional<double> mip_gap;
  std::optional<std::uint64_t> seed;
  std::optional<long> node_limit;
  std::optional<long> iteration_limit;
  bool export_lp = false;
  bool verify = false;

  auto* run = app.add_subcommand("run", "Solve a scenario and write its artifacts");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--mip-gap", mip_gap, "Relative MIP gap");
  run->add_option("--seed", seed, "Deterministic seed");
  run->add_option("--node-limit", node_limit, "Branch-and-bound node limit");
  run->add_option("--iteration-limit", iteration_limit, "Simplex iteration limit");
  run->add_flag("--export-lp", export_lp, "Write program.lp");
  run->add_flag("--verify", verify, "Fail with exit code 8 when verification fails");

  auto* validate = app.add_subcommand("validate", "Check a scenario without solving it");
  validate->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  auto* dims = app.add_subcommand("dimensions", "Print the size of the compiled program");
  dims->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) {
      const Scenario sc = load_scenario(scenario_path);
      print_violations(validate_system(sc.system));
      std::cout << "valid\n";
      return kExitOk;
    }

    const Scenario loaded = load_scenario(scenario_path);
    if (*dims) {
      const SystemDimensions d = system_dimensions(loaded.system);
      const LinearProgram prog = compile(loaded.system, loaded.compile);
      std::size_t integers = 0;
      for (const auto& v : prog.variables()) integers += v.integer ? 1 : 0;
      std::cout << "steps: " << d.num_steps << "\n"
                << "nodes: " << d.num_nodes << "\n"
                << "components: " << d.num_components << "\n"
                << "storages: " << d.num_storages << "\n"
                << "periods: " << d.num_periods << "\n"
                << "variables: " << prog.num_variables() << "\n"
                << "integer_variables: " << integers << "\n"
                << "rows: " << prog.num_rows() << "\n"
                << "nonzeros: " << prog.num_nonzeros() << "\n";
      if (kLevel >= LogLevel::Warning)
        for (const auto& w : prog.warnings()) std::cerr << "warning: COSTLESS_SLACK " << w.message << "\n";
      return kExitOk;
    }

    Scenario sc = loaded;
    if (mip_gap) sc.solver.mip_gap = *mip_gap;
    if (seed) sc.solver.deterministic_seed = *seed;
    if (node_limit) sc.solver.node_limit = *node_limit;
    if (iteration_limit) sc.solver.iteration_limit = *iteration_limit;
    if (!sc.solver.valid()) {
      std::cerr << "error: solver settings out of range\n";
      return kExitUsage;
    }
    print_violations(validate_system(sc.system));
    RunOptions opts;
    opts.out_dir = out_dir;
    opts.export_lp = export_lp;
    opts.verify = verify;
    const RunResult result = run_scenario(sc, opts);
    if (kLevel >= LogLevel::Warning)
      for (const auto& w : result.program.warnings()) std::cerr << "warning: COSTLESS_SLACK " << w.message << "\n";
    if (kLevel >= LogLevel::Info)
      std::cerr << "info: " << result.program.num_variables() << " variables, " << result.program.num_rows()
                << " rows, " << result.solution.stats.nodes << " nodes, " << result.solution.stats.iterations
                << " simplex iterations\n";
    std::cout << "status: " << to_string(result.solution.status) << "\n";
    if (result.report) {
      std::printf("objective: %.6f\n", result.report->objective);
      std::cout << "verification: " << (result.report->residuals.pass() ? "PASS" : "FAIL") << "\n";
    }
    return result.exit_code;
  } catch (const ScenarioError& e) {
    return fail(e);
  } catch (const FormulationError& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
