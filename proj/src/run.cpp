#include "enopt/run.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "json.hpp"

namespace enopt {

int exit_code_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return kExitOk;
    case SolveStatus::Infeasible: return kExitInfeasible;
    case SolveStatus::Unbounded: return kExitUnbounded;
    case SolveStatus::GapLimit:
    case SolveStatus::IterationLimit: return kExitLimit;
  }
  return kExitUsage;
}

int exit_code_for(ScenarioErrorKind kind) {
  switch (kind) {
    case ScenarioErrorKind::Parse: return kExitParse;
    case ScenarioErrorKind::Schema: return kExitSchema;
    case ScenarioErrorKind::Validation: return kExitValidation;
  }
  return kExitUsage;
}

namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::vector<double> step_starts(const TimeGrid& grid) {
  std::vector<double> start;
  double h = 0.0;
  for (double d : grid.step_hours) {
    start.push_back(h);
    h += d;
  }
  return start;
}

std::string wide_csv(const TimeGrid& grid, std::map<std::string, std::vector<double>> columns) {
  std::string out = "time";
  for (const auto& [id, values] : columns) out += "," + id;
  out += "\n";
  const auto start = step_starts(grid);
  for (std::size_t t = 0; t < start.size(); ++t) {
    out += fixed(start[t]);
    for (const auto& [id, values] : columns) out += "," + fixed(values[t]);
    out += "\n";
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string unit_of(const EnergySystem& sys, const std::string& id) {
  return sys.find_storage(id) ? "MWh" : "MW";
}

}  // namespace

std::string schedule_csv(const EnergySystem& sys, const RunReport& report) {
  std::map<std::string, std::vector<double>> columns;
  for (const auto& c : report.components) columns[c.id] = c.output;
  return wide_csv(sys.time_grid, std::move(columns));
}

std::string fill_csv(const EnergySystem& sys, const RunReport& report) {
  std::map<std::string, std::vector<double>> columns;
  for (const auto& s : report.storages) columns[s.id] = s.fill;
  return wide_csv(sys.time_grid, std::move(columns));
}

std::string plot_csv(const EnergySystem& sys, const RunReport& report) {
  std::map<std::string, std::vector<double>> columns;
  const std::size_t T = sys.time_grid.num_steps();
  auto add = [&](const std::string& key, const std::vector<double>& values, double sign) {
    auto& col = columns[key];
    col.resize(T, 0.0);
    for (std::size_t t = 0; t < T; ++t) col[t] += sign * values[t];
  };
  for (std::size_t i = 0; i < sys.components.size(); ++i) {
    const auto& c = sys.components[i];
    const auto& cr = report.components[i];
    add(c.primary_output_node() + ":" + c.id, cr.output, 1.0);
    if (!cr.secondary_output.empty()) add(c.secondary_output_node() + ":" + c.id, cr.secondary_output, 1.0);
    const auto* in = c.input_node().empty() ? nullptr : sys.find_node(c.input_node());
    if (in && !in->boundary) add(in->id + ":" + c.id, cr.input, -1.0);
  }
  for (std::size_t i = 0; i < sys.storages.size(); ++i) {
    const auto& sr = report.storages[i];
    add(sys.storages[i].node + ":" + sr.id, sr.discharge, 1.0);
    add(sys.storages[i].node + ":" + sr.id, sr.charge, -1.0);
  }
  for (const auto& n : sys.nodes) {
    if (n.boundary) continue;
    std::vector<double> load(T);
    for (std::size_t t = 0; t < T; ++t) load[t] = n.load.at(t);
    add(n.id + ":load", load, -1.0);
  }
  return wide_csv(sys.time_grid, std::move(columns));
}

std::string summary_text(const EnergySystem& sys, const RunReport& r) {
  std::string out;
  out += "scenario: " + sys.name + "\n";
  out += "status: " + std::string(to_string(r.status)) + "\n";
  out += "objective: " + fixed(r.objective) + "\n";
  out += "bound: " + fixed(r.bound) + "\n";
  out += "gap: " + fixed(r.gap) + "\n";
  out += "\ninstalled capacities\n";
  std::map<std::string, double> installed;
  for (const auto& c : r.components) installed[c.id] = c.installed;
  for (const auto& s : r.storages) installed[s.id] = s.capacity;
  for (const auto& [id, value] : installed) out += "  " + id + ": " + fixed(value) + " " + unit_of(sys, id) + "\n";
  out += "\ncost breakdown (EUR)\n";
  const auto& k = r.costs;
  for (const auto& [name, value] : std::vector<std::pair<std::string, double>>{
           {"fuel", k.fuel}, {"invest", k.invest}, {"maintenance", k.maintenance}, {"startup", k.startup},
           {"storage", k.storage}, {"ramp", k.ramp}, {"emission", k.emission}, {"build", k.build},
           {"total", k.total()}})
    out += "  " + name + ": " + fixed(value) + "\n";
  out += "\nemissions: " + fixed(r.emissions) + " kg\n";
  out += "\ncapacity factors\n";
  std::map<std::string, double> factors;
  for (const auto& c : r.components) factors[c.id] = c.capacity_factor;
  for (const auto& [id, value] : factors) out += "  " + id + ": " + fixed(value) + "\n";
  out += "\nverification: " + std::string(r.residuals.pass() ? "PASS" : "FAIL") +
         " (worst residual " + fixed(r.residuals.worst()) + ")\n";
  return out;
}

std::string summary_json(const EnergySystem& sys, const RunReport& r) {
  nlohmann::ordered_json j;
  j["scenario"] = sys.name;
  j["status"] = std::string(to_string(r.status));
  j["objective"] = r.objective;
  j["bound"] = r.bound;
  j["gap"] = r.gap;
  nlohmann::ordered_json installed;
  std::map<std::string, double> caps;
  for (const auto& c : r.components) caps[c.id] = c.installed;
  for (const auto& s : r.storages) caps[s.id] = s.capacity;
  for (const auto& [id, value] : caps) installed[id] = value;
  j["installed"] = installed;
  const auto& k = r.costs;
  j["costs"] = {{"fuel", k.fuel},         {"invest", k.invest},     {"maintenance", k.maintenance},
                {"startup", k.startup},   {"storage", k.storage},   {"ramp", k.ramp},
                {"emission", k.emission}, {"build", k.build},       {"total", k.total()}};
  j["emissions_kg"] = r.emissions;
  nlohmann::ordered_json fam;
  for (int n = 1; n <= kEquationFamilies; ++n)
    fam[std::string(to_string(equation_tag(n)))] = r.residuals.family[n - 1];
  j["residuals"] = fam;
  j["integrality_residual"] = r.residuals.integrality;
  j["verification"] = r.residuals.pass() ? "PASS" : "FAIL";
  return j.dump(2) + "\n";
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  RunResult result;
  const EnergySystem& sys = scenario.system;
  result.program = compile(sys, scenario.compile);
  std::filesystem::create_directories(options.out_dir);
  if (options.export_lp || scenario.outputs.lp)
    write_file(options.out_dir / "program.lp", to_lp_format(result.program));

  result.solution = BuiltinSolver().solve(result.program, scenario.solver);
  result.exit_code = exit_code_for(result.solution.status);
  if (!result.solution.has_point()) {
    write_file(options.out_dir / "summary.txt", "scenario: " + sys.name + "\nstatus: " +
                                                     std::string(to_string(result.solution.status)) + "\n");
    return result;
  }

  result.report = extract_report(sys, result.program, result.solution, scenario.solver.feasibility_tol);
  const RunReport& rep = *result.report;
  const auto& out = scenario.outputs;
  if (out.schedule) write_file(options.out_dir / "schedule.csv", schedule_csv(sys, rep));
  if (out.fill && !sys.storages.empty()) write_file(options.out_dir / "fill.csv", fill_csv(sys, rep));
  if (out.plot) write_file(options.out_dir / "plot.csv", plot_csv(sys, rep));
  if (out.summary) {
    write_file(options.out_dir / "summary.txt", summary_text(sys, rep));
    write_file(options.out_dir / "summary.json", summary_json(sys, rep));
  }
  if (options.verify && !rep.residuals.pass() && result.exit_code == kExitOk) result.exit_code = kExitVerifyFailed;
  return result;
}

}  // namespace enopt
