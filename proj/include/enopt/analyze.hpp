#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "enopt/model.hpp"
#include "enopt/program.hpp"
#include "enopt/solver.hpp"

namespace enopt {

/// Solution values keyed by variable identity. Missing variables read as 0.
class SolutionView {
 public:
  SolutionView(const LinearProgram& prog, const Solution& sol);

  double get(VarKind kind, const std::string& owner, int index = -1) const;
  bool has(VarKind kind, const std::string& owner, int index = -1) const;
  double objective() const { return objective_; }

 private:
  std::map<VarRef, double> values_;
  double objective_ = 0.0;
};

struct CostBreakdown {
  double fuel = 0.0;
  double invest = 0.0;
  double maintenance = 0.0;
  double startup = 0.0;
  double storage = 0.0;
  double ramp = 0.0;
  double emission = 0.0;
  double build = 0.0;

  double total() const { return fuel + invest + maintenance + startup + storage + ramp + emission + build; }
};

struct ComponentReport {
  std::string id;
  std::vector<double> output;            // MW, primary output side
  std::vector<double> secondary_output;  // MW, empty for single-output conversions
  std::vector<double> input;             // MW drawn from the input node, empty for sources
  std::vector<double> on;                // empty without unit commitment
  std::vector<double> efficiency;        // realised output/input, partial-load units only
  std::vector<double> installed_per_period;
  double installed = 0.0;                // largest installed capacity over the horizon
  double capacity_factor = 0.0;
  double output_variance = 0.0;
};

struct StorageReport {
  std::string id;
  std::vector<double> fill;  // MWh at the end of each step
  std::vector<double> charge;
  std::vector<double> discharge;
  double capacity = 0.0;
};

struct ResidualReport {
  double tolerance = 1e-6;
  /// Worst residual per equation family, index 0 holding EQ1.
  std::array<double, kEquationFamilies> family{};
  double integrality = 0.0;
  /// balance[node][step] for balanced nodes, absolute residual.
  std::map<std::string, std::vector<double>> balance;

  double of(EquationTag tag) const { return family[equation_number(tag) - 1]; }
  bool passes(EquationTag tag) const { return of(tag) <= tolerance; }
  bool pass() const;
  double worst() const;
};

struct RunReport {
  SolveStatus status = SolveStatus::Optimal;
  double objective = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  std::vector<ComponentReport> components;
  std::vector<StorageReport> storages;
  CostBreakdown costs;
  double emissions = 0.0;  // kg
  ResidualReport residuals;
};

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  std::string code() const { return "NO_SOLUTION"; }
};

/// Input energy rate (MW) a component draws at step t. Sources draw their
/// output (unit efficiency from an unmodelled supply).
double input_rate(const Component& c, const SolutionView& v, int t);

/// Fill level after each step, from the initial fill and the charge and
/// discharge flows.
std::vector<double> storage_fill(const EnergySystem& sys, const Storage& s, const SolutionView& v);

CostBreakdown cost_breakdown(const EnergySystem& sys, const SolutionView& v);

/// Total CO2 of the schedule in kg.
double emissions_total(const EnergySystem& sys, const SolutionView& v);
double emissions_total(const EnergySystem& sys, const LinearProgram& prog, const Solution& sol);

/// Re-evaluates every equation family directly from the system description.
/// The program is used only to look variables up by identity.
ResidualReport verify_solution(const EnergySystem& sys, const LinearProgram& prog, const Solution& sol,
                               double tolerance = 1e-6);

/// Throws AnalysisError when the solution carries no point.
RunReport extract_report(const EnergySystem& sys, const LinearProgram& prog, const Solution& sol,
                         double tolerance = 1e-6);

}  // namespace enopt
