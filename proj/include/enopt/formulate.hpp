#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "enopt/model.hpp"
#include "enopt/program.hpp"

namespace enopt {

/// How storage fill levels enter the program. `Recurrence` adds one fill
/// variable per step linked by `fill_t = fill_{t-1} + charge - discharge`;
/// `Cumulative` writes the fill level as the running sum over all earlier
/// steps (O(T^2) nonzeros, kept for equivalence checks).
enum class StorageFormulation { Recurrence, Cumulative };

struct CompileOptions {
  StorageFormulation storage = StorageFormulation::Recurrence;
};

class FormulationError : public std::runtime_error {
 public:
  FormulationError(ViolationCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ViolationCode code() const { return code_; }

 private:
  ViolationCode code_;
};

/// Installed capacity of a component at one step: `constant + coef * var`.
struct CapacityExpr {
  double constant = 0.0;
  std::optional<int> var;
  double coef = 1.0;
};

/// Holds the program under construction together with the variable layout.
/// All variables are declared up front in a fixed order; the emitters only
/// add rows, bounds, and objective coefficients.
class ProgramBuilder {
 public:
  explicit ProgramBuilder(const EnergySystem& sys, CompileOptions options = {});

  const EnergySystem& system() const { return sys_; }
  const CompileOptions& options() const { return options_; }
  LinearProgram& program() { return prog_; }
  const LinearProgram& program() const { return prog_; }

  int var(VarKind kind, const std::string& owner, int index = -1) const;
  std::optional<int> find_var(VarKind kind, const std::string& owner, int index = -1) const;

  CapacityExpr installed_capacity(const Component& c, std::size_t step) const;

  /// Appends a row, merging duplicate variables and dropping zero terms.
  void add_row(EquationTag tag, const std::string& owner, int step, std::vector<Term> terms,
               Sense sense, double rhs);

  /// Sorts rows canonically by (tag, owner, step) and hands the program out.
  LinearProgram finish() &&;

 private:
  void declare_variables();
  int declare(VarKind kind, const std::string& owner, int index, double lower = 0.0,
              double upper = kInf, bool integer = false);

  const EnergySystem& sys_;
  CompileOptions options_;
  LinearProgram prog_;
};

// One emitter per equation family. Each assumes a validated system.

/// Output below available installed capacity; per-period capacity when enabled.
void emit_capacity_limits(ProgramBuilder& b);
/// Upper bound on the optimizable capacity share.
void emit_max_installed(ProgramBuilder& b);
/// Conservation rows per balanced node and step.
void emit_node_balances(ProgramBuilder& b);
/// Half-plane rows bounding a characteristic field's secondary output.
void emit_characteristic_field(ProgramBuilder& b);
/// Fill-level, capacity, and charge/discharge-rate rows.
void emit_storage(ProgramBuilder& b);
void emit_ramp_limits(ProgramBuilder& b);
/// Capacity increments between consecutive building periods.
void emit_build_periods(ProgramBuilder& b);
/// On/off, startup, unit-count, and minimum up/down rows.
void emit_unit_commitment(ProgramBuilder& b);
void emit_objective(ProgramBuilder& b);
void emit_co2_cap(ProgramBuilder& b);

/// Lowers a validated system into a program. Throws FormulationError carrying
/// the first violation code when the system does not validate.
LinearProgram compile(const EnergySystem& sys, CompileOptions options = {});

/// Coefficient of one unit of output on the input-side energy drawn per
/// hour (1/eta, or the partial-load slope).
double input_per_output(const Component& c);

}  // namespace enopt
