#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "enopt/program.hpp"

namespace enopt {

enum class SolveStatus { Optimal, Infeasible, Unbounded, GapLimit, IterationLimit };

std::string_view to_string(SolveStatus status);

struct SolverConfig {
  double feasibility_tol = 1e-6;  // absolute, on row residuals
  double optimality_tol = 1e-7;   // on reduced costs
  double integrality_tol = 1e-5;
  double mip_gap = 1e-6;          // relative
  long iteration_limit = 1'000'000;
  long node_limit = 1'000'000;
  /// Iterations without objective progress before Bland's rule takes over.
  int stall_window = 50;
  /// Reserved for randomized strategies; the built-in algorithms are fully
  /// deterministic and do not draw from it.
  std::uint64_t deterministic_seed = 0;

  bool valid() const;
};

struct SolveStats {
  long iterations = 0;
  long nodes = 0;
};

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> values;  // aligned with LinearProgram::variables(); empty without a point
  double objective = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  SolveStats stats;
  /// LP duals of the rows (d objective / d rhs) at an optimal basis.
  std::vector<double> row_duals;
  /// Reduced costs c - A^T y of the variables at an optimal basis.
  std::vector<double> reduced_costs;
  /// Unbounded: improving primal ray. Infeasible: Farkas multipliers on rows.
  std::vector<double> ray;

  bool has_point() const { return !values.empty(); }
};

/// Pluggable backend. The built-in implementation needs no external solver.
class Solver {
 public:
  virtual ~Solver() = default;
  virtual Solution solve(const LinearProgram& prog, const SolverConfig& cfg) const = 0;
  virtual std::string name() const = 0;
};

class BuiltinSolver final : public Solver {
 public:
  Solution solve(const LinearProgram& prog, const SolverConfig& cfg) const override;
  std::string name() const override { return "builtin-simplex-bnb"; }
};

/// Bounded-variable primal simplex; integrality flags are ignored.
Solution solve_lp(const LinearProgram& prog, const SolverConfig& cfg = {});

/// Best-bound branch-and-bound over the integer variables.
Solution solve_milp(const LinearProgram& prog, const SolverConfig& cfg = {});

/// Dispatches to solve_milp when the program has integer variables.
Solution solve(const LinearProgram& prog, const SolverConfig& cfg = {});

struct CertificateReport {
  bool ok = true;
  double primal_residual = 0.0;     // worst row/bound violation
  double dual_residual = 0.0;       // worst dual sign violation
  double complementarity = 0.0;     // worst |multiplier * slack|
  double duality_gap = 0.0;         // primal objective - dual objective
  double integrality = 0.0;         // worst distance to an integer
  double bound_violation = 0.0;     // MILP: bound - objective when positive
  std::vector<std::string> issues;  // one entry per violating row/variable
};

/// Checks an optimal solution: weak duality and complementary slackness for
/// LPs, incumbent feasibility and bound validity for MILPs.
CertificateReport check_certificate(const LinearProgram& prog, const Solution& sol, double tol = 1e-6,
                                    const SolverConfig& cfg = {});

}  // namespace enopt
