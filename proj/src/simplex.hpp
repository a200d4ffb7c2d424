#pragma once

// Internal interface between the LP engine and branch-and-bound.

#include <span>
#include <vector>

#include "enopt/program.hpp"
#include "enopt/solver.hpp"

namespace enopt::detail {

/// Row-bounded form: row_lower <= A x <= row_upper, col_lower <= x <= col_upper.
/// A is stored column-wise.
struct StandardForm {
  int rows = 0;
  int cols = 0;
  std::vector<int> col_start;  // size cols + 1
  std::vector<int> row_index;
  std::vector<double> value;
  std::vector<double> cost;
  std::vector<double> col_lower, col_upper;
  std::vector<double> row_lower, row_upper;
  std::vector<bool> integer;

  static StandardForm from(const LinearProgram& prog);
};

/// Basis of an optimal solve: basic variable per row and the status of every
/// structural and logical (0 basic, 1 at lower, 2 at upper, 3 free at zero).
struct Basis {
  std::vector<int> head;
  std::vector<unsigned char> state;
};

struct LpOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> x;  // structural values; empty when no feasible point
  double objective = 0.0;
  std::vector<double> row_duals;
  std::vector<double> reduced_costs;
  std::vector<double> ray;
  long iterations = 0;
  Basis basis;  // empty unless optimal with no artificial left in the basis
};

/// Solves the LP with the given column bounds (overriding the form's own).
/// A starting basis from a solve with looser bounds is repaired with dual
/// simplex pivots; the solve falls back to a cold start when it is unusable.
LpOutcome solve_bounded(const StandardForm& sf, std::span<const double> col_lower,
                        std::span<const double> col_upper, const SolverConfig& cfg, long iteration_limit,
                        const Basis* start = nullptr);

}  // namespace enopt::detail
