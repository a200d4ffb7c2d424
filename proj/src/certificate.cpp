#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "enopt/solver.hpp"

namespace enopt {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void note(CertificateReport& rep, double& worst, double value, double limit, const std::string& what) {
  worst = std::max(worst, value);
  if (value > limit) {
    rep.ok = false;
    rep.issues.push_back(what + " (" + sci(value) + ")");
  }
}

void check_lp(const LinearProgram& prog, const Solution& sol, double tol, CertificateReport& rep) {
  const auto& vars = prog.variables();
  const auto& rows = prog.rows();
  const std::span<const double> x = sol.values;
  const double scale = std::max(1.0, std::abs(sol.objective));

  if (sol.row_duals.size() != rows.size() || sol.reduced_costs.size() != vars.size()) {
    rep.ok = false;
    rep.issues.push_back("dual values missing");
    return;
  }

  double dual_objective = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    const double y = sol.row_duals[r];
    const std::string label = "row " + std::string(to_string(row.tag)) + " " + row.owner + " t=" + std::to_string(row.step);
    note(rep, rep.primal_residual, row.violation(x), tol, label + " violated");
    double wrong_sign = 0.0;
    if (row.sense == Sense::LessEqual) wrong_sign = std::max(0.0, y);
    if (row.sense == Sense::GreaterEqual) wrong_sign = std::max(0.0, -y);
    note(rep, rep.dual_residual, wrong_sign / scale, tol, label + " dual sign");
    note(rep, rep.complementarity, std::abs(y * (row.activity(x) - row.rhs)) / scale, tol,
         label + " complementary slackness");
    dual_objective += y * row.rhs;
  }

  for (std::size_t j = 0; j < vars.size(); ++j) {
    const Variable& v = vars[j];
    const double d = sol.reduced_costs[j];
    const std::string label = "variable " + v.ref.name();
    const double bound_gap = std::max(v.lower - x[j], x[j] - v.upper);
    note(rep, rep.primal_residual, std::max(0.0, bound_gap), tol, label + " outside bounds");

    double wrong_sign = 0.0;
    double slack = 0.0;
    if (d > 0) {
      if (std::isfinite(v.lower)) {
        dual_objective += d * v.lower;
        slack = x[j] - v.lower;
      } else {
        wrong_sign = d;
      }
    } else if (d < 0) {
      if (std::isfinite(v.upper)) {
        dual_objective += d * v.upper;
        slack = v.upper - x[j];
      } else {
        wrong_sign = -d;
      }
    }
    note(rep, rep.dual_residual, wrong_sign / scale, tol, label + " reduced cost sign");
    note(rep, rep.complementarity, std::abs(d * slack) / scale, tol, label + " complementary slackness");
  }

  std::vector<double> recomputed(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) recomputed[j] = vars[j].cost;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& t : rows[r].terms) recomputed[t.var] -= t.coef * sol.row_duals[r];
  for (std::size_t j = 0; j < vars.size(); ++j)
    note(rep, rep.dual_residual, std::abs(recomputed[j] - sol.reduced_costs[j]) / scale, tol,
         "variable " + vars[j].ref.name() + " reduced cost mismatch");

  const double primal = prog.objective(x);
  rep.duality_gap = primal - dual_objective;
  if (std::abs(rep.duality_gap) / scale > tol) {
    rep.ok = false;
    rep.issues.push_back("duality gap " + sci(rep.duality_gap));
  }
  if (std::abs(primal - sol.objective) / scale > tol) {
    rep.ok = false;
    rep.issues.push_back("reported objective differs from c^T x");
  }
}

void check_milp(const LinearProgram& prog, const Solution& sol, double tol, const SolverConfig& cfg,
                CertificateReport& rep) {
  const auto& vars = prog.variables();
  const std::span<const double> x = sol.values;
  const double scale = std::max(1.0, std::abs(sol.objective));
  rep.primal_residual = prog.max_violation(x);
  if (rep.primal_residual > tol) {
    rep.ok = false;
    rep.issues.push_back("incumbent infeasible (" + sci(rep.primal_residual) + ")");
  }
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (!vars[j].integer) continue;
    note(rep, rep.integrality, std::abs(x[j] - std::round(x[j])), cfg.integrality_tol,
         "variable " + vars[j].ref.name() + " fractional");
  }
  rep.bound_violation = std::max(0.0, sol.bound - sol.objective) / scale;
  if (rep.bound_violation > tol) {
    rep.ok = false;
    rep.issues.push_back("bound exceeds incumbent objective");
  }
  if (std::abs(prog.objective(x) - sol.objective) / scale > tol) {
    rep.ok = false;
    rep.issues.push_back("reported objective differs from c^T x");
  }
  rep.duality_gap = sol.objective - sol.bound;
  if (sol.status == SolveStatus::Optimal && std::abs(rep.duality_gap) / scale > cfg.mip_gap + tol) {
    rep.ok = false;
    rep.issues.push_back("optimal status with gap above tolerance");
  }
}

}  // namespace

CertificateReport check_certificate(const LinearProgram& prog, const Solution& sol, double tol,
                                    const SolverConfig& cfg) {
  CertificateReport rep;
  if (!sol.has_point() || sol.values.size() != prog.num_variables()) {
    rep.ok = false;
    rep.issues.push_back("no primal point");
    return rep;
  }
  if (prog.has_integers())
    check_milp(prog, sol, tol, cfg, rep);
  else
    check_lp(prog, sol, tol, rep);
  return rep;
}

}  // namespace enopt
