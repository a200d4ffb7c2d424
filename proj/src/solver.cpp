#include "enopt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>

#include "simplex.hpp"

namespace enopt {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "OPTIMAL";
    case SolveStatus::Infeasible: return "INFEASIBLE";
    case SolveStatus::Unbounded: return "UNBOUNDED";
    case SolveStatus::GapLimit: return "GAP_LIMIT";
    case SolveStatus::IterationLimit: return "ITERATION_LIMIT";
  }
  return "UNKNOWN";
}

bool SolverConfig::valid() const {
  return feasibility_tol > 0 && optimality_tol > 0 && integrality_tol > 0 && integrality_tol < 0.5 &&
         mip_gap >= 0 && iteration_limit > 0 && node_limit > 0 && stall_window > 0;
}

namespace {

double relative_gap(double objective, double bound) {
  return std::abs(objective - bound) / std::max(1.0, std::abs(objective));
}

Solution from_outcome(detail::LpOutcome&& lp) {
  Solution sol;
  sol.status = lp.status;
  sol.stats.iterations = lp.iterations;
  sol.stats.nodes = 0;
  if (lp.status == SolveStatus::Optimal) {
    sol.values = std::move(lp.x);
    sol.objective = lp.objective;
    sol.bound = lp.objective;
    sol.row_duals = std::move(lp.row_duals);
    sol.reduced_costs = std::move(lp.reduced_costs);
  }
  sol.ray = std::move(lp.ray);
  return sol;
}

void require_valid(const SolverConfig& cfg) {
  if (!cfg.valid()) throw std::invalid_argument("solver configuration out of range");
}

struct Node {
  double bound;
  long id;
  std::vector<double> lower;
  std::vector<double> upper;
  std::shared_ptr<const detail::Basis> basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const LinearProgram& prog, const SolverConfig& cfg)
      : prog_(prog), cfg_(cfg), sf_(detail::StandardForm::from(prog)) {
    for (int j = 0; j < sf_.cols; ++j)
      if (sf_.integer[j]) integers_.push_back(j);
  }

  Solution run() {
    std::vector<double> lower = sf_.col_lower;
    std::vector<double> upper = sf_.col_upper;
    for (int j : integers_) {
      lower[j] = std::ceil(lower[j] - cfg_.integrality_tol);
      upper[j] = std::floor(upper[j] + cfg_.integrality_tol);
    }

    detail::LpOutcome root = relax(lower, upper);
    nodes_ = 1;
    if (root.status != SolveStatus::Optimal) {
      Solution sol;
      sol.status = root.status;
      sol.ray = std::move(root.ray);
      return finish(std::move(sol));
    }
    if (fractional_var(root.x) < 0) {
      accept(root.x, root.objective);
      return conclude(root.objective, false);
    }
    dive(root, lower, upper);
    if (out_of_iterations()) return conclude(root.objective, true);

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    branch(open, root, lower, upper);
    while (!open.empty()) {
      if (!incumbent_.empty() && prunable(open.top().bound)) {
        open = {};
        break;
      }
      if (nodes_ >= cfg_.node_limit || out_of_iterations()) return conclude(open.top().bound, true);
      Node node = open.top();
      open.pop();
      ++nodes_;
      detail::LpOutcome lp = relax(node.lower, node.upper, node.basis.get());
      if (lp.status == SolveStatus::IterationLimit) return conclude(node.bound, true);
      if (lp.status != SolveStatus::Optimal) continue;
      if (!incumbent_.empty() && prunable(lp.objective)) continue;
      if (fractional_var(lp.x) < 0) {
        accept(lp.x, lp.objective);
        continue;
      }
      branch(open, lp, node.lower, node.upper);
    }
    if (incumbent_.empty()) {
      Solution sol;
      sol.status = SolveStatus::Infeasible;
      return finish(std::move(sol));
    }
    return conclude(incumbent_obj_, false);
  }

 private:
  detail::LpOutcome relax(const std::vector<double>& lower, const std::vector<double>& upper,
                          const detail::Basis* start = nullptr) {
    const long remaining = std::max(0L, cfg_.iteration_limit - iterations_);
    detail::LpOutcome lp = detail::solve_bounded(sf_, lower, upper, cfg_, remaining, start);
    iterations_ += lp.iterations;
    return lp;
  }

  bool out_of_iterations() const { return iterations_ >= cfg_.iteration_limit; }

  bool prunable(double bound) const {
    return bound >= incumbent_obj_ - cfg_.mip_gap * std::max(1.0, std::abs(incumbent_obj_));
  }

  // Most fractional integer variable, ties to the lowest index; -1 if none.
  int fractional_var(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = cfg_.integrality_tol;
    for (int j : integers_) {
      const double frac = std::abs(x[j] - std::round(x[j]));
      if (frac > best_frac + 1e-12) {
        best_frac = frac;
        best = j;
      }
    }
    return best;
  }

  void accept(std::vector<double> x, double objective) {
    for (int j : integers_) x[j] = std::round(x[j]);
    objective = prog_.objective(x);
    if (incumbent_.empty() || objective < incumbent_obj_) {
      incumbent_ = std::move(x);
      incumbent_obj_ = objective;
    }
  }

  void branch(std::priority_queue<Node, std::vector<Node>, NodeOrder>& open, const detail::LpOutcome& lp,
              const std::vector<double>& lower, const std::vector<double>& upper) {
    const int j = fractional_var(lp.x);
    auto basis = std::make_shared<const detail::Basis>(lp.basis);
    Node down{lp.objective, next_id_++, lower, upper, basis};
    down.upper[j] = std::floor(lp.x[j]);
    Node up{lp.objective, next_id_++, lower, upper, basis};
    up.lower[j] = std::ceil(lp.x[j]);
    open.push(std::move(down));
    open.push(std::move(up));
  }

  // Depth-first rounding dive from the root relaxation. Each level fixes the
  // lowest-index fractional integer variable to its nearest value; an infeasible or
  // dominated level backtracks to the most recent untried opposite rounding.
  void dive(const detail::LpOutcome& root, std::vector<double> lower, std::vector<double> upper) {
    struct Frame {
      int var;
      double alternative;
      std::vector<double> lower, upper;
      detail::Basis basis;
    };
    std::vector<Frame> stack;
    std::vector<double> x = root.x;
    detail::Basis basis = root.basis;
    long budget = 4 * static_cast<long>(integers_.size()) + 100;
    while (budget > 0 && !out_of_iterations()) {
      const auto it = std::find_if(integers_.begin(), integers_.end(), [&](int j) {
        return std::abs(x[j] - std::round(x[j])) > cfg_.integrality_tol;
      });
      if (it == integers_.end()) {
        accept(x, 0.0);
        return;
      }
      const int pick = *it;
      const double near = std::round(x[pick]);
      const double far = near > x[pick] ? std::floor(x[pick]) : std::ceil(x[pick]);
      stack.push_back({pick, far, lower, upper, basis});
      lower[pick] = upper[pick] = near;
      detail::LpOutcome lp = relax(lower, upper, &basis);
      --budget;
      while (lp.status != SolveStatus::Optimal || (!incumbent_.empty() && prunable(lp.objective))) {
        if (lp.status == SolveStatus::IterationLimit || budget <= 0) return;
        while (!stack.empty() && std::isnan(stack.back().alternative)) stack.pop_back();
        if (stack.empty()) return;
        Frame& f = stack.back();
        lower = f.lower;
        upper = f.upper;
        basis = f.basis;
        lower[f.var] = upper[f.var] = f.alternative;
        f.alternative = std::nan("");
        lp = relax(lower, upper, &basis);
        --budget;
      }
      x = std::move(lp.x);
      if (!lp.basis.head.empty()) basis = std::move(lp.basis);
    }
  }

  Solution conclude(double open_bound, bool limited) {
    Solution sol;
    if (incumbent_.empty()) {
      sol.status = limited ? (out_of_iterations() ? SolveStatus::IterationLimit : SolveStatus::GapLimit)
                           : SolveStatus::Infeasible;
      sol.bound = open_bound;
      return finish(std::move(sol));
    }
    sol.values = incumbent_;
    sol.objective = incumbent_obj_;
    sol.bound = std::min(open_bound, incumbent_obj_);
    sol.gap = relative_gap(sol.objective, sol.bound);
    if (!limited || sol.gap <= cfg_.mip_gap)
      sol.status = SolveStatus::Optimal;
    else
      sol.status = out_of_iterations() ? SolveStatus::IterationLimit : SolveStatus::GapLimit;
    return finish(std::move(sol));
  }

  Solution finish(Solution sol) const {
    sol.stats.iterations = iterations_;
    sol.stats.nodes = nodes_;
    return sol;
  }

  const LinearProgram& prog_;
  const SolverConfig& cfg_;
  detail::StandardForm sf_;
  std::vector<int> integers_;
  std::vector<double> incumbent_;
  double incumbent_obj_ = kInf;
  long iterations_ = 0;
  long nodes_ = 0;
  long next_id_ = 0;
};

}  // namespace

Solution solve_lp(const LinearProgram& prog, const SolverConfig& cfg) {
  require_valid(cfg);
  const detail::StandardForm sf = detail::StandardForm::from(prog);
  return from_outcome(detail::solve_bounded(sf, sf.col_lower, sf.col_upper, cfg, cfg.iteration_limit));
}

Solution solve_milp(const LinearProgram& prog, const SolverConfig& cfg) {
  require_valid(cfg);
  if (!prog.has_integers()) {
    Solution sol = solve_lp(prog, cfg);
    sol.stats.nodes = 1;
    return sol;
  }
  return BranchAndBound(prog, cfg).run();
}

Solution solve(const LinearProgram& prog, const SolverConfig& cfg) {
  return prog.has_integers() ? solve_milp(prog, cfg) : solve_lp(prog, cfg);
}

Solution BuiltinSolver::solve(const LinearProgram& prog, const SolverConfig& cfg) const {
  return enopt::solve(prog, cfg);
}

}  // namespace enopt
