#include "simplex.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace enopt::detail {

StandardForm StandardForm::from(const LinearProgram& prog) {
  StandardForm sf;
  sf.rows = static_cast<int>(prog.num_rows());
  sf.cols = static_cast<int>(prog.num_variables());
  std::vector<int> count(sf.cols, 0);
  for (const auto& r : prog.rows())
    for (const auto& t : r.terms) ++count[t.var];
  sf.col_start.assign(sf.cols + 1, 0);
  for (int j = 0; j < sf.cols; ++j) sf.col_start[j + 1] = sf.col_start[j] + count[j];
  sf.row_index.resize(sf.col_start.back());
  sf.value.resize(sf.col_start.back());
  std::vector<int> fill(sf.col_start.begin(), sf.col_start.end() - 1);
  for (int i = 0; i < sf.rows; ++i) {
    const auto& r = prog.rows()[i];
    for (const auto& t : r.terms) {
      sf.row_index[fill[t.var]] = i;
      sf.value[fill[t.var]++] = t.coef;
    }
    switch (r.sense) {
      case Sense::LessEqual: sf.row_lower.push_back(-kInf); sf.row_upper.push_back(r.rhs); break;
      case Sense::GreaterEqual: sf.row_lower.push_back(r.rhs); sf.row_upper.push_back(kInf); break;
      case Sense::Equal: sf.row_lower.push_back(r.rhs); sf.row_upper.push_back(r.rhs); break;
    }
  }
  for (const auto& v : prog.variables()) {
    sf.cost.push_back(v.cost);
    sf.col_lower.push_back(v.lower);
    sf.col_upper.push_back(v.upper);
    sf.integer.push_back(v.integer);
  }
  return sf;
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kPrimalTol = 1e-9;
constexpr int kRefactorPeriod = 100;

using SparseMat = Eigen::SparseMatrix<double>;

/// LU of the basis matrix plus a product-form eta file of later pivots.
class BasisFactor {
 public:
  explicit BasisFactor(int m) : m_(m) {}

  template <class ColumnFn>
  void factorize(const std::vector<int>& head, ColumnFn&& column) {
    etas_.clear();
    if (m_ == 0) return;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(head.size() * 3);
    for (int p = 0; p < m_; ++p)
      column(head[p], [&](int row, double v) { trips.emplace_back(row, p, v); });
    SparseMat basis(m_, m_);
    basis.setFromTriplets(trips.begin(), trips.end());
    basis.makeCompressed();
    lu_.analyzePattern(basis);
    lu_.factorize(basis);
    if (lu_.info() != Eigen::Success) throw std::runtime_error("simplex: singular basis matrix");
    etas_.clear();
  }

  void ftran(std::vector<double>& v) const {
    if (m_ == 0) return;
    Eigen::Map<Eigen::VectorXd> map(v.data(), m_);
    Eigen::VectorXd sol = lu_.solve(map);
    map = sol;
    for (const auto& e : etas_) {
      const double vp = v[e.row] / e.pivot;
      if (vp != 0.0)
        for (const auto& [i, a] : e.entries) v[i] -= a * vp;
      v[e.row] = vp;
    }
  }

  void btran(std::vector<double>& v) const {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double sum = v[it->row];
      for (const auto& [i, a] : it->entries) sum -= a * v[i];
      v[it->row] = sum / it->pivot;
    }
    Eigen::Map<Eigen::VectorXd> map(v.data(), m_);
    Eigen::VectorXd sol = lu_.transpose().solve(map);
    map = sol;
  }

  void push_eta(int row, const std::vector<double>& alpha) {
    Eta e{row, alpha[row], {}};
    for (int i = 0; i < m_; ++i)
      if (i != row && std::abs(alpha[i]) > 1e-14) e.entries.emplace_back(i, alpha[i]);
    etas_.push_back(std::move(e));
  }

  int updates() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int row;
    double pivot;
    std::vector<std::pair<int, double>> entries;
  };
  int m_;
  mutable Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

enum class State : unsigned char { Basic, Lower, Upper, Zero };

enum class PhaseEnd { Optimal, Unbounded, IterationLimit };

/// Bounded-variable primal simplex over structurals, one logical per row
/// (A x - s = 0 with s carrying the row bounds), and phase-one artificials.
class Engine {
 public:
  Engine(const StandardForm& sf, std::span<const double> lower, std::span<const double> upper,
         const SolverConfig& cfg, long iteration_limit)
      : sf_(sf), cfg_(cfg), limit_(iteration_limit), m_(sf.rows), n_(sf.cols), factor_(sf.rows) {
    lo_.assign(lower.begin(), lower.end());
    hi_.assign(upper.begin(), upper.end());
    lo_.insert(lo_.end(), sf.row_lower.begin(), sf.row_lower.end());
    hi_.insert(hi_.end(), sf.row_upper.begin(), sf.row_upper.end());
  }

  LpOutcome run() {
    LpOutcome out;
    if (!bounds_consistent()) {
      out.status = SolveStatus::Infeasible;
      return out;
    }
    crash();

    if (!art_row_.empty()) {
      std::vector<double> phase_one(total(), 0.0);
      for (int k = 0; k < static_cast<int>(art_row_.size()); ++k) phase_one[n_ + m_ + k] = 1.0;
      const PhaseEnd end = iterate(phase_one);
      out.iterations = iterations_;
      if (end == PhaseEnd::IterationLimit) {
        out.status = SolveStatus::IterationLimit;
        return out;
      }
      double infeasibility = 0.0;
      for (int k = 0; k < static_cast<int>(art_row_.size()); ++k) infeasibility += x_[n_ + m_ + k];
      if (infeasibility > cfg_.feasibility_tol) {
        out.status = SolveStatus::Infeasible;
        out.ray = duals(phase_one);
        return out;
      }
      for (int k = 0; k < static_cast<int>(art_row_.size()); ++k) {
        const int j = n_ + m_ + k;
        hi_[j] = 0.0;
        if (state_[j] != State::Basic) {
          state_[j] = State::Lower;
          x_[j] = 0.0;
        }
      }
    }

    return phase_two(std::move(out));
  }

  /// Starts from `start` and restores primal feasibility with dual simplex
  /// pivots. nullopt when the basis cannot be used.
  std::optional<LpOutcome> run_warm(const Basis& start) {
    LpOutcome out;
    if (!bounds_consistent()) {
      out.status = SolveStatus::Infeasible;
      return out;
    }
    if (static_cast<int>(start.head.size()) != m_ || static_cast<int>(start.state.size()) != n_ + m_)
      return std::nullopt;
    head_ = start.head;
    x_.assign(n_ + m_, 0.0);
    state_.assign(n_ + m_, State::Zero);
    for (int j = 0; j < n_ + m_; ++j) {
      state_[j] = static_cast<State>(start.state[j]);
      if (state_[j] == State::Lower && std::isfinite(lo_[j])) x_[j] = lo_[j];
      else if (state_[j] == State::Upper && std::isfinite(hi_[j])) x_[j] = hi_[j];
      else if (state_[j] != State::Basic) place_at_bound(j);
    }
    where_.assign(total(), -1);
    for (int p = 0; p < m_; ++p) {
      if (head_[p] < 0 || head_[p] >= n_ + m_ || state_[head_[p]] != State::Basic) return std::nullopt;
      where_[head_[p]] = p;
    }
    try {
      refactor();
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }

    std::vector<double> cost(total(), 0.0);
    std::copy(sf_.cost.begin(), sf_.cost.end(), cost.begin());
    if (primal_infeasible_row().pos >= 0) {
      const std::vector<double> y = duals(cost);
      for (int j = 0; j < total(); ++j)
        if (state_[j] != State::Basic && improving_direction(j, reduced_cost(j, cost, y)) != 0) return std::nullopt;
      switch (dual_iterate(cost)) {
        case DualEnd::Feasible: break;
        case DualEnd::Stuck: return std::nullopt;
        case DualEnd::IterationLimit:
          out.status = SolveStatus::IterationLimit;
          out.iterations = iterations_;
          return out;
        case DualEnd::Infeasible:
          out.status = SolveStatus::Infeasible;
          out.iterations = iterations_;
          out.ray = ray_;
          return out;
      }
    }
    return phase_two(std::move(out));
  }

  long iterations() const { return iterations_; }

 private:
  bool bounds_consistent() const {
    for (std::size_t j = 0; j < lo_.size(); ++j)
      if (lo_[j] > hi_[j] + kPrimalTol) return false;
    return true;
  }

  LpOutcome phase_two(LpOutcome out) {
    std::vector<double> cost(total(), 0.0);
    std::copy(sf_.cost.begin(), sf_.cost.end(), cost.begin());
    const PhaseEnd end = iterate(cost);
    out.iterations = iterations_;
    out.x.assign(x_.begin(), x_.begin() + n_);
    out.objective = 0.0;
    for (int j = 0; j < n_; ++j) out.objective += sf_.cost[j] * x_[j];
    switch (end) {
      case PhaseEnd::IterationLimit:
        out.status = SolveStatus::IterationLimit;
        return out;
      case PhaseEnd::Unbounded:
        out.status = SolveStatus::Unbounded;
        out.ray = ray_;
        return out;
      case PhaseEnd::Optimal:
        break;
    }
    out.status = SolveStatus::Optimal;
    out.row_duals = duals(cost);
    out.reduced_costs.resize(n_);
    for (int j = 0; j < n_; ++j) out.reduced_costs[j] = reduced_cost(j, cost, out.row_duals);
    if (std::all_of(head_.begin(), head_.end(), [&](int j) { return j < n_ + m_; })) {
      out.basis.head = head_;
      out.basis.state.resize(n_ + m_);
      for (int j = 0; j < n_ + m_; ++j) out.basis.state[j] = static_cast<unsigned char>(state_[j]);
    }
    return out;
  }

  struct Infeasibility {
    int pos = -1;
    bool below = false;
  };

  // Basic variable furthest outside its bounds.
  Infeasibility primal_infeasible_row() const {
    Infeasibility out;
    double worst = cfg_.feasibility_tol * 1e-3;
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      if (lo_[j] - x_[j] > worst) {
        worst = lo_[j] - x_[j];
        out = {p, true};
      }
      if (x_[j] - hi_[j] > worst) {
        worst = x_[j] - hi_[j];
        out = {p, false};
      }
    }
    return out;
  }

  enum class DualEnd { Feasible, Infeasible, IterationLimit, Stuck };

  // Dual simplex on a dual feasible basis: the most infeasible basic variable
  // leaves at its violated bound; the entering column keeps reduced costs
  // sign-feasible (two-pass ratio test favouring large pivots).
  DualEnd dual_iterate(const std::vector<double>& cost) {
    const long budget = iterations_ + 20L * (m_ + n_) + 1000;
    bool fresh = false;
    while (true) {
      if (iterations_ >= limit_) return DualEnd::IterationLimit;
      if (iterations_ >= budget) return DualEnd::Stuck;
      if (factor_.updates() >= kRefactorPeriod) refactor();
      const Infeasibility leave = primal_infeasible_row();
      if (leave.pos < 0) return DualEnd::Feasible;
      const int p = leave.pos;
      const int r = head_[p];

      std::vector<double> rho(m_, 0.0);
      rho[p] = 1.0;
      factor_.btran(rho);
      const std::vector<double> y = duals(cost);

      std::vector<std::pair<int, double>> eligible;  // (variable, row entry)
      std::vector<double> slack;                      // sign-adjusted reduced cost
      double bound = kInf;
      for (int j = 0; j < total(); ++j) {
        if (state_[j] == State::Basic || hi_[j] - lo_[j] <= kPrimalTol) continue;
        double a = 0.0;
        column(j, [&](int i, double v) { a += v * rho[i]; });
        if (std::abs(a) <= kPivotTol) continue;
        const double d = reduced_cost(j, cost, y);
        double dsign;
        if (state_[j] == State::Lower) {
          if (leave.below ? a >= 0 : a <= 0) continue;
          dsign = d;
        } else if (state_[j] == State::Upper) {
          if (leave.below ? a <= 0 : a >= 0) continue;
          dsign = -d;
        } else {
          dsign = std::abs(d);
        }
        dsign = std::max(dsign, 0.0);
        eligible.emplace_back(j, a);
        slack.push_back(dsign);
        bound = std::min(bound, (dsign + cfg_.optimality_tol) / std::abs(a));
      }
      if (eligible.empty()) {
        ray_ = rho;
        return DualEnd::Infeasible;
      }
      int q = -1;
      double best = 0.0;
      for (std::size_t k = 0; k < eligible.size(); ++k) {
        const double mag = std::abs(eligible[k].second);
        if (slack[k] / mag <= bound && mag > best) {
          best = mag;
          q = eligible[k].first;
        }
      }

      std::vector<double> alpha(m_, 0.0);
      column(q, [&](int i, double v) { alpha[i] = v; });
      factor_.ftran(alpha);
      if (std::abs(alpha[p]) <= kPivotTol) {
        if (fresh || factor_.updates() == 0) return DualEnd::Stuck;
        refactor();
        fresh = true;
        continue;
      }
      fresh = false;

      const double target = leave.below ? lo_[r] : hi_[r];
      const double delta = (x_[r] - target) / alpha[p];
      x_[q] += delta;
      for (int k = 0; k < m_; ++k) x_[head_[k]] -= alpha[k] * delta;
      x_[r] = target;
      state_[r] = leave.below ? State::Lower : State::Upper;
      where_[r] = -1;
      head_[p] = q;
      where_[q] = p;
      state_[q] = State::Basic;
      factor_.push_eta(p, alpha);
      ++iterations_;
    }
  }

  int total() const { return n_ + m_ + static_cast<int>(art_row_.size()); }

  template <class F>
  void column(int j, F&& f) const {
    if (j < n_) {
      for (int k = sf_.col_start[j]; k < sf_.col_start[j + 1]; ++k) f(sf_.row_index[k], sf_.value[k]);
    } else if (j < n_ + m_) {
      f(j - n_, -1.0);
    } else {
      const int k = j - n_ - m_;
      f(art_row_[k], art_sign_[k]);
    }
  }

  // Nonbasic structurals start at a finite bound; each row keeps its logical
  // basic when the resulting activity fits its bounds and gets an artificial
  // otherwise.
  void crash() {
    x_.assign(n_ + m_, 0.0);
    state_.assign(n_ + m_, State::Zero);
    for (int j = 0; j < n_; ++j) place_at_bound(j);
    std::vector<double> activity(m_, 0.0);
    for (int j = 0; j < n_; ++j)
      if (x_[j] != 0.0) column(j, [&](int i, double v) { activity[i] += v * x_[j]; });
    head_.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
      const int s = n_ + i;
      const double r = activity[i];
      if (r >= lo_[s] - kPrimalTol && r <= hi_[s] + kPrimalTol) {
        state_[s] = State::Basic;
        x_[s] = r;
        head_[i] = s;
        continue;
      }
      const double bound = r < lo_[s] ? lo_[s] : hi_[s];
      x_[s] = bound;
      state_[s] = r < lo_[s] ? State::Lower : State::Upper;
      const int a = n_ + m_ + static_cast<int>(art_row_.size());
      art_row_.push_back(i);
      art_sign_.push_back(bound - r > 0 ? 1.0 : -1.0);
      lo_.push_back(0.0);
      hi_.push_back(kInf);
      x_.push_back(std::abs(bound - r));
      state_.push_back(State::Basic);
      head_[i] = a;
    }
    where_.assign(total(), -1);
    for (int p = 0; p < m_; ++p) where_[head_[p]] = p;
    refactor();
  }

  void place_at_bound(int j) {
    if (std::isfinite(lo_[j])) {
      x_[j] = lo_[j];
      state_[j] = State::Lower;
    } else if (std::isfinite(hi_[j])) {
      x_[j] = hi_[j];
      state_[j] = State::Upper;
    } else {
      x_[j] = 0.0;
      state_[j] = State::Zero;
    }
  }

  void refactor() {
    factor_.factorize(head_, [this](int j, auto&& emit) { column(j, emit); });
    std::vector<double> rhs(m_, 0.0);
    for (int j = 0; j < total(); ++j) {
      if (state_[j] == State::Basic || x_[j] == 0.0) continue;
      column(j, [&](int i, double v) { rhs[i] -= v * x_[j]; });
    }
    factor_.ftran(rhs);
    for (int p = 0; p < m_; ++p) x_[head_[p]] = rhs[p];
  }

  std::vector<double> duals(const std::vector<double>& cost) const {
    std::vector<double> y(m_);
    for (int p = 0; p < m_; ++p) y[p] = cost[head_[p]];
    factor_.btran(y);
    return y;
  }

  double reduced_cost(int j, const std::vector<double>& cost, const std::vector<double>& y) const {
    double d = cost[j];
    column(j, [&](int i, double v) { d -= v * y[i]; });
    return d;
  }

  // Direction +1 (increase) or -1 (decrease) when j can improve, else 0.
  int improving_direction(int j, double d) const {
    switch (state_[j]) {
      case State::Basic: return 0;
      case State::Lower:
        if (hi_[j] - lo_[j] <= kPrimalTol) return 0;
        return d < -cfg_.optimality_tol ? 1 : 0;
      case State::Upper:
        if (hi_[j] - lo_[j] <= kPrimalTol) return 0;
        return d > cfg_.optimality_tol ? -1 : 0;
      case State::Zero:
        if (d < -cfg_.optimality_tol) return 1;
        if (d > cfg_.optimality_tol) return -1;
        return 0;
    }
    return 0;
  }

  struct Entering {
    int var = -1;
    int dir = 0;
  };

  Entering price(const std::vector<double>& cost, const std::vector<double>& y, bool bland) const {
    Entering best;
    double best_score = 0.0;
    for (int j = 0; j < total(); ++j) {
      if (state_[j] == State::Basic) continue;
      const double d = reduced_cost(j, cost, y);
      const int dir = improving_direction(j, d);
      if (dir == 0) continue;
      if (bland) return {j, dir};
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        best = {j, dir};
      }
    }
    return best;
  }

  struct Leaving {
    int pos = -1;         // basis position, -1 for a bound flip of the entering variable
    double step = kInf;   // infinite: unbounded direction
    bool to_upper = false;
  };

  // Bounded ratio test. Dantzig mode uses a two-pass Harris test that prefers
  // large pivots; Bland mode takes the exact minimum with lowest-index ties.
  Leaving ratio_test(const Entering& e, const std::vector<double>& alpha, bool bland) const {
    Leaving out;
    auto limit = [&](int p, double tol, double& ratio, bool& to_upper) {
      const double delta = -e.dir * alpha[p];
      const int j = head_[p];
      if (delta < -kPivotTol && std::isfinite(lo_[j])) {
        ratio = (x_[j] - lo_[j] + tol) / -delta;
        to_upper = false;
        return true;
      }
      if (delta > kPivotTol && std::isfinite(hi_[j])) {
        ratio = (hi_[j] - x_[j] + tol) / delta;
        to_upper = true;
        return true;
      }
      return false;
    };

    if (bland) {
      for (int p = 0; p < m_; ++p) {
        double ratio;
        bool up;
        if (!limit(p, 0.0, ratio, up)) continue;
        ratio = std::max(ratio, 0.0);
        if (ratio < out.step - 1e-12 ||
            (ratio <= out.step + 1e-12 && out.pos >= 0 && head_[p] < head_[out.pos])) {
          out = {p, ratio, up};
        }
      }
    } else {
      double relaxed = kInf;
      for (int p = 0; p < m_; ++p) {
        double ratio;
        bool up;
        if (limit(p, kPrimalTol, ratio, up)) relaxed = std::min(relaxed, ratio);
      }
      double best_pivot = 0.0;
      for (int p = 0; p < m_; ++p) {
        double ratio;
        bool up;
        if (!limit(p, 0.0, ratio, up) || ratio > relaxed) continue;
        if (std::abs(alpha[p]) > best_pivot) {
          best_pivot = std::abs(alpha[p]);
          out = {p, std::max(ratio, 0.0), up};
        }
      }
    }

    const int q = e.var;
    const double range = hi_[q] - lo_[q];
    if (std::isfinite(range) && range <= out.step) out = {-1, range, e.dir > 0};
    return out;
  }

  PhaseEnd iterate(const std::vector<double>& cost) {
    bool bland = false;
    int stalled = 0;
    bool verified = false;
    while (true) {
      if (iterations_ >= limit_) return PhaseEnd::IterationLimit;
      if (factor_.updates() >= kRefactorPeriod) refactor();

      const std::vector<double> y = duals(cost);
      const Entering e = price(cost, y, bland);
      if (e.var < 0) {
        // Confirm optimality on a fresh factorization before stopping.
        if (!verified && factor_.updates() > 0) {
          refactor();
          verified = true;
          continue;
        }
        return PhaseEnd::Optimal;
      }
      verified = false;

      std::vector<double> alpha(m_, 0.0);
      column(e.var, [&](int i, double v) { alpha[i] = v; });
      factor_.ftran(alpha);

      const Leaving l = ratio_test(e, alpha, bland);
      if (!std::isfinite(l.step)) {
        ray_.assign(n_, 0.0);
        if (e.var < n_) ray_[e.var] = e.dir;
        for (int p = 0; p < m_; ++p)
          if (head_[p] < n_) ray_[head_[p]] = -e.dir * alpha[p];
        return PhaseEnd::Unbounded;
      }
      ++iterations_;

      const double theta = l.step;
      if (theta > 1e-12) {
        stalled = 0;
        bland = false;
      } else if (++stalled >= cfg_.stall_window) {
        bland = true;
      }

      if (theta != 0.0) {
        x_[e.var] += e.dir * theta;
        for (int p = 0; p < m_; ++p) x_[head_[p]] -= e.dir * theta * alpha[p];
      }

      if (l.pos < 0) {
        state_[e.var] = l.to_upper ? State::Upper : State::Lower;
        x_[e.var] = l.to_upper ? hi_[e.var] : lo_[e.var];
        continue;
      }

      const int leaving = head_[l.pos];
      x_[leaving] = l.to_upper ? hi_[leaving] : lo_[leaving];
      state_[leaving] = l.to_upper ? State::Upper : State::Lower;
      where_[leaving] = -1;
      head_[l.pos] = e.var;
      where_[e.var] = l.pos;
      state_[e.var] = State::Basic;
      factor_.push_eta(l.pos, alpha);
    }
  }

  const StandardForm& sf_;
  const SolverConfig& cfg_;
  long limit_;
  long iterations_ = 0;
  int m_;
  int n_;
  std::vector<int> art_row_;
  std::vector<double> art_sign_;
  std::vector<double> lo_, hi_, x_;
  std::vector<State> state_;
  std::vector<int> head_;
  std::vector<int> where_;
  std::vector<double> ray_;
  BasisFactor factor_;
};

}  // namespace

LpOutcome solve_bounded(const StandardForm& sf, std::span<const double> col_lower,
                        std::span<const double> col_upper, const SolverConfig& cfg, long iteration_limit,
                        const Basis* start) {
  long spent = 0;
  if (start && !start->head.empty()) {
    Engine warm(sf, col_lower, col_upper, cfg, iteration_limit);
    if (auto out = warm.run_warm(*start)) return std::move(*out);
    spent = warm.iterations();
  }
  LpOutcome out = Engine(sf, col_lower, col_upper, cfg, std::max(0L, iteration_limit - spent)).run();
  out.iterations += spent;
  return out;
}

}  // namespace enopt::detail
