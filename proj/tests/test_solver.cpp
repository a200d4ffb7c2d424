#include <cmath>
#include <random>

#include "doctest.h"
#include "enopt/scenario.hpp"
#include "enopt/solver.hpp"
#include "oracles.hpp"
#include "simplex.hpp"

using namespace enopt;

namespace {

LinearProgram two_var(double c0, double c1) {
  LinearProgram p;
  p.add_variable({{VarKind::Pout, "a", 0}, 0, kInf, false, c0});
  p.add_variable({{VarKind::Pout, "b", 0}, 0, kInf, false, c1});
  return p;
}

}  // namespace

TEST_CASE("lp: small textbook problem") {
  // max 3a + 5b s.t. a <= 4, 2b <= 12, 3a + 2b <= 18
  LinearProgram p = two_var(-3, -5);
  p.add_row({EquationTag::Eq1, "r", 0, {{0, 1}}, Sense::LessEqual, 4});
  p.add_row({EquationTag::Eq1, "r", 1, {{1, 2}}, Sense::LessEqual, 12});
  p.add_row({EquationTag::Eq1, "r", 2, {{0, 3}, {1, 2}}, Sense::LessEqual, 18});
  const Solution s = solve_lp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-36));
  CHECK(s.values[0] == doctest::Approx(2));
  CHECK(s.values[1] == doctest::Approx(6));
  const auto cert = check_certificate(p, s);
  CHECK(cert.ok);
  CHECK(s.row_duals[2] == doctest::Approx(-1));
}

TEST_CASE("lp: equality and greater-equal rows need phase one") {
  LinearProgram p = two_var(1, 2);
  p.add_row({EquationTag::Eq2, "n", 0, {{0, 1}, {1, 1}}, Sense::Equal, 10});
  p.add_row({EquationTag::Eq1, "r", 0, {{1, 1}}, Sense::GreaterEqual, 3});
  const Solution s = solve_lp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(13));
  CHECK(check_certificate(p, s).ok);
}

TEST_CASE("lp: infeasible program reports a Farkas vector") {
  LinearProgram p = two_var(1, 1);
  p.add_row({EquationTag::Eq1, "r", 0, {{0, 1}, {1, 1}}, Sense::LessEqual, 1});
  p.add_row({EquationTag::Eq1, "r", 1, {{0, 1}, {1, 1}}, Sense::GreaterEqual, 2});
  const Solution s = solve_lp(p);
  CHECK(s.status == SolveStatus::Infeasible);
  CHECK_FALSE(s.has_point());
  REQUIRE(s.ray.size() == 2);
}

TEST_CASE("lp: unbounded program reports an improving ray") {
  LinearProgram p = two_var(-1, 0);
  p.add_row({EquationTag::Eq1, "r", 0, {{0, 1}, {1, -1}}, Sense::LessEqual, 1});
  const Solution s = solve_lp(p);
  REQUIRE(s.status == SolveStatus::Unbounded);
  REQUIRE(s.ray.size() == 2);
  CHECK(s.ray[0] > 0);
  CHECK(s.ray[0] - s.ray[1] <= 1e-9);
}

TEST_CASE("lp: free variables and empty programs") {
  LinearProgram p;
  p.add_variable({{VarKind::Pout, "a", 0}, -kInf, kInf, false, 1});
  p.add_row({EquationTag::Eq1, "r", 0, {{0, 1}}, Sense::GreaterEqual, -7});
  const Solution s = solve_lp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values[0] == doctest::Approx(-7));

  const Solution empty = solve_lp(LinearProgram{});
  CHECK(empty.status == SolveStatus::Optimal);
  CHECK(empty.objective == 0.0);
}

TEST_CASE("lp: iteration limit is honoured") {
  LinearProgram p = two_var(-3, -5);
  p.add_row({EquationTag::Eq1, "r", 0, {{0, 1}}, Sense::LessEqual, 4});
  p.add_row({EquationTag::Eq1, "r", 1, {{0, 3}, {1, 2}}, Sense::LessEqual, 18});
  SolverConfig cfg;
  cfg.iteration_limit = 1;
  CHECK(solve_lp(p, cfg).status == SolveStatus::IterationLimit);
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK(cfg.valid());
  cfg.integrality_tol = 0.7;
  CHECK_FALSE(cfg.valid());
  CHECK_THROWS_AS(solve_lp(LinearProgram{}, cfg), std::invalid_argument);
  CHECK(to_string(SolveStatus::GapLimit) == "GAP_LIMIT");
}

TEST_CASE("lp: random instances agree with vertex enumeration") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 100; ++k) {
    const oracle::DenseLp lp = oracle::random_lp(rng, 4, 6);
    const auto expected = oracle::vertex_minimum(lp);
    const LinearProgram prog = oracle::to_program(lp);
    const Solution s = solve_lp(prog);
    CAPTURE(k);
    if (!expected) {
      CHECK(s.status == SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(std::abs(s.objective - *expected) <= 1e-7);
    CHECK(check_certificate(prog, s).ok);
  }
}

TEST_CASE("milp: knapsack") {
  LinearProgram p;
  const double value[] = {10, 13, 7, 8};
  const double weight[] = {5, 7, 4, 3};
  Row cap{EquationTag::Eq1, "k", 0, {}, Sense::LessEqual, 10};
  for (int j = 0; j < 4; ++j) {
    p.add_variable({{VarKind::On, "i", j}, 0, 1, true, -value[j]});
    cap.terms.push_back({j, weight[j]});
  }
  p.add_row(cap);
  const Solution s = solve_milp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-21));
  CHECK(check_certificate(p, s).ok);
  CHECK(s.stats.nodes >= 1);
}

TEST_CASE("milp: infeasible integer program") {
  LinearProgram p;
  p.add_variable({{VarKind::On, "i", 0}, 0, 5, true, 1});
  p.add_row({EquationTag::Eq1, "r", 0, {{0, 2}}, Sense::Equal, 3});
  CHECK(solve_milp(p).status == SolveStatus::Infeasible);
}

TEST_CASE("milp: random instances agree with exhaustive fixing") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const oracle::DenseLp lp = oracle::random_lp(rng, 2, 6, 6);
    const auto expected = oracle::fixing_minimum(lp);
    const LinearProgram prog = oracle::to_program(lp);
    const Solution s = solve_milp(prog);
    CAPTURE(k);
    if (!expected) {
      CHECK(s.status == SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(std::abs(s.objective - *expected) <= 1e-6);
    CHECK(check_certificate(prog, s).ok);
  }
}

TEST_CASE("milp: node limit returns the incumbent") {
  std::mt19937_64 rng(99);
  SolverConfig cfg;
  cfg.node_limit = 1;
  for (int k = 0; k < 10; ++k) {
    const LinearProgram prog = oracle::to_program(oracle::random_lp(rng, 2, 6, 8));
    const Solution s = solve_milp(prog, cfg);
    CHECK(s.stats.nodes <= 1);
    if (s.status == SolveStatus::GapLimit && s.has_point()) {
      CHECK(prog.max_violation(s.values) <= 1e-6);
      CHECK(s.bound <= s.objective + 1e-9);
    }
  }
}

TEST_CASE("lp: single bounded variable") {
  LinearProgram p;
  p.add_variable({{VarKind::Pout, "x", 0}, 0, kInf, false, -1.0});
  p.add_row({EquationTag::Eq1, "x", 0, {{0, 1.0}}, Sense::LessEqual, 5});
  const Solution s = solve_lp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values[0] == doctest::Approx(5));
  CHECK(s.objective == doctest::Approx(-5));
}

TEST_CASE("lp: degenerate cycling-prone fixture terminates") {
  // Classic instance on which Dantzig pricing with naive tie-breaking cycles.
  oracle::DenseLp lp;
  lp.n = 4;
  lp.c = {-0.75, 20, -0.5, 6};
  lp.a = {{0.25, -8, -1, 9}, {0.5, -12, -0.5, 3}, {0, 0, 1, 0}};
  lp.sense.assign(3, Sense::LessEqual);
  lp.b = {0, 0, 1};
  lp.lo.assign(4, 0.0);
  lp.hi.assign(4, 100.0);
  lp.integer.assign(4, false);
  const auto expected = oracle::vertex_minimum(lp);
  REQUIRE(expected);
  CHECK(*expected == doctest::Approx(-1.25));
  auto p = oracle::to_program(lp);
  for (auto& v : p.variables()) v.upper = kInf;
  for (int window : {1, 2, 50}) {
    SolverConfig cfg;
    cfg.stall_window = window;
    cfg.iteration_limit = 1000;
    const Solution s = solve_lp(p, cfg);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(-1.25));
    CHECK(s.stats.iterations < 1000);
  }
}

TEST_CASE("lp: scaling the objective keeps the argmin") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 60; ++k) {
    auto p = oracle::to_program(oracle::random_lp(rng, 5, 8));
    const Solution base = solve_lp(p);
    if (base.status != SolveStatus::Optimal) continue;
    for (double lambda : {0.5, 3.0, 1000.0}) {
      auto q = p;
      for (auto& v : q.variables()) v.cost *= lambda;
      const Solution s = solve_lp(q);
      REQUIRE(s.status == SolveStatus::Optimal);
      CHECK(s.objective == doctest::Approx(lambda * base.objective).epsilon(1e-9));
      for (std::size_t j = 0; j < s.values.size(); ++j) CHECK(s.values[j] == doctest::Approx(base.values[j]).epsilon(1e-9));
    }
  }
}

TEST_CASE("solve is deterministic") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 20; ++k) {
    const auto p = oracle::to_program(oracle::random_lp(rng, 6, 6, 4));
    const Solution a = solve(p);
    const Solution b = solve(p);
    CHECK(a.status == b.status);
    CHECK(a.values == b.values);
    CHECK(a.objective == b.objective);
    CHECK(a.stats.nodes == b.stats.nodes);
  }
}

TEST_CASE("certificate: perturbed point breaks complementarity") {
  LinearProgram p = two_var(-3, -5);
  p.add_row({EquationTag::Eq1, "r", 0, {{0, 1}}, Sense::LessEqual, 4});
  p.add_row({EquationTag::Eq1, "r", 1, {{1, 2}}, Sense::LessEqual, 12});
  p.add_row({EquationTag::Eq1, "r", 2, {{0, 3}, {1, 2}}, Sense::LessEqual, 18});
  Solution s = solve_lp(p);
  REQUIRE(check_certificate(p, s).ok);
  for (auto& x : s.values) x += 1e-3;
  s.objective = p.objective(s.values);
  const auto cert = check_certificate(p, s);
  CHECK_FALSE(cert.ok);
  CHECK(cert.complementarity > 1e-6);
  CHECK_FALSE(cert.issues.empty());
}

TEST_CASE("certificate: fractional binary is an integrality violation") {
  LinearProgram p;
  p.add_variable({{VarKind::On, "u", 0}, 0, 1, true, 1.0});
  p.add_variable({{VarKind::Pout, "u", 0}, 0, 10, false, 1.0});
  p.add_row({EquationTag::Eq22, "u", 0, {{1, 1.0}, {0, -10.0}}, Sense::LessEqual, 0});
  p.add_row({EquationTag::Eq2, "n", 0, {{1, 1.0}}, Sense::Equal, 4});
  Solution s = solve(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values[0] == 1.0);
  CHECK(check_certificate(p, s).ok);
  s.values[0] = 0.4;
  s.objective = p.objective(s.values);
  const auto cert = check_certificate(p, s);
  CHECK_FALSE(cert.ok);
  CHECK(cert.integrality == doctest::Approx(0.4));
}

TEST_CASE("lp: warm start from a parent basis matches a cold solve") {
  std::mt19937_64 rng(29);
  const SolverConfig cfg;
  int warm_used = 0;
  for (int k = 0; k < 100; ++k) {
    const oracle::DenseLp lp = oracle::random_lp(rng, 5, 6);
    const auto sf = detail::StandardForm::from(oracle::to_program(lp));
    const auto parent = detail::solve_bounded(sf, sf.col_lower, sf.col_upper, cfg, 10000);
    if (parent.status != SolveStatus::Optimal || parent.basis.head.empty()) continue;
    std::vector<double> lower = sf.col_lower, upper = sf.col_upper;
    const int j = static_cast<int>(rng() % sf.cols);
    if (rng() % 2)
      upper[j] = std::floor(parent.x[j] - 0.25);
    else
      lower[j] = std::ceil(parent.x[j] + 0.25);
    const auto cold = detail::solve_bounded(sf, lower, upper, cfg, 10000);
    const auto warm = detail::solve_bounded(sf, lower, upper, cfg, 10000, &parent.basis);
    CAPTURE(k);
    REQUIRE(warm.status == cold.status);
    ++warm_used;
    if (cold.status == SolveStatus::Optimal) CHECK(std::abs(warm.objective - cold.objective) <= 1e-7);
  }
  CHECK(warm_used > 30);
}

TEST_CASE("milp: unit commitment fixture keeps an incumbent under a node limit") {
  const Scenario sc = load_scenario(ENOPT_TEST_DATA_DIR "/hard_milp.json");
  SolverConfig cfg = sc.solver;
  cfg.node_limit = 1;
  const Solution s = BuiltinSolver().solve(compile(sc.system, sc.compile), cfg);
  CHECK(s.status == SolveStatus::GapLimit);
  REQUIRE(s.has_point());
  CHECK(s.objective >= 20180.0 - 1e-6);
  CHECK(s.bound <= 20180.0 + 1e-6);
}
