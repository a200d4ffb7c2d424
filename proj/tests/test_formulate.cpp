#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "enopt/formulate.hpp"
#include "enopt/scenario.hpp"
#include "enopt/solver.hpp"
#include "systems.hpp"

using namespace enopt;
using toy::coef;
using toy::row;

namespace {

std::vector<double> csv_column(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) header.push_back(cell);
  const auto col = std::find(header.begin(), header.end(), name) - header.begin();
  std::vector<double> out;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string cell;
    for (long k = 0; k <= col; ++k) std::getline(ls, cell, ',');
    out.push_back(std::stod(cell));
  }
  return out;
}

// Keeps only rows with the given tags and clears the objective.
LinearProgram only_rows(LinearProgram p, std::initializer_list<EquationTag> tags) {
  auto& rows = p.rows();
  rows.erase(std::remove_if(rows.begin(), rows.end(),
                            [&](const Row& r) { return std::find(tags.begin(), tags.end(), r.tag) == tags.end(); }),
             rows.end());
  for (auto& v : p.variables()) v.cost = 0.0;
  return p;
}

EnergySystem field_system(std::vector<HalfPlane> planes) {
  auto sys = toy::base(1);
  sys.nodes = {toy::node("gas", 0.0, true), toy::node("electricity", 1.0), toy::node("heat")};
  Component c;
  c.id = "ext";
  c.conversion = FieldConversion{"gas", "electricity", "heat", 0.4, std::move(planes)};
  c.capacity.initial = 10.0;
  sys.components = {c};
  return sys;
}

Scenario desk48() { return load_scenario(ENOPT_SCENARIO_DIR "/paper_system_48.json"); }

}  // namespace

TEST_CASE("capacity: identity availability on optimizable capacity") {
  auto sys = toy::base(2);
  sys.nodes = {toy::node("electricity", 1.0)};
  auto pv = toy::source("pv", "electricity", 0.0);
  pv.capacity.optimizable = true;
  sys.components = {pv};
  const auto p = compile(sys);
  const Row* r = row(p, EquationTag::Eq1, "pv", 0);
  REQUIRE(r);
  CHECK(r->terms.size() == 2);
  CHECK(coef(p, *r, VarKind::Pout, "pv", 0) == 1.0);
  CHECK(coef(p, *r, VarKind::Pinstalled, "pv") == -1.0);
  CHECK(r->sense == Sense::LessEqual);
  CHECK(r->rhs == 0.0);
}

TEST_CASE("capacity: zero availability forces zero output") {
  auto sys = toy::base(2);
  sys.nodes = {toy::node("electricity", 1.0)};
  auto pv = toy::source("pv", "electricity", 10.0);
  pv.capacity.availability = std::vector<double>{1.0, 0.0};
  auto backup = toy::source("backup", "electricity", 10.0);
  backup.costs.fuel = 100.0;
  sys.components = {pv, backup};
  const auto p = compile(sys);
  const Row* r = row(p, EquationTag::Eq1, "pv", 1);
  REQUIRE(r);
  CHECK(r->rhs == 0.0);
  const auto s = solve(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values[p.index_of({VarKind::Pout, "pv", 1})] == 0.0);
  CHECK(s.values[p.index_of({VarKind::Pout, "pv", 0})] == doctest::Approx(1.0));
}

TEST_CASE("capacity: desk PV coefficients equal the availability series") {
  const auto sc = desk48();
  const auto p = compile(sc.system, sc.compile);
  const auto avail = csv_column(ENOPT_SCENARIO_DIR "/series/winter_days_48.csv", "pv_availability");
  REQUIRE(avail.size() == 48);
  for (int t = 0; t < 48; ++t) {
    const Row* r = row(p, EquationTag::Eq1, "pv", t);
    REQUIRE(r);
    CHECK(-coef(p, *r, VarKind::Pinstalled, "pv") == doctest::Approx(avail[t]).epsilon(1e-15));
  }
}

TEST_CASE("max installed becomes a variable bound") {
  const auto sc = desk48();
  const auto p = compile(sc.system, sc.compile);
  CHECK(p.variables()[p.index_of({VarKind::Pinstalled, "gas_turbine"})].upper == 1000.0);

  auto sys = toy::gas_only(1, 5.0);
  sys.components[0].capacity = {};
  sys.components[0].capacity.optimizable = true;
  const auto open = compile(sys);
  CHECK(open.variables()[open.index_of({VarKind::Pinstalled, "gas_turbine"})].upper == kInf);

  sys.components[0].capacity.initial = 8.0;
  sys.components[0].capacity.max_installed = 8.0;
  auto q = compile(sys);
  const int added = q.index_of({VarKind::Pinstalled, "gas_turbine"});
  CHECK(q.variables()[added].upper == 0.0);
  q.variables()[added].cost = -1.0;  // reward capacity; the bound must still hold
  const auto s = solve(q);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values[added] == 0.0);
}

TEST_CASE("node balance: desk electricity row") {
  const auto sc = desk48();
  const auto p = compile(sc.system, sc.compile);
  const auto load = csv_column(ENOPT_SCENARIO_DIR "/series/winter_days_48.csv", "elec_load");
  for (int t : {0, 17, 47}) {
    const Row* r = row(p, EquationTag::Eq7, "electricity", t);
    if (!r) r = row(p, EquationTag::Eq2, "electricity", t);
    REQUIRE(r);
    CHECK(r->sense == Sense::Equal);
    CHECK(r->rhs == doctest::Approx(load[t]));
    CHECK(coef(p, *r, VarKind::Pout, "pv", t) == 1.0);
    CHECK(coef(p, *r, VarKind::Pout, "chp", t) == 1.0);
    CHECK(coef(p, *r, VarKind::Pout, "gas_turbine", t) == 1.0);
    CHECK(coef(p, *r, VarKind::Pout, "heat_pump", t) == doctest::Approx(-1.0 / 3.0));
    CHECK(coef(p, *r, VarKind::Pdischarge, "battery", t) == 1.0);
    CHECK(coef(p, *r, VarKind::Pcharge, "battery", t) == -1.0);
    CHECK(r->terms.size() == 6);
  }
}

TEST_CASE("node balance: desk heat row carries the CHP ratio") {
  const auto sc = desk48();
  const auto p = compile(sc.system, sc.compile);
  const Row* r = row(p, EquationTag::Eq7, "heat", 3);
  REQUIRE(r);
  const double ratio = coef(p, *r, VarKind::Pout, "chp", 3);
  CHECK(ratio == doctest::Approx(0.48 / 0.37));
  // The tabulated node ratio 0.768 is the electric-per-heat inverse, rounded.
  CHECK(std::abs(1.0 / ratio - 0.768) < 0.005);
  CHECK(coef(p, *r, VarKind::Pout, "heat_pump", 3) == 1.0);
}

TEST_CASE("node balance: sign sanity on every balance row") {
  const auto sc = desk48();
  const auto p = compile(sc.system, sc.compile);
  int checked = 0;
  for (const auto& r : p.rows()) {
    if (r.tag != EquationTag::Eq2 && r.tag != EquationTag::Eq7) continue;
    for (const auto& t : r.terms) {
      const auto& ref = p.variables()[t.var].ref;
      const bool consuming = ref.kind == VarKind::Pcharge || (ref.owner == "heat_pump" && r.owner == "electricity");
      CHECK((consuming ? t.coef < 0 : t.coef > 0));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("node balance: isolated node without load is trivially feasible") {
  auto sys = toy::heat_pump(1);
  sys.nodes.push_back(toy::node("island"));
  const auto p = compile(sys);
  const Row* r = row(p, EquationTag::Eq2, "island", 0);
  REQUIRE(r);
  CHECK(r->terms.empty());
  CHECK(r->rhs == 0.0);
  CHECK(solve(p).status == SolveStatus::Optimal);
}

TEST_CASE("characteristic field: secondary range at fixed primary") {
  const auto sys = field_system({{1.0, 0.0, Sense::LessEqual}, {-1.0, 4.0, Sense::LessEqual}, {0.2, 0.0, Sense::GreaterEqual}});
  auto p = only_rows(compile(sys), {EquationTag::Eq8, EquationTag::Eq9, EquationTag::Eq10});
  CHECK(p.num_rows() == 3);
  const int primary = p.index_of({VarKind::Pout, "ext", 0});
  const int secondary = p.index_of({VarKind::PoutSecondary, "ext", 0});
  p.variables()[primary].lower = p.variables()[primary].upper = 2.0;
  p.variables()[secondary].cost = 1.0;
  auto lo = solve(p);
  p.variables()[secondary].cost = -1.0;
  auto hi = solve(p);
  REQUIRE(lo.status == SolveStatus::Optimal);
  REQUIRE(hi.status == SolveStatus::Optimal);
  CHECK(lo.values[secondary] == doctest::Approx(0.4));
  CHECK(hi.values[secondary] == doctest::Approx(2.0));
}

TEST_CASE("characteristic field: collapsed field reproduces the fixed ratio") {
  const double ratio = 0.48 / 0.37;
  const auto sys = field_system({{ratio, 0.0, Sense::LessEqual}, {ratio, 0.0, Sense::GreaterEqual}, {0.0, 100.0, Sense::LessEqual}});
  auto p = only_rows(compile(sys), {EquationTag::Eq8, EquationTag::Eq9, EquationTag::Eq10});
  const int primary = p.index_of({VarKind::Pout, "ext", 0});
  const int secondary = p.index_of({VarKind::PoutSecondary, "ext", 0});
  p.variables()[primary].lower = p.variables()[primary].upper = 3.0;
  for (double sign : {1.0, -1.0}) {
    p.variables()[secondary].cost = sign;
    const auto s = solve(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.values[secondary] == doctest::Approx(3.0 * ratio));
  }
}

TEST_CASE("characteristic field: fewer than three half-planes is rejected") {
  const auto sys = field_system({{1.0, 0.0, Sense::LessEqual}, {0.2, 0.0, Sense::GreaterEqual}});
  CHECK(validate_system(sys).has(ViolationCode::FieldTooFewHalfPlanes));
  try {
    compile(sys);
    FAIL("compile accepted an invalid field");
  } catch (const FormulationError& e) {
    CHECK(e.code() == ViolationCode::FieldTooFewHalfPlanes);
  }
}

namespace {

EnergySystem storage_system(std::size_t steps, double eta_in, double eta_out) {
  auto sys = toy::base(steps);
  sys.nodes = {toy::node("electricity", 1.0)};
  sys.components = {toy::source("grid", "electricity", 10.0)};
  Storage s;
  s.id = "battery";
  s.node = "electricity";
  s.capacity_optimizable = true;
  s.capacity_cost = 5.0;
  s.charge_efficiency = eta_in;
  s.discharge_efficiency = eta_out;
  s.rate = CRateLinked{1.0};
  sys.storages = {s};
  return sys;
}

}  // namespace

TEST_CASE("storage: single-step cumulative rows") {
  const auto p = compile(storage_system(1, 1.0, 1.0), {StorageFormulation::Cumulative});
  const Row* lower = row(p, EquationTag::Eq12, "battery", 0);
  const Row* upper = row(p, EquationTag::Eq13, "battery", 0);
  REQUIRE(lower);
  REQUIRE(upper);
  CHECK(lower->sense == Sense::GreaterEqual);
  CHECK(lower->rhs == 0.0);
  CHECK(coef(p, *lower, VarKind::Pcharge, "battery", 0) == 1.0);
  CHECK(coef(p, *lower, VarKind::Pdischarge, "battery", 0) == -1.0);
  CHECK(upper->sense == Sense::LessEqual);
  CHECK(upper->rhs == 0.0);
  CHECK(coef(p, *upper, VarKind::Pcharge, "battery", 0) == 1.0);
  CHECK(coef(p, *upper, VarKind::Pdischarge, "battery", 0) == -1.0);
  CHECK(coef(p, *upper, VarKind::CapacityVar, "battery") == -1.0);
}

TEST_CASE("storage: unit C-rate links charge to capacity") {
  const auto p = compile(storage_system(2, 0.98, 0.98));
  for (auto [tag, kind] : {std::pair{EquationTag::Eq14, VarKind::Pcharge}, std::pair{EquationTag::Eq15, VarKind::Pdischarge}}) {
    const Row* r = row(p, tag, "battery", 1);
    REQUIRE(r);
    CHECK(coef(p, *r, kind, "battery", 1) == 1.0);
    CHECK(coef(p, *r, VarKind::CapacityVar, "battery") == -1.0);
    CHECK(r->rhs == 0.0);
  }
}

TEST_CASE("storage: three-step fill level") {
  const auto p = compile(storage_system(3, 0.98, 0.98), {StorageFormulation::Cumulative});
  std::vector<double> x(p.num_variables(), 0.0);
  x[p.index_of({VarKind::Pcharge, "battery", 0})] = 1.0;
  x[p.index_of({VarKind::Pcharge, "battery", 1})] = 1.0;
  x[p.index_of({VarKind::Pdischarge, "battery", 2})] = 0.5;
  const Row* r = row(p, EquationTag::Eq12, "battery", 2);
  REQUIRE(r);
  CHECK(r->activity(x) == doctest::Approx(2 * 0.98 - 0.5 / 0.98).epsilon(1e-14));
}

TEST_CASE("storage: recurrence and cumulative forms agree") {
  auto sys = storage_system(6, 0.9, 0.95);
  sys.nodes[0].load = std::vector<double>{2, 9, 1, 8, 3, 7};
  sys.components[0].capacity.availability = std::vector<double>{1, 0.2, 1, 0.1, 1, 0.3};
  sys.components[0].costs.fuel = std::vector<double>{1, 9, 2, 8, 1, 7};
  sys.storages[0].initial_fill = 0.5;
  sys.storages[0].final_fill_at_least_initial = true;
  const auto a = solve(compile(sys, {StorageFormulation::Recurrence}));
  const auto b = solve(compile(sys, {StorageFormulation::Cumulative}));
  REQUIRE(a.status == SolveStatus::Optimal);
  REQUIRE(b.status == SolveStatus::Optimal);
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-10));
}

namespace {

EnergySystem ramp_system(std::size_t steps, RampSpec ramp, Profile load) {
  auto sys = toy::gas_only(steps, std::move(load));
  sys.components[0].capacity.initial = 10.0;
  sys.components[0].ramp = ramp;
  auto backup = toy::source("backup", "electricity", 100.0);
  backup.costs.fuel = 500.0;
  sys.components.push_back(backup);
  return sys;
}

}  // namespace

TEST_CASE("ramp: fixed rate on fixed capacity") {
  const auto p = compile(ramp_system(3, FixedRamp{0.8, 0.5}, 5.0));
  CHECK_FALSE(row(p, EquationTag::Eq16, "gas_turbine", 0));
  CHECK_FALSE(row(p, EquationTag::Eq17, "gas_turbine", 0));
  const Row* up = row(p, EquationTag::Eq16, "gas_turbine", 1);
  const Row* down = row(p, EquationTag::Eq17, "gas_turbine", 2);
  REQUIRE(up);
  REQUIRE(down);
  CHECK(up->rhs == doctest::Approx(8.0));
  CHECK(coef(p, *up, VarKind::Pout, "gas_turbine", 1) == 1.0);
  CHECK(coef(p, *up, VarKind::Pout, "gas_turbine", 0) == -1.0);
  CHECK(down->rhs == doctest::Approx(5.0));
  CHECK(coef(p, *down, VarKind::Pout, "gas_turbine", 2) == -1.0);
}

TEST_CASE("ramp: zero up-rate keeps output from rising") {
  const auto p = compile(ramp_system(2, FixedRamp{0.0, 1.0}, std::vector<double>{5.0, 8.0}));
  const auto s = solve(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  const double p1 = s.values[p.index_of({VarKind::Pout, "gas_turbine", 0})];
  const double p2 = s.values[p.index_of({VarKind::Pout, "gas_turbine", 1})];
  CHECK(p2 <= p1 + 1e-9);
  CHECK(p1 == doctest::Approx(5.0));
}

TEST_CASE("ramp: optimized limit variables") {
  const auto p = compile(ramp_system(3, OptimizedRamp{2.0, 3.0}, std::vector<double>{2.0, 6.0, 4.0}));
  const Row* up = row(p, EquationTag::Eq16, "gas_turbine", 1);
  REQUIRE(up);
  CHECK(coef(p, *up, VarKind::LCRupVar, "gas_turbine") == -1.0);
  CHECK(p.variables()[p.index_of({VarKind::LCRupVar, "gas_turbine"})].cost == 2.0);
  const auto s = solve(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values[p.index_of({VarKind::LCRupVar, "gas_turbine"})] == doctest::Approx(4.0));
  CHECK(s.values[p.index_of({VarKind::LCRdownVar, "gas_turbine"})] == doctest::Approx(2.0));
}

namespace {

EnergySystem build_system(double load_p0, double load_p1, double build_cost = 10.0) {
  auto sys = toy::base(4);
  sys.time_grid.period_of_step = {0, 0, 1, 1};
  sys.nodes = {toy::node("electricity", std::vector<double>{load_p0, load_p0, load_p1, load_p1})};
  auto pv = toy::source("plant", "electricity", 0.0);
  pv.capacity.optimizable = true;
  pv.capacity.per_period = true;
  pv.capacity.build_cost = build_cost;
  pv.costs.invest = 1.0;
  sys.components = {pv};
  return sys;
}

}  // namespace

TEST_CASE("build periods: one period emits nothing") {
  auto sys = build_system(5, 5);
  sys.time_grid.period_of_step = {0, 0, 0, 0};
  const auto p = compile(sys);
  CHECK(p.rows_with_tag(EquationTag::Eq19).empty());
}

TEST_CASE("build periods: increments are priced at their minimum") {
  for (auto [first, second] : {std::pair{5.0, 8.0}, std::pair{8.0, 5.0}}) {
    auto p = compile(build_system(1.0, 1.0));
    REQUIRE(p.rows_with_tag(EquationTag::Eq19).size() == 1);
    auto& p0 = p.variables()[p.index_of({VarKind::PinstalledPeriod, "plant", 0})];
    p0.lower = p0.upper = first;
    auto& p1 = p.variables()[p.index_of({VarKind::PinstalledPeriod, "plant", 1})];
    p1.lower = p1.upper = second;
    const auto s = solve(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.values[p.index_of({VarKind::Pbuilt, "plant", 1})] == doctest::Approx(std::max(0.0, second - first)));
  }
}

TEST_CASE("build periods: a free increment is flagged") {
  const auto p = compile(build_system(5, 8, 0.0));
  REQUIRE_FALSE(p.warnings().empty());
  CHECK(p.warnings().front().code == IssueCode::CostlessSlack);
  CHECK(p.warnings().front().owner == "plant");
  CHECK(compile(build_system(5, 8)).warnings().empty());
}

namespace {

EnergySystem committed_system(std::size_t steps, Profile load, int min_down = 0, int min_up = 0) {
  auto sys = toy::gas_only(steps, std::move(load));
  auto& gt = sys.components[0];
  gt.capacity.initial = 0.0;
  UnitCommitment uc;
  uc.unit_capacity = 10.0;
  uc.unit_min_load = 4.0;
  uc.startup_cost = 7.0;
  uc.min_down_steps = min_down;
  uc.min_up_steps = min_up;
  gt.commitment = uc;
  auto backup = toy::source("backup", "electricity", 100.0);
  backup.costs.fuel = 500.0;
  sys.components.push_back(backup);
  return sys;
}

}  // namespace

TEST_CASE("commitment: output window of a running unit") {
  auto p = compile(committed_system(1, 1.0));
  const int on = p.index_of({VarKind::On, "gas_turbine", 0});
  const int out = p.index_of({VarKind::Pout, "gas_turbine", 0});
  CHECK(p.variables()[on].integer);
  p.variables()[on].lower = 1.0;
  for (double sign : {1.0, -1.0}) {
    auto q = p;
    for (auto& v : q.variables()) v.cost = 0.0;
    q.variables()[out].cost = sign;
    q.rows().erase(std::remove_if(q.rows().begin(), q.rows().end(), [](const Row& r) { return r.tag == EquationTag::Eq2; }),
                   q.rows().end());
    const auto s = solve(q);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.values[out] == doctest::Approx(sign > 0 ? 4.0 : 10.0));
  }
}

TEST_CASE("commitment: switching on costs a startup") {
  auto p = compile(committed_system(2, 6.0));
  const int on0 = p.index_of({VarKind::On, "gas_turbine", 0});
  const int on1 = p.index_of({VarKind::On, "gas_turbine", 1});
  p.variables()[on0].upper = 0.0;
  p.variables()[on1].lower = 1.0;
  const auto s = solve(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values[p.index_of({VarKind::Startup, "gas_turbine", 1})] == doctest::Approx(1.0));
  CHECK(s.values[p.index_of({VarKind::Startup, "gas_turbine", 0})] == doctest::Approx(0.0));
}

namespace {

// Independent reading of minimum down/up times: every off-run between two
// on-steps lasts at least `down` steps, and every on-run that ends inside
// the horizon lasts at least `up` steps (steps before the horizon are off).
bool respects_windows(const std::vector<int>& on, int down, int up) {
  const int T = static_cast<int>(on.size());
  for (int t = 0; t < T; ++t) {
    if (t > 0 && on[t - 1] == 1 && on[t] == 0) {
      int end = t;
      while (end < T && on[end] == 0) ++end;
      if (end < T && end - t < down) return false;
      int start = t - 1;
      while (start >= 0 && on[start] == 1) --start;
      if (t - 1 - start < up) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("commitment: minimum down time admits exactly the valid sequences") {
  for (auto [down, up] : {std::pair{2, 0}, std::pair{0, 2}, std::pair{2, 2}, std::pair{3, 1}}) {
    const auto p = compile(committed_system(4, 6.0, down, up));
    for (int mask = 0; mask < 16; ++mask) {
      std::vector<int> seq(4);
      for (int t = 0; t < 4; ++t) seq[t] = (mask >> t) & 1;
      std::vector<double> x(p.num_variables(), 0.0);
      for (int t = 0; t < 4; ++t) x[p.index_of({VarKind::On, "gas_turbine", t})] = seq[t];
      double worst = 0.0;
      for (auto tag : {EquationTag::Eq28, EquationTag::Eq29})
        for (const Row* r : p.rows_with_tag(tag)) worst = std::max(worst, r->violation(x));
      CHECK_MESSAGE((worst == 0.0) == respects_windows(seq, down, up), "down=", down, " up=", up, " mask=", mask);
    }
  }
  const auto forced = committed_system(4, 6.0, 2);
  auto p = compile(forced);
  p.variables()[p.index_of({VarKind::On, "gas_turbine", 0})].lower = 1.0;
  p.variables()[p.index_of({VarKind::On, "gas_turbine", 1})].upper = 0.0;
  const auto s = solve(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.values[p.index_of({VarKind::On, "gas_turbine", 2})] == 0.0);
}

TEST_CASE("objective: fuel and investment coefficients") {
  auto sys = toy::gas_only(1, 5.0);
  const auto p = compile(sys);
  CHECK(p.variables()[p.index_of({VarKind::Pout, "gas_turbine", 0})].cost == doctest::Approx(54.025).epsilon(1e-14));

  const auto sc = desk48();
  const auto d = compile(sc.system, sc.compile);
  CHECK(d.variables()[d.index_of({VarKind::Pout, "pv", 5})].cost == 0.0);
  const double scale = 48.0 / 8760.0;
  CHECK(d.variables()[d.index_of({VarKind::CapacityVar, "battery"})].cost == doctest::Approx(8520.0 * scale));
  auto unscaled = sc.system;
  unscaled.scale_annual_costs = false;
  const auto u = compile(unscaled);
  CHECK(u.variables()[u.index_of({VarKind::CapacityVar, "battery"})].cost == 8520.0);
  CHECK(u.variables()[u.index_of({VarKind::Pinstalled, "pv"})].cost == 21300.0);
  // Fuel plus priced CO2 on the gas turbine.
  CHECK(u.variables()[u.index_of({VarKind::Pout, "gas_turbine", 0})].cost ==
        doctest::Approx((21.61 + 30 * 0.202) / 0.4));
}

TEST_CASE("co2 cap") {
  auto sys = toy::gas_only(1, 5.0);
  sys.co2_cap = 0.0;
  CHECK(solve(compile(sys)).status == SolveStatus::Infeasible);

  sys.co2_cap = kInf;
  CHECK(compile(sys).rows_with_tag(EquationTag::Eq21).empty());
  sys.co2_cap.reset();
  CHECK(compile(sys).rows_with_tag(EquationTag::Eq21).empty());

  sys.co2_cap = 100.0;
  const auto p = compile(sys);
  const auto rows = p.rows_with_tag(EquationTag::Eq21);
  REQUIRE(rows.size() == 1);
  std::vector<double> x(p.num_variables(), 0.0);
  x[p.index_of({VarKind::Pout, "gas_turbine", 0})] = 10.0;
  CHECK(rows[0]->activity(x) == doctest::Approx(5.05).epsilon(1e-14));
}

TEST_CASE("compile: deterministic") {
  const auto sc = load_scenario(ENOPT_SCENARIO_DIR "/coverage.json");
  const auto a = compile(sc.system, sc.compile);
  const auto b = compile(sc.system, sc.compile);
  CHECK(a == b);
  CHECK(to_lp_format(a) == to_lp_format(b));
}

TEST_CASE("compile: empty system gives one trivial row per step") {
  auto sys = toy::base(3);
  sys.nodes = {toy::node("electricity")};
  const auto p = compile(sys);
  CHECK(p.num_variables() == 0);
  REQUIRE(p.num_rows() == 3);
  for (const auto& r : p.rows()) CHECK(r.terms.empty());
  CHECK(solve(p).status == SolveStatus::Optimal);
}

TEST_CASE("compile: invalid system is rejected with its code") {
  auto sys = toy::heat_pump();
  sys.components[1].capacity.availability = 2.0;
  CHECK_THROWS_AS(compile(sys), FormulationError);
}

TEST_CASE("compile: first-step block of the desk replica") {
  const auto sc = desk48();
  const auto p = compile(sc.system, sc.compile);
  std::vector<const Row*> block;
  for (const auto& r : p.rows())
    if (r.step == 0 && r.tag != EquationTag::EndFill) block.push_back(&r);
  // Four capacity rows, two balances, fill definition and bound, two rate rows.
  CHECK(block.size() == 10);
  for (const char* id : {"pv", "gas_turbine", "chp", "heat_pump"}) {
    const Row* r = row(p, EquationTag::Eq1, id, 0);
    REQUIRE(r);
    CHECK(coef(p, *r, VarKind::Pout, id, 0) == 1.0);
    CHECK(r->rhs == 0.0);
  }
  const Row* pv = row(p, EquationTag::Eq1, "pv", 0);
  const auto avail = csv_column(ENOPT_SCENARIO_DIR "/series/winter_days_48.csv", "pv_availability");
  CHECK(-coef(p, *pv, VarKind::Pinstalled, "pv") == doctest::Approx(avail[0]));
  CHECK(row(p, EquationTag::Eq12, "battery", 0));
  CHECK(row(p, EquationTag::Eq13, "battery", 0));
  CHECK(row(p, EquationTag::Eq14, "battery", 0));
  CHECK(row(p, EquationTag::Eq15, "battery", 0));
}

TEST_CASE("compile: desk replica dimensions follow the counting formula") {
  for (const char* file : {"/paper_system_48.json", "/paper_system.json"}) {
    const auto sc = load_scenario(std::string(ENOPT_SCENARIO_DIR) + file);
    const auto p = compile(sc.system, sc.compile);
    const std::size_t T = sc.system.time_grid.num_steps();
    CHECK(p.num_variables() == 7 * T + 5);
    CHECK(p.num_rows() == 16 * T - 6);
  }
}

TEST_CASE("compile: coverage fixture emits every implemented family") {
  const auto sc = load_scenario(ENOPT_SCENARIO_DIR "/coverage.json");
  const auto p = compile(sc.system, sc.compile);
  for (int n : {1, 2, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 21, 22, 23, 24, 25, 27, 28, 29})
    CHECK_MESSAGE(!p.rows_with_tag(equation_tag(n)).empty(), "EQ", n);
}
