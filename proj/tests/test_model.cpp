#include "doctest.h"
#include "enopt/model.hpp"
#include "enopt/scenario.hpp"
#include "systems.hpp"

using namespace enopt;

TEST_CASE("validate: availability above one") {
  auto sys = toy::base(10);
  sys.nodes = {toy::node("electricity", 1.0)};
  auto pv = toy::source("pv", "electricity", 5.0);
  std::vector<double> avail(10, 0.5);
  avail[7] = 1.2;
  pv.capacity.availability = avail;
  sys.components = {pv};
  const auto rep = validate_system(sys);
  CHECK_FALSE(rep.valid());
  REQUIRE(rep.has(ViolationCode::AvailabilityRange));
  bool named = false;
  for (const auto& v : rep.errors())
    if (v.code == ViolationCode::AvailabilityRange) named = v.field.find("[7]") != std::string::npos;
  CHECK(named);
  CHECK(to_string(ViolationCode::AvailabilityRange) == "AVAILABILITY_RANGE");
}

TEST_CASE("validate: minimum down time needs a binary unit") {
  auto sys = toy::gas_only(4, 5.0);
  UnitCommitment uc;
  uc.unit_capacity = 10.0;
  uc.max_units = 5;
  uc.min_down_steps = 3;
  sys.components[0].capacity.initial = 0.0;
  sys.components[0].commitment = uc;
  const auto rep = validate_system(sys);
  CHECK(rep.has(ViolationCode::BinaryRequired));
  sys.components[0].commitment->max_units = 1;
  CHECK_FALSE(validate_system(sys).has(ViolationCode::BinaryRequired));
}

TEST_CASE("validate: well-formed heat pump system is clean") {
  const auto rep = validate_system(toy::heat_pump());
  CHECK(rep.violations.empty());
  CHECK(rep.valid());
}

TEST_CASE("validate: every invariant maps to a code") {
  auto sys = toy::heat_pump(3);
  sys.components.push_back(sys.components[0]);  // duplicate id
  sys.components[1].conversion = SingleConversion{"electricity", "electricity", -1.0};
  sys.nodes[0].load = std::vector<double>{1.0, 2.0};
  sys.storages.push_back({"s", "nowhere", 5.0, 1.0, false, 0.0, std::nullopt, 1.5, 1.0, CRateLinked{0.0}, false});
  const auto rep = validate_system(sys);
  for (auto code : {ViolationCode::DuplicateId, ViolationCode::SameInputOutput, ViolationCode::NonPositiveEfficiency,
                    ViolationCode::SeriesLength, ViolationCode::UnknownNode, ViolationCode::StorageInitialExceedsCapacity,
                    ViolationCode::StorageEfficiencyRange, ViolationCode::NonPositiveCRate})
    CHECK_MESSAGE(rep.has(code), to_string(code));
}

TEST_CASE("validate: no load at all is only a warning") {
  auto sys = toy::heat_pump();
  sys.nodes[1].load = 0.0;
  const auto rep = validate_system(sys);
  CHECK(rep.valid());
  REQUIRE(rep.has(ViolationCode::DegenerateNoLoad));
  CHECK(rep.errors().empty());
}

TEST_CASE("validate: idempotent") {
  auto sys = toy::heat_pump();
  sys.components[1].capacity.availability = 3.0;
  const auto copy = sys;
  const auto a = validate_system(sys);
  const auto b = validate_system(sys);
  CHECK(a == b);
  CHECK(sys == copy);
}

TEST_CASE("dimensions") {
  auto sys = toy::base(1);
  sys.nodes = {toy::node("electricity", 1.0)};
  sys.components = {toy::source("pv", "electricity", 2.0)};
  CHECK(system_dimensions(sys) == SystemDimensions{1, 1, 1, 0, 1});

  auto grid = TimeGrid::uniform(6);
  grid.period_of_step = {0, 0, 1, 1, 2, 2};
  sys.time_grid = grid;
  CHECK(system_dimensions(sys).num_periods == 3);
}

TEST_CASE("dimensions: shipped desk replicas") {
  const auto s48 = load_scenario(ENOPT_SCENARIO_DIR "/paper_system_48.json");
  CHECK(system_dimensions(s48.system) == SystemDimensions{48, 3, 4, 1, 1});
  const auto s168 = load_scenario(ENOPT_SCENARIO_DIR "/paper_system.json");
  CHECK(system_dimensions(s168.system) == SystemDimensions{168, 3, 4, 1, 1});
}

TEST_CASE("time grid helpers") {
  TimeGrid g;
  g.step_hours = {1, 1, 2, 1};
  g.period_of_step = {0, 0, 1, 1};
  CHECK(g.total_hours() == 5.0);
  CHECK(g.period_hours(0) == 2.0);
  CHECK(g.period_hours(1) == 3.0);
  CHECK(g.num_periods() == 2);
}
