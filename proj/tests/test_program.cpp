#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "enopt/program.hpp"

using namespace enopt;

TEST_CASE("program: variable identity") {
  LinearProgram p;
  const int a = p.add_variable({{VarKind::Pout, "gt", 0}, 0, 10, false, 2.0});
  const int b = p.add_variable({{VarKind::Pout, "gt", 1}, 0, kInf, false, 0.0});
  CHECK(a == 0);
  CHECK(b == 1);
  CHECK(p.index_of({VarKind::Pout, "gt", 1}) == 1);
  CHECK_FALSE(p.find({VarKind::Pinstalled, "gt", -1}).has_value());
  CHECK_THROWS_AS(p.index_of({VarKind::On, "gt", 0}), std::out_of_range);
  CHECK_THROWS_AS(p.add_variable({{VarKind::Pout, "gt", 0}}), std::logic_error);
  CHECK(VarRef{VarKind::Pout, "gt", 3}.name() == "Pout(gt,3)");
  CHECK(VarRef{VarKind::CapacityVar, "battery", -1}.name() == "Capacity(battery)");
}

TEST_CASE("program: rows must reference declared variables") {
  LinearProgram p;
  p.add_variable({{VarKind::Pout, "x", 0}});
  CHECK_THROWS_AS(p.add_row({EquationTag::Eq1, "x", 0, {{1, 1.0}}, Sense::LessEqual, 0}), std::logic_error);
}

TEST_CASE("program: evaluation helpers") {
  LinearProgram p;
  p.add_variable({{VarKind::Pout, "x", 0}, 0, 4, false, 3.0});
  p.add_variable({{VarKind::Pout, "y", 0}, 0, kInf, true, -1.0});
  p.add_row({EquationTag::Eq2, "n", 0, {{0, 1.0}, {1, 1.0}}, Sense::Equal, 5});
  p.add_row({EquationTag::Eq1, "x", 0, {{0, 2.0}}, Sense::LessEqual, 6});
  const std::vector<double> x{2.0, 3.0};
  CHECK(p.objective(x) == 3.0);
  CHECK(p.max_violation(x) == 0.0);
  const std::vector<double> bad{5.0, 3.0};
  CHECK(p.max_violation(bad) == 4.0);
  CHECK(p.num_nonzeros() == 3);
  CHECK(p.has_integers());
  CHECK(p.rows_with_tag(EquationTag::Eq1).size() == 1);
  CHECK(p.value(x, {VarKind::Pout, "y", 0}) == 3.0);
  CHECK(p.value(x, {VarKind::On, "y", 0}, -7.0) == -7.0);
}

TEST_CASE("program: LP format export") {
  LinearProgram p;
  p.add_variable({{VarKind::Pout, "gas turbine", 0}, 0, 10, false, 54.025});
  p.add_variable({{VarKind::On, "gas turbine", 0}, 0, 1, true, 0.0});
  p.add_variable({{VarKind::Pinstalled, "pv", -1}, -kInf, kInf, false, -1.0});
  p.add_row({EquationTag::Eq22, "gas turbine", 0, {{0, 1.0}, {1, -10.0}}, Sense::LessEqual, 0});
  const std::string lp = to_lp_format(p);
  CHECK(lp.find("Minimize") != std::string::npos);
  CHECK(lp.find("obj: + 54.024999999999999 Pout(gas_turbine,0) - 1 Pinstalled(pv)") != std::string::npos);
  CHECK(lp.find("EQ22_gas_turbine_t0_r0: + 1 Pout(gas_turbine,0) - 10 on(gas_turbine,0) <= 0") != std::string::npos);
  CHECK(lp.find("Pinstalled(pv) free") != std::string::npos);
  CHECK(lp.find("General\n on(gas_turbine,0)") != std::string::npos);
  CHECK(lp.substr(lp.size() - 4) == "End\n");
}
