#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "doctest.h"
#include "enopt/finance.hpp"

using namespace enopt;

// Reference values from a 50-digit evaluation of ((1+i)^n i)/((1+i)^n - 1).
constexpr double kCrf05x20 = 0.0802425871906913228958144537179;
constexpr double kCrf07x15 = 0.109794624701006529848847643605;

TEST_CASE("crf: single period is 1 + i") {
  for (double i : {0.0, 0.01, 0.05, 0.3, 1.0}) CHECK(capital_recovery_factor(i, 1) == doctest::Approx(1.0 + i).epsilon(1e-15));
}

TEST_CASE("crf: zero interest is 1/n") {
  CHECK(capital_recovery_factor(0.0, 10) == 0.1);
  CHECK(capital_recovery_factor(0.0, 4) == 0.25);
}

TEST_CASE("crf: matches high-precision values") {
  CHECK(std::abs(capital_recovery_factor(0.05, 20) - kCrf05x20) < 1e-15);
  CHECK(std::abs(capital_recovery_factor(0.07, 15) - kCrf07x15) < 1e-15);
}

TEST_CASE("crf: strictly increasing in i, decreasing in n") {
  for (int n = 1; n <= 40; n += 3) {
    double prev = capital_recovery_factor(0.0, n);
    for (int k = 1; k <= 30; ++k) {
      const double v = capital_recovery_factor(0.005 * k, n);
      CHECK(v > prev);
      prev = v;
    }
  }
  for (double i : {0.0, 1e-6, 0.02, 0.08, 0.25}) {
    double prev = capital_recovery_factor(i, 1);
    for (int n = 2; n <= 60; ++n) {
      const double v = capital_recovery_factor(i, n);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("crf: tends to i for long lifetimes") {
  for (double i : {0.01, 0.05, 0.1}) CHECK(std::abs(capital_recovery_factor(i, 10000) - i) < 1e-6);
}

TEST_CASE("crf: rejects lifetime below one and negative rates") {
  CHECK_THROWS_AS(capital_recovery_factor(0.05, 0), std::invalid_argument);
  CHECK_THROWS_AS(capital_recovery_factor(-0.01, 5), std::invalid_argument);
}

TEST_CASE("annualize") {
  CHECK(annualize({1000.0, 0.0, 1}) == 1000.0);
  CHECK(annualize({1000.0, 0.0, 4}) == 250.0);
  CHECK(annualize({500000.0, 0.05, 20}) == doctest::Approx(500000.0 * kCrf05x20).epsilon(1e-14));
}

TEST_CASE("output side cost") {
  CHECK(output_side_cost(123.0, 1.0, 0.0) == 123.0);
  CHECK(output_side_cost(1000.0, 0.7, 0.0) == doctest::Approx(1428.5714285714285714).epsilon(1e-14));
  CHECK(output_side_cost(0.0, 0.4, 55.0) == 55.0);
  CHECK_THROWS_AS(output_side_cost(10.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("horizon fraction") {
  CHECK(horizon_fraction(8760.0) == 1.0);
  CHECK(horizon_fraction(168.0) == doctest::Approx(168.0 / 8760.0));
}
