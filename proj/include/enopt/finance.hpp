#pragma once

namespace enopt {

inline constexpr double kHoursPerYear = 8760.0;

struct AnnuityInput {
  double total_investment = 0.0;  // EUR/MW
  double interest_rate = 0.0;     // per period
  int lifetime = 1;               // periods
  bool operator==(const AnnuityInput&) const = default;
};

/// Annuity factor ((1+i)^n * i) / ((1+i)^n - 1). Returns the limit 1/n at
/// i = 0 and exactly 1 + i for n = 1.
double capital_recovery_factor(double interest_rate, int lifetime);

/// Equal per-period payment for a lump investment.
double annualize(const AnnuityInput& input);

/// Converts an input-referenced specific cost to the output reference.
double output_side_cost(double input_side_cost, double efficiency, double output_extra);

/// Fraction of a year covered by `hours` of schedule.
double horizon_fraction(double hours);

}  // namespace enopt
