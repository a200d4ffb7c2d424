#include "enopt/finance.hpp"

#include <cmath>
#include <stdexcept>

namespace enopt {

double capital_recovery_factor(double interest_rate, int lifetime) {
  if (lifetime < 1) throw std::invalid_argument("capital_recovery_factor: lifetime must be >= 1");
  if (interest_rate < 0.0) throw std::invalid_argument("capital_recovery_factor: negative interest rate");
  if (lifetime == 1) return 1.0 + interest_rate;
  if (interest_rate == 0.0) return 1.0 / lifetime;
  // i / (1 - (1+i)^-n), evaluated through expm1/log1p to avoid cancellation
  // for small rates.
  const double discount = -std::expm1(-lifetime * std::log1p(interest_rate));
  return interest_rate / discount;
}

double annualize(const AnnuityInput& input) {
  return input.total_investment * capital_recovery_factor(input.interest_rate, input.lifetime);
}

double output_side_cost(double input_side_cost, double efficiency, double output_extra) {
  if (!(efficiency > 0.0)) throw std::invalid_argument("output_side_cost: efficiency must be > 0");
  return input_side_cost / efficiency + output_extra;
}

double horizon_fraction(double hours) { return hours / kHoursPerYear; }

}  // namespace enopt
