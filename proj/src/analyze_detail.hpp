#pragma once

#include "enopt/analyze.hpp"

namespace enopt::detail {

double installed_at(const EnergySystem& sys, const Component& c, const SolutionView& v, int t);
double storage_capacity(const Storage& s, const SolutionView& v);
double secondary_rate(const Component& c, const SolutionView& v, int t);

}  // namespace enopt::detail
