#include "enopt/analyze.hpp"

#include <algorithm>
#include <cmath>

#include "analyze_detail.hpp"

namespace enopt {

SolutionView::SolutionView(const LinearProgram& prog, const Solution& sol) : objective_(sol.objective) {
  if (!sol.has_point()) return;
  const auto& vars = prog.variables();
  for (std::size_t j = 0; j < vars.size() && j < sol.values.size(); ++j) values_[vars[j].ref] = sol.values[j];
}

double SolutionView::get(VarKind kind, const std::string& owner, int index) const {
  auto it = values_.find(VarRef{kind, owner, index});
  return it == values_.end() ? 0.0 : it->second;
}

bool SolutionView::has(VarKind kind, const std::string& owner, int index) const {
  return values_.count(VarRef{kind, owner, index}) > 0;
}

namespace detail {

double installed_at(const EnergySystem& sys, const Component& c, const SolutionView& v, int t) {
  if (c.commitment) {
    const auto& uc = *c.commitment;
    if (uc.max_units) return uc.unit_capacity * *uc.max_units;
    return uc.unit_capacity * v.get(VarKind::Units, c.id);
  }
  if (!c.capacity.optimizable) return c.capacity.initial;
  if (c.capacity.per_period)
    return c.capacity.initial + v.get(VarKind::PinstalledPeriod, c.id, sys.time_grid.period_of_step[t]);
  return c.capacity.initial + v.get(VarKind::Pinstalled, c.id);
}

double storage_capacity(const Storage& s, const SolutionView& v) {
  return s.capacity_fixed + (s.capacity_optimizable ? v.get(VarKind::CapacityVar, s.id) : 0.0);
}

double secondary_rate(const Component& c, const SolutionView& v, int t) {
  if (const auto* cc = std::get_if<CoupledConversion>(&c.conversion))
    return v.get(VarKind::Pout, c.id, t) * cc->secondary_efficiency / cc->primary_efficiency;
  if (std::holds_alternative<FieldConversion>(c.conversion)) return v.get(VarKind::PoutSecondary, c.id, t);
  return 0.0;
}

}  // namespace detail

double input_rate(const Component& c, const SolutionView& v, int t) {
  const double out = v.get(VarKind::Pout, c.id, t);
  if (c.commitment && c.commitment->partial_load)
    return c.commitment->partial_load->slope * out + c.commitment->partial_load->offset * v.get(VarKind::On, c.id, t);
  return out / c.primary_efficiency();
}

std::vector<double> storage_fill(const EnergySystem& sys, const Storage& s, const SolutionView& v) {
  const auto& grid = sys.time_grid;
  std::vector<double> fill(grid.num_steps());
  double level = s.initial_fill;
  for (std::size_t t = 0; t < fill.size(); ++t) {
    const int ti = static_cast<int>(t);
    level += grid.step_hours[t] * (s.charge_efficiency * v.get(VarKind::Pcharge, s.id, ti) -
                                   v.get(VarKind::Pdischarge, s.id, ti) / s.discharge_efficiency);
    fill[t] = level;
  }
  return fill;
}

CostBreakdown cost_breakdown(const EnergySystem& sys, const SolutionView& v) {
  CostBreakdown out;
  const auto& grid = sys.time_grid;
  const double scale = sys.annual_cost_scale();
  const int T = static_cast<int>(grid.num_steps());
  for (const auto& c : sys.components) {
    const double price = c.costs.emission_price.value_or(0.0);
    for (int t = 0; t < T; ++t) {
      const double energy = input_rate(c, v, t) * grid.step_hours[t];
      out.fuel += c.costs.fuel.at(t) * energy;
      out.emission += price * c.costs.emission_factor * energy;
    }
    if (c.commitment) {
      for (int t = 0; t < T; ++t) out.startup += c.commitment->startup_cost * v.get(VarKind::Startup, c.id, t);
      if (!c.commitment->max_units) {
        const double mw = c.commitment->unit_capacity * v.get(VarKind::Units, c.id) * scale;
        out.invest += c.costs.invest * mw;
        out.maintenance += c.costs.maintenance * mw;
      }
    } else if (c.capacity.optimizable && c.capacity.per_period) {
      const int P = grid.num_periods();
      for (int p = 0; p < P; ++p) {
        const double mw = v.get(VarKind::PinstalledPeriod, c.id, p);
        const double share = scale * grid.period_hours(p) / grid.total_hours();
        out.maintenance += c.costs.maintenance * share * mw;
        if (c.capacity.period_costing == PeriodCosting::Installed)
          out.invest += c.costs.invest * share * mw;
        else if (p == 0)
          out.build += c.capacity.build_cost * mw;
        if (p > 0) out.build += c.capacity.build_cost * v.get(VarKind::Pbuilt, c.id, p);
      }
    } else if (c.capacity.optimizable) {
      const double mw = v.get(VarKind::Pinstalled, c.id) * scale;
      out.invest += c.costs.invest * mw;
      out.maintenance += c.costs.maintenance * mw;
    }
    if (const auto* r = std::get_if<OptimizedRamp>(&c.ramp))
      out.ramp += r->cost_up * v.get(VarKind::LCRupVar, c.id) + r->cost_down * v.get(VarKind::LCRdownVar, c.id);
  }
  for (const auto& s : sys.storages) {
    if (s.capacity_optimizable) out.storage += s.capacity_cost * scale * v.get(VarKind::CapacityVar, s.id);
    if (const auto* r = std::get_if<OptimizedRate>(&s.rate))
      out.storage += scale * (r->cost_charge * v.get(VarKind::PmaxchargeVar, s.id) +
                              r->cost_discharge * v.get(VarKind::PmaxdischargeVar, s.id));
  }
  return out;
}

double emissions_total(const EnergySystem& sys, const SolutionView& v) {
  const auto& grid = sys.time_grid;
  double total = 0.0;
  for (const auto& c : sys.components) {
    if (c.costs.emission_factor == 0.0) continue;
    for (std::size_t t = 0; t < grid.num_steps(); ++t)
      total += c.costs.emission_factor * grid.step_hours[t] * input_rate(c, v, static_cast<int>(t));
  }
  return total;
}

double emissions_total(const EnergySystem& sys, const LinearProgram& prog, const Solution& sol) {
  return emissions_total(sys, SolutionView(prog, sol));
}

bool ResidualReport::pass() const { return worst() <= tolerance; }

double ResidualReport::worst() const {
  double w = integrality;
  for (double r : family) w = std::max(w, r);
  return w;
}

RunReport extract_report(const EnergySystem& sys, const LinearProgram& prog, const Solution& sol, double tolerance) {
  if (!sol.has_point())
    throw AnalysisError("NO_SOLUTION: solver status " + std::string(to_string(sol.status)) + " carries no schedule");
  const SolutionView v(prog, sol);
  const auto& grid = sys.time_grid;
  const int T = static_cast<int>(grid.num_steps());

  RunReport rep;
  rep.status = sol.status;
  rep.objective = sol.objective;
  rep.bound = sol.bound;
  rep.gap = sol.gap;

  for (const auto& c : sys.components) {
    ComponentReport cr;
    cr.id = c.id;
    const bool has_secondary = !c.secondary_output_node().empty();
    const bool has_input = !c.input_node().empty();
    const bool partial = c.commitment && c.commitment->partial_load;
    double energy = 0.0, capacity_hours = 0.0, mean = 0.0;
    for (int t = 0; t < T; ++t) {
      const double out = v.get(VarKind::Pout, c.id, t);
      cr.output.push_back(out);
      if (has_secondary) cr.secondary_output.push_back(detail::secondary_rate(c, v, t));
      if (has_input) cr.input.push_back(input_rate(c, v, t));
      if (c.commitment) cr.on.push_back(v.get(VarKind::On, c.id, t));
      if (partial) {
        const double in = input_rate(c, v, t);
        cr.efficiency.push_back(in > 0.0 ? out / in : 0.0);
      }
      const double cap = detail::installed_at(sys, c, v, t);
      cr.installed = std::max(cr.installed, cap);
      energy += out * grid.step_hours[t];
      capacity_hours += cap * grid.step_hours[t];
      mean += out;
    }
    if (c.capacity.optimizable && c.capacity.per_period && !c.commitment)
      for (int p = 0; p < grid.num_periods(); ++p)
        cr.installed_per_period.push_back(c.capacity.initial + v.get(VarKind::PinstalledPeriod, c.id, p));
    cr.capacity_factor = capacity_hours > 0.0 ? energy / capacity_hours : 0.0;
    if (T > 0) {
      mean /= T;
      for (double o : cr.output) cr.output_variance += (o - mean) * (o - mean);
      cr.output_variance /= T;
    }
    rep.components.push_back(std::move(cr));
  }

  for (const auto& s : sys.storages) {
    StorageReport sr;
    sr.id = s.id;
    sr.fill = storage_fill(sys, s, v);
    for (int t = 0; t < T; ++t) {
      sr.charge.push_back(v.get(VarKind::Pcharge, s.id, t));
      sr.discharge.push_back(v.get(VarKind::Pdischarge, s.id, t));
    }
    sr.capacity = detail::storage_capacity(s, v);
    rep.storages.push_back(std::move(sr));
  }

  rep.costs = cost_breakdown(sys, v);
  rep.emissions = emissions_total(sys, v);
  rep.residuals = verify_solution(sys, prog, sol, tolerance);
  return rep;
}

}  // namespace enopt
