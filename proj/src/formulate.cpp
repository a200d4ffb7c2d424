#include "enopt/formulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace enopt {

namespace {

int steps_of(const EnergySystem& sys) { return static_cast<int>(sys.time_grid.num_steps()); }

bool has_own_capacity_rows(const Component& c) { return !c.commitment.has_value(); }

// Hours between the midpoints of steps t-1 and t; ramp limits are per hour.
double ramp_hours(const TimeGrid& grid, int t) {
  return 0.5 * (grid.step_hours[t - 1] + grid.step_hours[t]);
}

}  // namespace

double input_per_output(const Component& c) {
  if (c.commitment && c.commitment->partial_load) return c.commitment->partial_load->slope;
  return 1.0 / c.primary_efficiency();
}

ProgramBuilder::ProgramBuilder(const EnergySystem& sys, CompileOptions options)
    : sys_(sys), options_(options) {
  declare_variables();
}

int ProgramBuilder::declare(VarKind kind, const std::string& owner, int index, double lower,
                            double upper, bool integer) {
  return prog_.add_variable({VarRef{kind, owner, index}, lower, upper, integer, 0.0});
}

void ProgramBuilder::declare_variables() {
  const int T = steps_of(sys_);
  const int P = sys_.time_grid.num_periods();
  for (const auto& c : sys_.components) {
    for (int t = 0; t < T; ++t) declare(VarKind::Pout, c.id, t);
    if (std::holds_alternative<FieldConversion>(c.conversion))
      for (int t = 0; t < T; ++t) declare(VarKind::PoutSecondary, c.id, t);
    if (c.capacity.optimizable && !c.commitment) {
      if (c.capacity.per_period) {
        for (int p = 0; p < P; ++p) declare(VarKind::PinstalledPeriod, c.id, p);
        for (int p = 1; p < P; ++p) declare(VarKind::Pbuilt, c.id, p);
      } else {
        declare(VarKind::Pinstalled, c.id, -1);
      }
    }
    if (std::holds_alternative<OptimizedRamp>(c.ramp)) {
      declare(VarKind::LCRupVar, c.id, -1);
      declare(VarKind::LCRdownVar, c.id, -1);
    }
    if (c.commitment) {
      const auto& uc = *c.commitment;
      const double unit_cap = uc.max_units ? static_cast<double>(*uc.max_units) : kInf;
      for (int t = 0; t < T; ++t) declare(VarKind::On, c.id, t, 0.0, unit_cap, true);
      for (int t = 0; t < T; ++t) declare(VarKind::Startup, c.id, t, 0.0, unit_cap, true);
      if (!uc.max_units) {
        double units_max = kInf;
        if (c.capacity.max_installed && uc.unit_capacity > 0.0)
          units_max = std::floor(*c.capacity.max_installed / uc.unit_capacity + 1e-9);
        declare(VarKind::Units, c.id, -1, 0.0, units_max, true);
      }
    }
  }
  for (const auto& s : sys_.storages) {
    for (int t = 0; t < T; ++t) declare(VarKind::Pcharge, s.id, t);
    for (int t = 0; t < T; ++t) declare(VarKind::Pdischarge, s.id, t);
    if (options_.storage == StorageFormulation::Recurrence)
      for (int t = 0; t < T; ++t) declare(VarKind::Fill, s.id, t);
    if (s.capacity_optimizable) {
      const double upper = s.capacity_max ? std::max(0.0, *s.capacity_max - s.capacity_fixed) : kInf;
      declare(VarKind::CapacityVar, s.id, -1, 0.0, upper);
    }
    if (std::holds_alternative<OptimizedRate>(s.rate)) {
      declare(VarKind::PmaxchargeVar, s.id, -1);
      declare(VarKind::PmaxdischargeVar, s.id, -1);
    }
  }
}

int ProgramBuilder::var(VarKind kind, const std::string& owner, int index) const {
  return prog_.index_of(VarRef{kind, owner, index});
}

std::optional<int> ProgramBuilder::find_var(VarKind kind, const std::string& owner, int index) const {
  return prog_.find(VarRef{kind, owner, index});
}

CapacityExpr ProgramBuilder::installed_capacity(const Component& c, std::size_t step) const {
  if (c.commitment) {
    const auto& uc = *c.commitment;
    if (uc.max_units) return {uc.unit_capacity * *uc.max_units, std::nullopt, 0.0};
    return {0.0, var(VarKind::Units, c.id), uc.unit_capacity};
  }
  if (!c.capacity.optimizable) return {c.capacity.initial, std::nullopt, 0.0};
  if (c.capacity.per_period)
    return {c.capacity.initial, var(VarKind::PinstalledPeriod, c.id, sys_.time_grid.period_of_step[step]), 1.0};
  return {c.capacity.initial, var(VarKind::Pinstalled, c.id), 1.0};
}

void ProgramBuilder::add_row(EquationTag tag, const std::string& owner, int step,
                             std::vector<Term> terms, Sense sense, double rhs) {
  std::map<int, double> merged;
  for (const auto& t : terms) merged[t.var] += t.coef;
  std::vector<Term> clean;
  clean.reserve(merged.size());
  // Keep first-appearance order so rows read like the equations they encode.
  for (const auto& t : terms) {
    auto it = merged.find(t.var);
    if (it == merged.end()) continue;
    if (it->second != 0.0) clean.push_back({t.var, it->second});
    merged.erase(it);
  }
  prog_.add_row({tag, owner, step, std::move(clean), sense, rhs});
}

LinearProgram ProgramBuilder::finish() && {
  auto& rows = prog_.rows();
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.tag != b.tag) return a.tag < b.tag;
    if (a.owner != b.owner) return a.owner < b.owner;
    return a.step < b.step;
  });
  return std::move(prog_);
}

void emit_capacity_limits(ProgramBuilder& b) {
  const auto& sys = b.system();
  const int T = steps_of(sys);
  for (const auto& c : sys.components) {
    if (!has_own_capacity_rows(c)) continue;
    const EquationTag tag =
        (c.capacity.optimizable && c.capacity.per_period) ? EquationTag::Eq18 : EquationTag::Eq1;
    for (int t = 0; t < T; ++t) {
      const double avail = c.capacity.availability.at(t);
      const CapacityExpr cap = b.installed_capacity(c, t);
      std::vector<Term> terms{{b.var(VarKind::Pout, c.id, t), 1.0}};
      if (cap.var) terms.push_back({*cap.var, -avail * cap.coef});
      b.add_row(tag, c.id, t, std::move(terms), Sense::LessEqual, avail * cap.constant);
    }
  }
}

void emit_max_installed(ProgramBuilder& b) {
  const auto& sys = b.system();
  auto& vars = b.program().variables();
  for (const auto& c : sys.components) {
    if (!c.capacity.optimizable || !c.capacity.max_installed || c.commitment) continue;
    const double share = std::max(0.0, *c.capacity.max_installed - c.capacity.initial);
    if (c.capacity.per_period) {
      for (int p = 0; p < sys.time_grid.num_periods(); ++p)
        vars[b.var(VarKind::PinstalledPeriod, c.id, p)].upper = share;
    } else {
      vars[b.var(VarKind::Pinstalled, c.id)].upper = share;
    }
  }
}

void emit_node_balances(ProgramBuilder& b) {
  const auto& sys = b.system();
  const int T = steps_of(sys);
  for (const auto& n : sys.nodes) {
    if (n.boundary) continue;
    bool coupled = false, field = false, partial = false;
    for (const auto& c : sys.components) {
      if (c.secondary_output_node() == n.id) {
        coupled |= std::holds_alternative<CoupledConversion>(c.conversion);
        field |= std::holds_alternative<FieldConversion>(c.conversion);
      }
      if (c.input_node() == n.id && c.commitment && c.commitment->partial_load) partial = true;
    }
    const EquationTag tag = partial  ? EquationTag::Eq25
                            : field  ? EquationTag::Eq11
                            : coupled ? EquationTag::Eq7
                                      : EquationTag::Eq2;
    for (int t = 0; t < T; ++t) {
      std::vector<Term> terms;
      for (const auto& c : sys.components) {
        const int pout = b.var(VarKind::Pout, c.id, t);
        if (c.primary_output_node() == n.id) terms.push_back({pout, 1.0});
        if (c.secondary_output_node() == n.id) {
          if (const auto* cc = std::get_if<CoupledConversion>(&c.conversion))
            terms.push_back({pout, cc->secondary_ratio()});
          else
            terms.push_back({b.var(VarKind::PoutSecondary, c.id, t), 1.0});
        }
        if (c.input_node() == n.id) {
          if (c.commitment && c.commitment->partial_load) {
            terms.push_back({pout, -c.commitment->partial_load->slope});
            terms.push_back({b.var(VarKind::On, c.id, t), -c.commitment->partial_load->offset});
          } else {
            terms.push_back({pout, -1.0 / c.primary_efficiency()});
          }
        }
      }
      for (const auto& s : sys.storages) {
        if (s.node != n.id) continue;
        terms.push_back({b.var(VarKind::Pdischarge, s.id, t), 1.0});
        terms.push_back({b.var(VarKind::Pcharge, s.id, t), -1.0});
      }
      b.add_row(tag, n.id, t, std::move(terms), Sense::Equal, n.load.at(t));
    }
  }
}

void emit_characteristic_field(ProgramBuilder& b) {
  const auto& sys = b.system();
  const int T = steps_of(sys);
  for (const auto& c : sys.components) {
    const auto* field = std::get_if<FieldConversion>(&c.conversion);
    if (!field) continue;
    for (int t = 0; t < T; ++t) {
      const int primary = b.var(VarKind::Pout, c.id, t);
      const int secondary = b.var(VarKind::PoutSecondary, c.id, t);
      // The first upper envelope row carries EQ8, further ones EQ9, and the
      // lower envelope rows EQ10.
      bool first_upper = true;
      for (const auto& h : field->half_planes) {
        EquationTag tag = EquationTag::Eq10;
        if (h.sense == Sense::LessEqual) {
          tag = first_upper ? EquationTag::Eq8 : EquationTag::Eq9;
          first_upper = false;
        }
        b.add_row(tag, c.id, t, {{secondary, 1.0}, {primary, -h.slope}}, h.sense, h.intercept);
      }
    }
  }
}

void emit_storage(ProgramBuilder& b) {
  const auto& sys = b.system();
  const auto& grid = sys.time_grid;
  const int T = steps_of(sys);
  auto& vars = b.program().variables();
  for (const auto& s : sys.storages) {
    const auto capacity_var = b.find_var(VarKind::CapacityVar, s.id);
    const double in_gain = s.charge_efficiency;
    const double out_loss = 1.0 / s.discharge_efficiency;

    if (b.options().storage == StorageFormulation::Recurrence) {
      for (int t = 0; t < T; ++t) {
        const double dt = grid.step_hours[t];
        std::vector<Term> terms{{b.var(VarKind::Fill, s.id, t), 1.0},
                                {b.var(VarKind::Pcharge, s.id, t), -in_gain * dt},
                                {b.var(VarKind::Pdischarge, s.id, t), out_loss * dt}};
        double rhs = s.initial_fill;
        if (t > 0) {
          terms.push_back({b.var(VarKind::Fill, s.id, t - 1), -1.0});
          rhs = 0.0;
        }
        b.add_row(EquationTag::Eq12, s.id, t, std::move(terms), Sense::Equal, rhs);

        std::vector<Term> upper{{b.var(VarKind::Fill, s.id, t), 1.0}};
        if (capacity_var) upper.push_back({*capacity_var, -1.0});
        b.add_row(EquationTag::Eq13, s.id, t, std::move(upper), Sense::LessEqual, s.capacity_fixed);
      }
      if (s.final_fill_at_least_initial)
        b.add_row(EquationTag::EndFill, s.id, T - 1, {{b.var(VarKind::Fill, s.id, T - 1), 1.0}},
                  Sense::GreaterEqual, s.initial_fill);
    } else {
      std::vector<Term> running;
      for (int t = 0; t < T; ++t) {
        const double dt = grid.step_hours[t];
        running.push_back({b.var(VarKind::Pcharge, s.id, t), in_gain * dt});
        running.push_back({b.var(VarKind::Pdischarge, s.id, t), -out_loss * dt});
        b.add_row(EquationTag::Eq12, s.id, t, running, Sense::GreaterEqual, -s.initial_fill);
        std::vector<Term> upper = running;
        if (capacity_var) upper.push_back({*capacity_var, -1.0});
        b.add_row(EquationTag::Eq13, s.id, t, std::move(upper), Sense::LessEqual,
                  s.capacity_fixed - s.initial_fill);
      }
      if (s.final_fill_at_least_initial)
        b.add_row(EquationTag::EndFill, s.id, T - 1, running, Sense::GreaterEqual, 0.0);
    }

    std::visit(
        [&](const auto& rate) {
          using R = std::decay_t<decltype(rate)>;
          for (int t = 0; t < T; ++t) {
            const int charge = b.var(VarKind::Pcharge, s.id, t);
            const int discharge = b.var(VarKind::Pdischarge, s.id, t);
            if constexpr (std::is_same_v<R, FixedRate>) {
              vars[charge].upper = rate.max_charge;
              vars[discharge].upper = rate.max_discharge;
            } else if constexpr (std::is_same_v<R, CRateLinked>) {
              const double k = 1.0 / rate.c_rate;
              for (auto [v, tag] : {std::pair{charge, EquationTag::Eq14}, std::pair{discharge, EquationTag::Eq15}}) {
                std::vector<Term> terms{{v, 1.0}};
                if (capacity_var) terms.push_back({*capacity_var, -k});
                b.add_row(tag, s.id, t, std::move(terms), Sense::LessEqual, k * s.capacity_fixed);
              }
            } else {
              b.add_row(EquationTag::Eq14, s.id, t, {{charge, 1.0}, {b.var(VarKind::PmaxchargeVar, s.id), -1.0}},
                        Sense::LessEqual, 0.0);
              b.add_row(EquationTag::Eq15, s.id, t,
                        {{discharge, 1.0}, {b.var(VarKind::PmaxdischargeVar, s.id), -1.0}}, Sense::LessEqual, 0.0);
            }
          }
        },
        s.rate);
  }
}

void emit_ramp_limits(ProgramBuilder& b) {
  const auto& sys = b.system();
  const int T = steps_of(sys);
  for (const auto& c : sys.components) {
    if (std::holds_alternative<NoRamp>(c.ramp)) continue;
    for (int t = 1; t < T; ++t) {
      const int now = b.var(VarKind::Pout, c.id, t);
      const int before = b.var(VarKind::Pout, c.id, t - 1);
      if (const auto* fixed = std::get_if<FixedRamp>(&c.ramp)) {
        const CapacityExpr cap = b.installed_capacity(c, t);
        const double h = ramp_hours(sys.time_grid, t);
        for (auto [rate, tag, sign] : {std::tuple{fixed->up, EquationTag::Eq16, 1.0},
                                       std::tuple{fixed->down, EquationTag::Eq17, -1.0}}) {
          std::vector<Term> terms{{now, sign}, {before, -sign}};
          if (cap.var) terms.push_back({*cap.var, -rate * h * cap.coef});
          b.add_row(tag, c.id, t, std::move(terms), Sense::LessEqual, rate * h * cap.constant);
        }
      } else {
        b.add_row(EquationTag::Eq16, c.id, t, {{now, 1.0}, {before, -1.0}, {b.var(VarKind::LCRupVar, c.id), -1.0}},
                  Sense::LessEqual, 0.0);
        b.add_row(EquationTag::Eq17, c.id, t,
                  {{before, 1.0}, {now, -1.0}, {b.var(VarKind::LCRdownVar, c.id), -1.0}}, Sense::LessEqual, 0.0);
      }
    }
  }
}

void emit_build_periods(ProgramBuilder& b) {
  const auto& sys = b.system();
  const int P = sys.time_grid.num_periods();
  for (const auto& c : sys.components) {
    if (!c.capacity.optimizable || !c.capacity.per_period || c.commitment) continue;
    for (int p = 1; p < P; ++p) {
      b.add_row(EquationTag::Eq19, c.id, p,
                {{b.var(VarKind::PinstalledPeriod, c.id, p), 1.0},
                 {b.var(VarKind::PinstalledPeriod, c.id, p - 1), -1.0},
                 {b.var(VarKind::Pbuilt, c.id, p), -1.0}},
                Sense::LessEqual, 0.0);
    }
  }
}

void emit_unit_commitment(ProgramBuilder& b) {
  const auto& sys = b.system();
  const int T = steps_of(sys);
  for (const auto& c : sys.components) {
    if (!c.commitment) continue;
    const auto& uc = *c.commitment;
    if ((uc.min_up_steps > 0 || uc.min_down_steps > 0) && !uc.binary())
      throw FormulationError(ViolationCode::BinaryRequired,
                             "component '" + c.id + "': minimum up/down times need a binary on-variable");
    auto on = [&](int t) { return b.var(VarKind::On, c.id, t); };
    const double history = uc.initial_on;

    for (int t = 0; t < T; ++t) {
      const int pout = b.var(VarKind::Pout, c.id, t);
      const double avail = c.capacity.availability.at(t);
      b.add_row(EquationTag::Eq22, c.id, t, {{pout, 1.0}, {on(t), -uc.unit_capacity * avail}}, Sense::LessEqual, 0.0);
      b.add_row(EquationTag::Eq23, c.id, t, {{pout, 1.0}, {on(t), -uc.unit_min_load}}, Sense::GreaterEqual, 0.0);

      std::vector<Term> start{{on(t), 1.0}, {b.var(VarKind::Startup, c.id, t), -1.0}};
      double rhs = 0.0;
      if (t > 0) start.push_back({on(t - 1), -1.0});
      else rhs = history;
      b.add_row(EquationTag::Eq24, c.id, t, std::move(start), Sense::LessEqual, rhs);

      if (!uc.max_units)
        b.add_row(EquationTag::Eq27, c.id, t, {{on(t), 1.0}, {b.var(VarKind::Units, c.id), -1.0}}, Sense::LessEqual,
                  0.0);
    }

    // (on_t - on_{t-1}) * N + sum_{m=1..N} on_{t-m} <= N; steps before the
    // horizon hold `initial_on` and move to the right-hand side.
    if (const int n = uc.min_down_steps; n > 0) {
      for (int t = 0; t < T; ++t) {
        std::vector<Term> terms{{on(t), static_cast<double>(n)}};
        double rhs = n;
        if (t > 0) terms.push_back({on(t - 1), -static_cast<double>(n)});
        else rhs += n * history;
        for (int m = 1; m <= n; ++m) {
          if (t - m >= 0) terms.push_back({on(t - m), 1.0});
          else rhs -= history;
        }
        b.add_row(EquationTag::Eq28, c.id, t, std::move(terms), Sense::LessEqual, rhs);
      }
    }
    // (on_{t-1} - on_t) * N - sum_{m=1..N} on_{t-m} <= 0.
    if (const int n = uc.min_up_steps; n > 0) {
      for (int t = 0; t < T; ++t) {
        std::vector<Term> terms{{on(t), -static_cast<double>(n)}};
        double rhs = 0.0;
        if (t > 0) terms.push_back({on(t - 1), static_cast<double>(n)});
        else rhs -= n * history;
        for (int m = 1; m <= n; ++m) {
          if (t - m >= 0) terms.push_back({on(t - m), -1.0});
          else rhs += history;
        }
        b.add_row(EquationTag::Eq29, c.id, t, std::move(terms), Sense::LessEqual, rhs);
      }
    }
  }
}

void emit_objective(ProgramBuilder& b) {
  const auto& sys = b.system();
  const auto& grid = sys.time_grid;
  const int T = steps_of(sys);
  const int P = grid.num_periods();
  const double scale = sys.annual_cost_scale();
  auto& prog = b.program();
  auto& vars = prog.variables();
  auto flag_costless = [&](int v, const std::string& owner) {
    if (vars[v].cost > 0.0) return;
    prog.warn({IssueCode::CostlessSlack, owner,
               vars[v].ref.name() + " carries no positive cost; its value is not pinned to the minimum"});
  };

  for (const auto& c : sys.components) {
    const double per_mwh_extra = c.costs.emission_price.value_or(0.0) * c.costs.emission_factor;
    const auto* partial = c.commitment && c.commitment->partial_load ? &*c.commitment->partial_load : nullptr;
    for (int t = 0; t < T; ++t) {
      const double per_input = (c.costs.fuel.at(t) + per_mwh_extra) * grid.step_hours[t];
      if (partial) {
        vars[b.var(VarKind::Pout, c.id, t)].cost += per_input * partial->slope;
        vars[b.var(VarKind::On, c.id, t)].cost += per_input * partial->offset;
      } else {
        vars[b.var(VarKind::Pout, c.id, t)].cost += per_input / c.primary_efficiency();
      }
    }

    const double annual = c.costs.invest + c.costs.maintenance;
    if (auto v = b.find_var(VarKind::Pinstalled, c.id)) vars[*v].cost += annual * scale;
    if (c.capacity.optimizable && c.capacity.per_period && !c.commitment) {
      const double total_hours = grid.total_hours();
      for (int p = 0; p < P; ++p) {
        const double share = scale * grid.period_hours(p) / total_hours;
        const int v = b.var(VarKind::PinstalledPeriod, c.id, p);
        if (c.capacity.period_costing == PeriodCosting::Installed) {
          vars[v].cost += annual * share;
        } else {
          vars[v].cost += c.costs.maintenance * share;
          if (p == 0) vars[v].cost += c.capacity.build_cost;
        }
      }
      for (int p = 1; p < P; ++p) {
        const int v = b.var(VarKind::Pbuilt, c.id, p);
        vars[v].cost += c.capacity.build_cost;
        flag_costless(v, c.id);
      }
    }
    if (const auto* r = std::get_if<OptimizedRamp>(&c.ramp)) {
      const int up = b.var(VarKind::LCRupVar, c.id);
      const int down = b.var(VarKind::LCRdownVar, c.id);
      vars[up].cost += r->cost_up;
      vars[down].cost += r->cost_down;
      flag_costless(up, c.id);
      flag_costless(down, c.id);
    }
    if (c.commitment) {
      for (int t = 0; t < T; ++t) {
        const int v = b.var(VarKind::Startup, c.id, t);
        vars[v].cost += c.commitment->startup_cost;
        if (t == 0) flag_costless(v, c.id);
      }
      if (auto v = b.find_var(VarKind::Units, c.id)) {
        vars[*v].cost += annual * c.commitment->unit_capacity * scale;
        flag_costless(*v, c.id);
      }
    }
  }

  for (const auto& s : sys.storages) {
    if (auto v = b.find_var(VarKind::CapacityVar, s.id)) {
      vars[*v].cost += s.capacity_cost * scale;
      flag_costless(*v, s.id);
    }
    if (const auto* r = std::get_if<OptimizedRate>(&s.rate)) {
      const int ch = b.var(VarKind::PmaxchargeVar, s.id);
      const int dis = b.var(VarKind::PmaxdischargeVar, s.id);
      vars[ch].cost += r->cost_charge * scale;
      vars[dis].cost += r->cost_discharge * scale;
      flag_costless(ch, s.id);
      flag_costless(dis, s.id);
    }
  }
}

void emit_co2_cap(ProgramBuilder& b) {
  const auto& sys = b.system();
  if (!sys.co2_cap || std::isinf(*sys.co2_cap)) return;
  const auto& grid = sys.time_grid;
  std::vector<Term> terms;
  for (const auto& c : sys.components) {
    if (c.costs.emission_factor == 0.0) continue;
    const auto* partial = c.commitment && c.commitment->partial_load ? &*c.commitment->partial_load : nullptr;
    for (std::size_t t = 0; t < grid.num_steps(); ++t) {
      const double per_input = c.costs.emission_factor * grid.step_hours[t];
      const int ti = static_cast<int>(t);
      if (partial) {
        terms.push_back({b.var(VarKind::Pout, c.id, ti), per_input * partial->slope});
        terms.push_back({b.var(VarKind::On, c.id, ti), per_input * partial->offset});
      } else {
        terms.push_back({b.var(VarKind::Pout, c.id, ti), per_input / c.primary_efficiency()});
      }
    }
  }
  b.add_row(EquationTag::Eq21, "system", -1, std::move(terms), Sense::LessEqual, *sys.co2_cap);
}

LinearProgram compile(const EnergySystem& sys, CompileOptions options) {
  const auto report = validate_system(sys);
  if (!report.valid()) {
    const auto errors = report.errors();
    const auto& first = errors.front();
    throw FormulationError(first.code, "cannot compile invalid system: " + std::string(to_string(first.code)) +
                                           " at " + first.field + ": " + first.message);
  }
  ProgramBuilder b(sys, options);
  emit_capacity_limits(b);
  emit_max_installed(b);
  emit_node_balances(b);
  emit_characteristic_field(b);
  emit_storage(b);
  emit_ramp_limits(b);
  emit_build_periods(b);
  emit_unit_commitment(b);
  emit_objective(b);
  emit_co2_cap(b);
  return std::move(b).finish();
}

}  // namespace enopt
