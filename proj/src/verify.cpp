#include <algorithm>
#include <cmath>

#include "analyze_detail.hpp"
#include "enopt/analyze.hpp"
#include "enopt/finance.hpp"

namespace enopt {

namespace {

class Verifier {
 public:
  Verifier(const EnergySystem& sys, const SolutionView& v, ResidualReport& rep)
      : sys_(sys), v_(v), rep_(rep), grid_(sys.time_grid), T_(static_cast<int>(grid_.num_steps())) {}

  void run() {
    capacities();
    balances();
    fields();
    storages();
    ramps();
    build_periods();
    emissions();
    commitment();
    finance();
    objective();
  }

 private:
  void record(EquationTag tag, double residual) {
    double& slot = rep_.family[equation_number(tag) - 1];
    slot = std::max(slot, std::max(0.0, residual));
  }

  double out(const Component& c, int t) const { return v_.get(VarKind::Pout, c.id, t); }
  double on(const Component& c, int t) const {
    return t < 0 ? c.commitment->initial_on : v_.get(VarKind::On, c.id, t);
  }
  double installed(const Component& c, int t) const { return detail::installed_at(sys_, c, v_, t); }
  double scale() const { return std::max(1.0, std::abs(v_.objective())); }

  void capacities() {
    for (const auto& c : sys_.components) {
      const EquationTag tag = c.capacity.optimizable && c.capacity.per_period && !c.commitment ? EquationTag::Eq18
                                                                                                 : EquationTag::Eq1;
      for (int t = 0; t < T_; ++t) {
        record(tag, -out(c, t));
        if (!c.commitment) record(tag, out(c, t) - c.capacity.availability.at(t) * installed(c, t));
      }
      if (c.capacity.optimizable && c.capacity.max_installed) {
        for (int t = 0; t < T_; ++t) record(EquationTag::Eq6, installed(c, t) - *c.capacity.max_installed);
        if (!c.commitment) {
          record(EquationTag::Eq6, -v_.get(VarKind::Pinstalled, c.id));
          for (int p = 0; p < grid_.num_periods(); ++p)
            record(EquationTag::Eq6, -v_.get(VarKind::PinstalledPeriod, c.id, p));
        }
      }
    }
    for (const auto& s : sys_.storages) {
      if (!s.capacity_optimizable) continue;
      const double extra = v_.get(VarKind::CapacityVar, s.id);
      record(EquationTag::Eq6, -extra);
      if (s.capacity_max) record(EquationTag::Eq6, s.capacity_fixed + extra - *s.capacity_max);
    }
  }

  EquationTag balance_family(const Node& n) const {
    bool coupled = false, field = false, partial = false;
    for (const auto& c : sys_.components) {
      if (const auto* cc = std::get_if<CoupledConversion>(&c.conversion); cc && cc->secondary_output == n.id)
        coupled = true;
      if (const auto* fc = std::get_if<FieldConversion>(&c.conversion); fc && fc->secondary_output == n.id)
        field = true;
      if (c.commitment && c.commitment->partial_load && c.input_node() == n.id) partial = true;
    }
    if (partial) return EquationTag::Eq25;
    if (field) return EquationTag::Eq11;
    if (coupled) return EquationTag::Eq7;
    return EquationTag::Eq2;
  }

  void balances() {
    for (const auto& n : sys_.nodes) {
      if (n.boundary) continue;
      const EquationTag tag = balance_family(n);
      auto& series = rep_.balance[n.id];
      series.assign(T_, 0.0);
      for (int t = 0; t < T_; ++t) {
        double net = 0.0;
        for (const auto& c : sys_.components) {
          if (c.primary_output_node() == n.id) net += out(c, t);
          if (c.secondary_output_node() == n.id) net += detail::secondary_rate(c, v_, t);
          if (c.input_node() == n.id) net -= input_rate(c, v_, t);
        }
        for (const auto& s : sys_.storages) {
          if (s.node != n.id) continue;
          net += v_.get(VarKind::Pdischarge, s.id, t) - v_.get(VarKind::Pcharge, s.id, t);
        }
        series[t] = std::abs(net - n.load.at(t));
        record(tag, series[t]);
      }
    }
  }

  void fields() {
    for (const auto& c : sys_.components) {
      const auto* f = std::get_if<FieldConversion>(&c.conversion);
      if (!f) continue;
      for (int t = 0; t < T_; ++t) {
        const double p = out(c, t);
        const double s = v_.get(VarKind::PoutSecondary, c.id, t);
        record(EquationTag::Eq11, -s);
        bool first_upper = true;
        for (const auto& h : f->half_planes) {
          const double bound = h.slope * p + h.intercept;
          if (h.sense == Sense::LessEqual) {
            record(first_upper ? EquationTag::Eq8 : EquationTag::Eq9, s - bound);
            first_upper = false;
          } else {
            record(EquationTag::Eq10, bound - s);
          }
        }
      }
    }
  }

  void storages() {
    for (const auto& s : sys_.storages) {
      const std::vector<double> fill = storage_fill(sys_, s, v_);
      const double cap = detail::storage_capacity(s, v_);
      for (int t = 0; t < T_; ++t) {
        record(EquationTag::Eq12, -fill[t]);
        if (v_.has(VarKind::Fill, s.id, t))
          record(EquationTag::Eq12, std::abs(v_.get(VarKind::Fill, s.id, t) - fill[t]));
        record(EquationTag::Eq13, fill[t] - cap);
        const double ch = v_.get(VarKind::Pcharge, s.id, t);
        const double dis = v_.get(VarKind::Pdischarge, s.id, t);
        record(EquationTag::Eq14, -ch);
        record(EquationTag::Eq15, -dis);
        double ch_max = 0.0, dis_max = 0.0;
        if (const auto* r = std::get_if<FixedRate>(&s.rate)) {
          ch_max = r->max_charge;
          dis_max = r->max_discharge;
        } else if (const auto* r = std::get_if<CRateLinked>(&s.rate)) {
          ch_max = dis_max = cap / r->c_rate;
        } else {
          ch_max = v_.get(VarKind::PmaxchargeVar, s.id);
          dis_max = v_.get(VarKind::PmaxdischargeVar, s.id);
        }
        record(EquationTag::Eq14, ch - ch_max);
        record(EquationTag::Eq15, dis - dis_max);
      }
      if (s.final_fill_at_least_initial && T_ > 0) record(EquationTag::Eq12, s.initial_fill - fill.back());
    }
  }

  void ramps() {
    for (const auto& c : sys_.components) {
      for (int t = 1; t < T_; ++t) {
        const double delta = out(c, t) - out(c, t - 1);
        if (const auto* f = std::get_if<FixedRamp>(&c.ramp)) {
          const double hours = 0.5 * (grid_.step_hours[t - 1] + grid_.step_hours[t]);
          record(EquationTag::Eq16, delta - f->up * hours * installed(c, t));
          record(EquationTag::Eq17, -delta - f->down * hours * installed(c, t));
        } else if (std::holds_alternative<OptimizedRamp>(c.ramp)) {
          record(EquationTag::Eq16, delta - v_.get(VarKind::LCRupVar, c.id));
          record(EquationTag::Eq17, -delta - v_.get(VarKind::LCRdownVar, c.id));
        }
      }
    }
  }

  void build_periods() {
    for (const auto& c : sys_.components) {
      if (!c.capacity.optimizable || !c.capacity.per_period || c.commitment) continue;
      for (int p = 1; p < grid_.num_periods(); ++p) {
        const double built = v_.get(VarKind::Pbuilt, c.id, p);
        record(EquationTag::Eq19, -built);
        record(EquationTag::Eq19, v_.get(VarKind::PinstalledPeriod, c.id, p) -
                                      v_.get(VarKind::PinstalledPeriod, c.id, p - 1) - built);
      }
    }
  }

  void emissions() {
    if (!sys_.co2_cap || std::isinf(*sys_.co2_cap)) return;
    const double total = emissions_total(sys_, v_);
    record(EquationTag::Eq21, (total - *sys_.co2_cap) / std::max(1.0, std::abs(*sys_.co2_cap)));
  }

  void integral(double x) { rep_.integrality = std::max(rep_.integrality, std::abs(x - std::round(x))); }

  void commitment() {
    for (const auto& c : sys_.components) {
      if (!c.commitment) continue;
      const auto& uc = *c.commitment;
      for (int t = 0; t < T_; ++t) {
        const double u = on(c, t);
        const double start = v_.get(VarKind::Startup, c.id, t);
        integral(u);
        integral(start);
        record(EquationTag::Eq22, out(c, t) - u * uc.unit_capacity * c.capacity.availability.at(t));
        record(EquationTag::Eq23, u * uc.unit_min_load - out(c, t));
        record(EquationTag::Eq24, -start);
        record(EquationTag::Eq24, u - on(c, t - 1) - start);
        record(EquationTag::Eq22, -u);
        if (uc.max_units) record(EquationTag::Eq27, u - *uc.max_units);
        else record(EquationTag::Eq27, u - v_.get(VarKind::Units, c.id));

        if (uc.partial_load && u > 0.5) {
          const double in = uc.partial_load->slope * out(c, t) + uc.partial_load->offset * u;
          const double eta = in > 0.0 ? out(c, t) / in : 0.0;
          record(EquationTag::Eq26, std::max(-eta, eta - 1.0 / uc.partial_load->slope));
        }

        if (const int n = uc.min_down_steps; n > 0) {
          double window = 0.0;
          for (int m = 1; m <= n; ++m) window += on(c, t - m);
          record(EquationTag::Eq28, (u - on(c, t - 1)) * n + window - n);
        }
        if (const int n = uc.min_up_steps; n > 0) {
          double window = 0.0;
          for (int m = 1; m <= n; ++m) window += on(c, t - m);
          record(EquationTag::Eq29, (on(c, t - 1) - u) * n - window);
        }
      }
      if (!uc.max_units) integral(v_.get(VarKind::Units, c.id));
    }
  }

  // Investment cost provenance: the stored output-side annual cost must
  // follow from its recorded basis.
  void finance() {
    for (const auto& c : sys_.components) {
      const auto& basis = c.costs.invest_basis;
      if (!basis) continue;
      double annual = basis->annualized_input.value_or(0.0);
      if (basis->annuity) {
        const auto& a = *basis->annuity;
        const double i = a.interest_rate;
        double crf = 1.0 / a.lifetime;
        if (i > 0.0) {
          const double growth = std::pow(1.0 + i, a.lifetime);
          crf = i * growth / (growth - 1.0);
        }
        const double reference = a.total_investment * crf;
        annual = annualize(a);
        record(EquationTag::Eq4, std::abs(annual - reference) / std::max(1.0, std::abs(reference)));
      }
      const double expected = basis->input_side ? annual / c.primary_efficiency() + basis->output_extra
                                                : annual + basis->output_extra;
      record(EquationTag::Eq5, std::abs(c.costs.invest - expected) / std::max(1.0, std::abs(expected)));
    }
  }

  // Objective agreement, and every costed auxiliary variable sitting at the
  // smallest value its rows allow (cost-weighted, relative to the objective).
  void objective() {
    const CostBreakdown costs = cost_breakdown(sys_, v_);
    record(EquationTag::Eq3, std::abs(v_.objective() - costs.total()) / scale());

    const double annual_scale = sys_.annual_cost_scale();
    auto waste = [&](double cost, double value, double minimal) {
      if (cost > 0.0) record(EquationTag::Eq20, cost * (value - minimal) / scale());
    };
    for (const auto& c : sys_.components) {
      if (c.capacity.optimizable && c.capacity.per_period && !c.commitment) {
        for (int p = 1; p < grid_.num_periods(); ++p) {
          const double grow = v_.get(VarKind::PinstalledPeriod, c.id, p) - v_.get(VarKind::PinstalledPeriod, c.id, p - 1);
          waste(c.capacity.build_cost, v_.get(VarKind::Pbuilt, c.id, p), std::max(0.0, grow));
        }
      }
      if (const auto* r = std::get_if<OptimizedRamp>(&c.ramp)) {
        double up = 0.0, down = 0.0;
        for (int t = 1; t < T_; ++t) {
          up = std::max(up, out(c, t) - out(c, t - 1));
          down = std::max(down, out(c, t - 1) - out(c, t));
        }
        waste(r->cost_up, v_.get(VarKind::LCRupVar, c.id), up);
        waste(r->cost_down, v_.get(VarKind::LCRdownVar, c.id), down);
      }
      if (c.commitment) {
        const auto& uc = *c.commitment;
        for (int t = 0; t < T_; ++t)
          waste(uc.startup_cost, v_.get(VarKind::Startup, c.id, t), std::max(0.0, on(c, t) - on(c, t - 1)));
        if (!uc.max_units) {
          double needed = 0.0;
          for (int t = 0; t < T_; ++t) needed = std::max(needed, on(c, t));
          if (const auto* f = std::get_if<FixedRamp>(&c.ramp)) {
            for (int t = 1; t < T_; ++t) {
              const double hours = 0.5 * (grid_.step_hours[t - 1] + grid_.step_hours[t]);
              const double delta = out(c, t) - out(c, t - 1);
              if (f->up > 0.0) needed = std::max(needed, std::ceil(delta / (f->up * hours * uc.unit_capacity) - 1e-9));
              if (f->down > 0.0)
                needed = std::max(needed, std::ceil(-delta / (f->down * hours * uc.unit_capacity) - 1e-9));
            }
          }
          waste((c.costs.invest + c.costs.maintenance) * uc.unit_capacity * annual_scale,
                v_.get(VarKind::Units, c.id), needed);
        }
      }
    }
    for (const auto& s : sys_.storages) {
      const std::vector<double> fill = storage_fill(sys_, s, v_);
      double ch = 0.0, dis = 0.0, level = 0.0;
      for (int t = 0; t < T_; ++t) {
        ch = std::max(ch, v_.get(VarKind::Pcharge, s.id, t));
        dis = std::max(dis, v_.get(VarKind::Pdischarge, s.id, t));
        level = std::max(level, fill[t]);
      }
      if (s.capacity_optimizable) {
        double needed = level;
        if (const auto* r = std::get_if<CRateLinked>(&s.rate)) needed = std::max(needed, r->c_rate * std::max(ch, dis));
        waste(s.capacity_cost * annual_scale, v_.get(VarKind::CapacityVar, s.id),
              std::max(0.0, needed - s.capacity_fixed));
      }
      if (const auto* r = std::get_if<OptimizedRate>(&s.rate)) {
        waste(r->cost_charge * annual_scale, v_.get(VarKind::PmaxchargeVar, s.id), ch);
        waste(r->cost_discharge * annual_scale, v_.get(VarKind::PmaxdischargeVar, s.id), dis);
      }
    }
  }

  const EnergySystem& sys_;
  const SolutionView& v_;
  ResidualReport& rep_;
  const TimeGrid& grid_;
  int T_;
};

}  // namespace

ResidualReport verify_solution(const EnergySystem& sys, const LinearProgram& prog, const Solution& sol,
                               double tolerance) {
  ResidualReport rep;
  rep.tolerance = tolerance;
  if (!sol.has_point()) {
    rep.family.fill(kInf);
    return rep;
  }
  const SolutionView v(prog, sol);
  Verifier(sys, v, rep).run();
  return rep;
}

}  // namespace enopt
