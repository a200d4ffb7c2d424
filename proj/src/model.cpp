#include "enopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace enopt {

TimeGrid TimeGrid::uniform(std::size_t steps, double hours) {
  TimeGrid grid;
  grid.step_hours.assign(steps, hours);
  grid.period_of_step.assign(steps, 0);
  return grid;
}

int TimeGrid::num_periods() const {
  if (period_of_step.empty()) return 0;
  return *std::max_element(period_of_step.begin(), period_of_step.end()) + 1;
}

double TimeGrid::total_hours() const {
  double sum = 0.0;
  for (double h : step_hours) sum += h;
  return sum;
}

double TimeGrid::period_hours(int period) const {
  double sum = 0.0;
  for (std::size_t t = 0; t < step_hours.size(); ++t)
    if (period_of_step[t] == period) sum += step_hours[t];
  return sum;
}

std::string Component::input_node() const {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SourceConversion>) return {};
        else return c.input;
      },
      conversion);
}

std::string Component::primary_output_node() const {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SingleConversion> || std::is_same_v<T, SourceConversion>)
          return c.output;
        else return c.primary_output;
      },
      conversion);
}

std::string Component::secondary_output_node() const {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, CoupledConversion> || std::is_same_v<T, FieldConversion>)
          return c.secondary_output;
        else return {};
      },
      conversion);
}

double Component::primary_efficiency() const {
  return std::visit(
      [](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, SourceConversion>) return 1.0;
        else if constexpr (std::is_same_v<T, SingleConversion>) return c.efficiency;
        else return c.primary_efficiency;
      },
      conversion);
}

double EnergySystem::annual_cost_scale() const {
  return scale_annual_costs ? horizon_fraction(time_grid.total_hours()) : 1.0;
}

const Node* EnergySystem::find_node(const std::string& id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

const Component* EnergySystem::find_component(const std::string& id) const {
  for (const auto& c : components)
    if (c.id == id) return &c;
  return nullptr;
}

const Storage* EnergySystem::find_storage(const std::string& id) const {
  for (const auto& s : storages)
    if (s.id == id) return &s;
  return nullptr;
}

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::EmptyTimeGrid: return "EMPTY_TIME_GRID";
    case ViolationCode::NonPositiveStep: return "NONPOSITIVE_STEP";
    case ViolationCode::PeriodOrder: return "PERIOD_ORDER";
    case ViolationCode::SeriesLength: return "SERIES_LENGTH";
    case ViolationCode::AvailabilityRange: return "AVAILABILITY_RANGE";
    case ViolationCode::NegativeValue: return "NEGATIVE_VALUE";
    case ViolationCode::MaxBelowInitial: return "MAX_BELOW_INITIAL";
    case ViolationCode::UnknownNode: return "UNKNOWN_NODE";
    case ViolationCode::SameInputOutput: return "SAME_INPUT_OUTPUT";
    case ViolationCode::BoundaryNodeLoad: return "BOUNDARY_NODE_LOAD";
    case ViolationCode::NonPositiveEfficiency: return "NONPOSITIVE_EFFICIENCY";
    case ViolationCode::FieldTooFewHalfPlanes: return "FIELD_TOO_FEW_HALF_PLANES";
    case ViolationCode::FieldMissingSense: return "FIELD_MISSING_SENSE";
    case ViolationCode::DuplicateId: return "DUPLICATE_ID";
    case ViolationCode::UnitMinLoadRange: return "UNIT_MIN_LOAD_RANGE";
    case ViolationCode::BinaryRequired: return "BINARY_REQUIRED";
    case ViolationCode::PartialLoadSlope: return "PARTIAL_LOAD_SLOPE";
    case ViolationCode::PartialLoadWithoutInput: return "PARTIAL_LOAD_WITHOUT_INPUT";
    case ViolationCode::CommitmentCapacityConflict: return "COMMITMENT_CAPACITY_CONFLICT";
    case ViolationCode::StorageInitialExceedsCapacity: return "STORAGE_INITIAL_EXCEEDS_CAPACITY";
    case ViolationCode::StorageEfficiencyRange: return "STORAGE_EFFICIENCY_RANGE";
    case ViolationCode::NonPositiveCRate: return "NONPOSITIVE_C_RATE";
    case ViolationCode::InvalidAnnuity: return "INVALID_ANNUITY";
    case ViolationCode::DegenerateNoLoad: return "DEGENERATE_NO_LOAD";
  }
  return "UNKNOWN";
}

bool ValidationReport::valid() const {
  return std::none_of(violations.begin(), violations.end(),
                      [](const Violation& v) { return v.severity == Severity::Error; });
}

std::vector<Violation> ValidationReport::errors() const {
  std::vector<Violation> out;
  std::copy_if(violations.begin(), violations.end(), std::back_inserter(out),
               [](const Violation& v) { return v.severity == Severity::Error; });
  return out;
}

bool ValidationReport::has(ViolationCode code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [code](const Violation& v) { return v.code == code; });
}

bool ValidationReport::operator==(const ValidationReport& other) const {
  if (violations.size() != other.violations.size()) return false;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto& a = violations[i];
    const auto& b = other.violations[i];
    if (a.code != b.code || a.severity != b.severity || a.field != b.field || a.message != b.message)
      return false;
  }
  return true;
}

namespace {

class Validator {
 public:
  explicit Validator(const EnergySystem& sys) : sys_(sys), steps_(sys.time_grid.num_steps()) {}

  ValidationReport run() {
    check_grid();
    check_ids();
    for (const auto& n : sys_.nodes) check_node(n);
    for (const auto& c : sys_.components) check_component(c);
    for (const auto& s : sys_.storages) check_storage(s);
    if (sys_.co2_cap && *sys_.co2_cap < 0.0)
      add(ViolationCode::NegativeValue, "co2_cap", "CO2 cap must be non-negative");
    check_degenerate();
    return std::move(report_);
  }

 private:
  void add(ViolationCode code, std::string field, std::string message,
           Severity severity = Severity::Error) {
    report_.violations.push_back({code, severity, std::move(field), std::move(message)});
  }

  void check_grid() {
    const auto& grid = sys_.time_grid;
    if (steps_ == 0) {
      add(ViolationCode::EmptyTimeGrid, "time_grid.step_hours", "time grid has no steps");
      return;
    }
    for (std::size_t t = 0; t < steps_; ++t) {
      if (!(grid.step_hours[t] > 0.0)) {
        std::ostringstream msg;
        msg << "step duration must be > 0, got " << grid.step_hours[t];
        add(ViolationCode::NonPositiveStep, "time_grid.step_hours[" + std::to_string(t) + "]", msg.str());
      }
    }
    if (grid.period_of_step.size() != steps_) {
      add(ViolationCode::SeriesLength, "time_grid.period_of_step",
          "period mapping has " + std::to_string(grid.period_of_step.size()) + " entries for " +
              std::to_string(steps_) + " steps");
      return;
    }
    if (grid.period_of_step.front() != 0)
      add(ViolationCode::PeriodOrder, "time_grid.period_of_step[0]", "first step must belong to period 0");
    for (std::size_t t = 1; t < steps_; ++t) {
      const int step = grid.period_of_step[t] - grid.period_of_step[t - 1];
      if (step != 0 && step != 1) {
        add(ViolationCode::PeriodOrder, "time_grid.period_of_step[" + std::to_string(t) + "]",
            "periods must be contiguous and non-decreasing");
        break;
      }
    }
  }

  void check_ids() {
    std::set<std::string> seen;
    for (const auto& n : sys_.nodes)
      if (!seen.insert(n.id).second)
        add(ViolationCode::DuplicateId, "nodes." + n.id, "duplicate node id '" + n.id + "'");
    std::set<std::string> assets;
    for (const auto& c : sys_.components)
      if (!assets.insert(c.id).second)
        add(ViolationCode::DuplicateId, "components." + c.id, "duplicate component id '" + c.id + "'");
    for (const auto& s : sys_.storages)
      if (!assets.insert(s.id).second)
        add(ViolationCode::DuplicateId, "storages." + s.id, "duplicate storage id '" + s.id + "'");
  }

  // Series may be a broadcast constant or exactly one value per step.
  bool check_length(const Profile& p, const std::string& field) {
    if (p.values.size() == 1 || p.values.size() == steps_) return true;
    add(ViolationCode::SeriesLength, field,
        "series has " + std::to_string(p.values.size()) + " values for a " + std::to_string(steps_) +
            "-step grid");
    return false;
  }

  void check_non_negative(double value, const std::string& field) {
    if (value < 0.0 || std::isnan(value)) {
      std::ostringstream msg;
      msg << "value must be non-negative, got " << value;
      add(ViolationCode::NegativeValue, field, msg.str());
    }
  }

  void check_node_ref(const std::string& id, const std::string& field) {
    if (!sys_.find_node(id)) add(ViolationCode::UnknownNode, field, "unknown node '" + id + "'");
  }

  void check_efficiency(double eta, const std::string& field) {
    if (!(eta > 0.0)) {
      std::ostringstream msg;
      msg << "efficiency must be > 0, got " << eta;
      add(ViolationCode::NonPositiveEfficiency, field, msg.str());
    }
  }

  void check_node(const Node& n) {
    const std::string base = "nodes." + n.id;
    check_length(n.load, base + ".load");
    if (n.boundary && std::any_of(n.load.values.begin(), n.load.values.end(),
                                  [](double v) { return v != 0.0; }))
      add(ViolationCode::BoundaryNodeLoad, base + ".load", "boundary node cannot carry a load");
  }

  void check_conversion(const Component& c, const std::string& base) {
    const std::string f = base + ".conversion";
    std::visit(
        [&](const auto& conv) {
          using T = std::decay_t<decltype(conv)>;
          if constexpr (std::is_same_v<T, SourceConversion>) {
            check_node_ref(conv.output, f + ".output");
          } else if constexpr (std::is_same_v<T, SingleConversion>) {
            check_node_ref(conv.input, f + ".input");
            check_node_ref(conv.output, f + ".output");
            check_efficiency(conv.efficiency, f + ".efficiency");
            if (conv.input == conv.output)
              add(ViolationCode::SameInputOutput, f, "input and output node coincide");
          } else {
            check_node_ref(conv.input, f + ".input");
            check_node_ref(conv.primary_output, f + ".primary_output");
            check_node_ref(conv.secondary_output, f + ".secondary_output");
            check_efficiency(conv.primary_efficiency, f + ".primary_efficiency");
            if (conv.input == conv.primary_output || conv.input == conv.secondary_output)
              add(ViolationCode::SameInputOutput, f, "input and output node coincide");
            if constexpr (std::is_same_v<T, CoupledConversion>) {
              check_efficiency(conv.secondary_efficiency, f + ".secondary_efficiency");
            } else {
              if (conv.half_planes.size() < 3)
                add(ViolationCode::FieldTooFewHalfPlanes, f + ".half_planes",
                    "characteristic field needs at least 3 half-planes, got " +
                        std::to_string(conv.half_planes.size()));
              const bool has_upper = std::any_of(conv.half_planes.begin(), conv.half_planes.end(),
                                                 [](const HalfPlane& h) { return h.sense == Sense::LessEqual; });
              const bool has_lower = std::any_of(conv.half_planes.begin(), conv.half_planes.end(),
                                                 [](const HalfPlane& h) { return h.sense == Sense::GreaterEqual; });
              const bool has_equal = std::any_of(conv.half_planes.begin(), conv.half_planes.end(),
                                                 [](const HalfPlane& h) { return h.sense == Sense::Equal; });
              if (!has_upper || !has_lower || has_equal)
                add(ViolationCode::FieldMissingSense, f + ".half_planes",
                    "characteristic field needs both <= and >= half-planes and no equalities");
            }
          }
        },
        c.conversion);
  }

  void check_capacity(const Component& c, const std::string& base) {
    const auto& cap = c.capacity;
    const std::string f = base + ".capacity";
    check_non_negative(cap.initial, f + ".initial");
    if (cap.max_installed) {
      check_non_negative(*cap.max_installed, f + ".max_installed");
      if (*cap.max_installed < cap.initial)
        add(ViolationCode::MaxBelowInitial, f + ".max_installed", "maximum capacity is below the initial capacity");
    }
    check_non_negative(cap.build_cost, f + ".build_cost");
    if (check_length(cap.availability, f + ".availability")) {
      for (std::size_t t = 0; t < cap.availability.values.size(); ++t) {
        const double a = cap.availability.values[t];
        if (!(a >= 0.0 && a <= 1.0)) {
          std::ostringstream msg;
          msg << "availability " << a << " outside [0, 1]";
          add(ViolationCode::AvailabilityRange, f + ".availability[" + std::to_string(t) + "]", msg.str());
        }
      }
    }
  }

  void check_ramp(const Component& c, const std::string& base) {
    const std::string f = base + ".ramp";
    if (const auto* r = std::get_if<FixedRamp>(&c.ramp)) {
      check_non_negative(r->up, f + ".up");
      check_non_negative(r->down, f + ".down");
    } else if (const auto* o = std::get_if<OptimizedRamp>(&c.ramp)) {
      check_non_negative(o->cost_up, f + ".cost_up");
      check_non_negative(o->cost_down, f + ".cost_down");
    }
  }

  void check_commitment(const Component& c, const std::string& base) {
    if (!c.commitment) return;
    const auto& uc = *c.commitment;
    const std::string f = base + ".commitment";
    check_non_negative(uc.startup_cost, f + ".startup_cost");
    if (!(uc.unit_min_load >= 0.0 && uc.unit_min_load <= uc.unit_capacity))
      add(ViolationCode::UnitMinLoadRange, f + ".unit_min_load", "need 0 <= unit_min_load <= unit_capacity");
    if (uc.max_units && *uc.max_units < 0)
      add(ViolationCode::NegativeValue, f + ".max_units", "max_units must be non-negative");
    if (uc.min_up_steps < 0) add(ViolationCode::NegativeValue, f + ".min_up_steps", "must be non-negative");
    if (uc.min_down_steps < 0) add(ViolationCode::NegativeValue, f + ".min_down_steps", "must be non-negative");
    if ((uc.min_up_steps > 0 || uc.min_down_steps > 0) && !uc.binary())
      add(ViolationCode::BinaryRequired, f,
          "minimum up/down times require a binary on-variable (max_units = 1)");
    if (uc.initial_on < 0 || (uc.max_units && uc.initial_on > *uc.max_units))
      add(ViolationCode::NegativeValue, f + ".initial_on", "initial_on must lie in [0, max_units]");
    if (uc.partial_load) {
      if (!(uc.partial_load->slope > 0.0))
        add(ViolationCode::PartialLoadSlope, f + ".partial_load.slope", "partial-load slope must be > 0");
      check_non_negative(uc.partial_load->offset, f + ".partial_load.offset");
      if (std::holds_alternative<SourceConversion>(c.conversion))
        add(ViolationCode::PartialLoadWithoutInput, f + ".partial_load", "source components have no input");
    }
    if (c.capacity.optimizable || c.capacity.per_period)
      add(ViolationCode::CommitmentCapacityConflict, base + ".capacity",
          "committed components size through units; capacity cannot be optimizable or per-period");
  }

  void check_costs(const Component& c, const std::string& base) {
    const auto& k = c.costs;
    const std::string f = base + ".costs";
    check_non_negative(k.invest, f + ".invest");
    check_non_negative(k.maintenance, f + ".maintenance");
    check_non_negative(k.emission_factor, f + ".emission_factor");
    if (k.emission_price) check_non_negative(*k.emission_price, f + ".emission_price");
    if (check_length(k.fuel, f + ".fuel"))
      for (std::size_t t = 0; t < k.fuel.values.size(); ++t)
        check_non_negative(k.fuel.values[t], f + ".fuel[" + std::to_string(t) + "]");
    if (k.invest_basis && k.invest_basis->annuity) {
      const auto& a = *k.invest_basis->annuity;
      if (a.lifetime < 1 || a.interest_rate < 0.0 || a.total_investment < 0.0)
        add(ViolationCode::InvalidAnnuity, f + ".invest", "annuity needs lifetime >= 1, rate >= 0, investment >= 0");
    }
  }

  void check_component(const Component& c) {
    const std::string base = "components." + c.id;
    check_conversion(c, base);
    check_capacity(c, base);
    check_ramp(c, base);
    check_commitment(c, base);
    check_costs(c, base);
  }

  void check_storage(const Storage& s) {
    const std::string f = "storages." + s.id;
    check_node_ref(s.node, f + ".node");
    check_non_negative(s.initial_fill, f + ".initial_fill");
    check_non_negative(s.capacity_fixed, f + ".capacity.fixed");
    check_non_negative(s.capacity_cost, f + ".capacity.cost");
    if (s.capacity_max) check_non_negative(*s.capacity_max, f + ".capacity.max");
    if (!s.capacity_optimizable && s.initial_fill > s.capacity_fixed)
      add(ViolationCode::StorageInitialExceedsCapacity, f + ".initial_fill", "initial fill exceeds fixed capacity");
    if (s.capacity_optimizable && s.capacity_max && s.initial_fill > s.capacity_fixed + *s.capacity_max)
      add(ViolationCode::StorageInitialExceedsCapacity, f + ".initial_fill", "initial fill exceeds maximum capacity");
    for (auto [eta, name] : {std::pair{s.charge_efficiency, ".charge_efficiency"},
                             std::pair{s.discharge_efficiency, ".discharge_efficiency"}}) {
      if (!(eta > 0.0 && eta <= 1.0)) {
        std::ostringstream msg;
        msg << "storage efficiency must lie in (0, 1], got " << eta;
        add(ViolationCode::StorageEfficiencyRange, f + name, msg.str());
      }
    }
    std::visit(
        [&](const auto& rate) {
          using T = std::decay_t<decltype(rate)>;
          if constexpr (std::is_same_v<T, FixedRate>) {
            check_non_negative(rate.max_charge, f + ".rate.max_charge");
            check_non_negative(rate.max_discharge, f + ".rate.max_discharge");
          } else if constexpr (std::is_same_v<T, CRateLinked>) {
            if (!(rate.c_rate > 0.0)) add(ViolationCode::NonPositiveCRate, f + ".rate.c_rate", "C-rate must be > 0");
          } else {
            check_non_negative(rate.cost_charge, f + ".rate.cost_charge");
            check_non_negative(rate.cost_discharge, f + ".rate.cost_discharge");
          }
        },
        s.rate);
  }

  void check_degenerate() {
    for (const auto& n : sys_.nodes)
      for (double v : n.load.values)
        if (v != 0.0) return;
    add(ViolationCode::DegenerateNoLoad, "nodes", "no node carries a nonzero load; the optimum is trivially zero",
        Severity::Warning);
  }

  const EnergySystem& sys_;
  std::size_t steps_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_system(const EnergySystem& sys) { return Validator(sys).run(); }

SystemDimensions system_dimensions(const EnergySystem& sys) {
  return {sys.time_grid.num_steps(), sys.nodes.size(), sys.components.size(), sys.storages.size(),
          static_cast<std::size_t>(sys.time_grid.num_periods())};
}

}  // namespace enopt
