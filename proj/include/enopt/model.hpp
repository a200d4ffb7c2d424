#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "enopt/finance.hpp"
#include "enopt/sense.hpp"

namespace enopt {

/// A per-step input series. A single value is broadcast over the whole grid.
struct Profile {
  std::vector<double> values;

  Profile() = default;
  Profile(double constant) : values{constant} {}  // NOLINT(implicit)
  Profile(std::vector<double> series) : values(std::move(series)) {}  // NOLINT

  bool is_constant() const { return values.size() == 1; }
  double at(std::size_t step) const {
    return values.size() == 1 ? values.front() : values[step];
  }
  bool operator==(const Profile&) const = default;
};

/// Step durations (hours) and the building period each step belongs to.
struct TimeGrid {
  std::vector<double> step_hours;
  std::vector<int> period_of_step;

  static TimeGrid uniform(std::size_t steps, double hours = 1.0);

  std::size_t num_steps() const { return step_hours.size(); }
  int num_periods() const;
  double total_hours() const;
  double period_hours(int period) const;
  bool operator==(const TimeGrid&) const = default;
};

/// A balanced carrier node. Boundary nodes (fuel supply, ambient) carry no
/// balance row and supply whatever the attached components draw.
struct Node {
  std::string id;
  std::string carrier;
  Profile load{0.0};
  bool boundary = false;
  bool operator==(const Node&) const = default;
};

struct HalfPlane {
  double slope = 0.0;
  double intercept = 0.0;
  Sense sense = Sense::LessEqual;
  bool operator==(const HalfPlane&) const = default;
};

struct SingleConversion {
  std::string input;
  std::string output;
  double efficiency = 1.0;
  bool operator==(const SingleConversion&) const = default;
};

/// Boundary inflow such as PV: no input node, unit efficiency.
struct SourceConversion {
  std::string output;
  bool operator==(const SourceConversion&) const = default;
};

/// Secondary output rigidly tied to the primary one (characteristic curve).
struct CoupledConversion {
  std::string input;
  std::string primary_output;
  std::string secondary_output;
  double primary_efficiency = 1.0;
  double secondary_efficiency = 1.0;

  double secondary_ratio() const { return secondary_efficiency / primary_efficiency; }
  bool operator==(const CoupledConversion&) const = default;
};

/// Secondary output free inside a convex polygon spanned by half-planes
/// `secondary (<=|>=) slope * primary + intercept` (characteristic field).
struct FieldConversion {
  std::string input;
  std::string primary_output;
  std::string secondary_output;
  double primary_efficiency = 1.0;
  std::vector<HalfPlane> half_planes;
  bool operator==(const FieldConversion&) const = default;
};

using Conversion =
    std::variant<SingleConversion, SourceConversion, CoupledConversion, FieldConversion>;

/// Investment wiring for per-period capacity. `Installed` charges the
/// annualised investment on every period's installed capacity and adds
/// `build_cost` on increments; `Built` charges investment only through
/// `build_cost` on the first period's capacity and on each increment.
enum class PeriodCosting { Installed, Built };

struct CapacitySpec {
  double initial = 0.0;
  bool optimizable = false;
  std::optional<double> max_installed;
  Profile availability{1.0};
  bool per_period = false;
  PeriodCosting period_costing = PeriodCosting::Installed;
  double build_cost = 0.0;  // EUR/MW on each capacity increment between periods
  bool operator==(const CapacitySpec&) const = default;
};

struct NoRamp {
  bool operator==(const NoRamp&) const = default;
};
/// Ramp limits as fractions of installed capacity per hour.
struct FixedRamp {
  double up = 1.0;
  double down = 1.0;
  bool operator==(const FixedRamp&) const = default;
};
/// Ramp limits as costed decision variables (EUR per MW of allowed change).
struct OptimizedRamp {
  double cost_up = 0.0;
  double cost_down = 0.0;
  bool operator==(const OptimizedRamp&) const = default;
};
using RampSpec = std::variant<NoRamp, FixedRamp, OptimizedRamp>;

/// Input = slope * output + offset * on.
struct PartialLoad {
  double slope = 1.0;
  double offset = 0.0;
  bool operator==(const PartialLoad&) const = default;
};

struct UnitCommitment {
  double unit_capacity = 0.0;
  double unit_min_load = 0.0;
  std::optional<int> max_units = 1;  // nullopt: number of units is optimized
  double startup_cost = 0.0;
  int min_up_steps = 0;
  int min_down_steps = 0;
  std::optional<PartialLoad> partial_load;
  int initial_on = 0;  // on-state assumed for every step before the horizon

  bool binary() const { return max_units && *max_units == 1; }
  bool operator==(const UnitCommitment&) const = default;
};

/// Provenance of an annualised investment cost; kept so results can be
/// re-derived during verification.
struct InvestmentBasis {
  std::optional<AnnuityInput> annuity;
  std::optional<double> annualized_input;
  bool input_side = false;
  double output_extra = 0.0;
  bool operator==(const InvestmentBasis&) const = default;
};

struct CostSpec {
  double invest = 0.0;       // EUR/(MW*a), output side
  double maintenance = 0.0;  // EUR/(MW*a)
  Profile fuel{0.0};         // EUR/MWh of input
  double emission_factor = 0.0;               // kg CO2 per MWh of input
  std::optional<double> emission_price;       // EUR/kg
  std::optional<InvestmentBasis> invest_basis;
  bool operator==(const CostSpec&) const = default;
};

struct Component {
  std::string id;
  Conversion conversion;
  CapacitySpec capacity;
  RampSpec ramp = NoRamp{};
  std::optional<UnitCommitment> commitment;
  CostSpec costs;

  /// Input node id, empty for sources.
  std::string input_node() const;
  std::string primary_output_node() const;
  /// Secondary output node, empty for single-output conversions.
  std::string secondary_output_node() const;
  /// Output-per-input efficiency of the primary output (1 for sources).
  double primary_efficiency() const;
  bool operator==(const Component&) const = default;
};

struct FixedRate {
  double max_charge = 0.0;
  double max_discharge = 0.0;
  bool operator==(const FixedRate&) const = default;
};
/// Charge and discharge limits are capacity / c_rate.
struct CRateLinked {
  double c_rate = 1.0;
  bool operator==(const CRateLinked&) const = default;
};
struct OptimizedRate {
  double cost_charge = 0.0;     // EUR/(MW*a)
  double cost_discharge = 0.0;  // EUR/(MW*a)
  bool operator==(const OptimizedRate&) const = default;
};
using StorageRate = std::variant<FixedRate, CRateLinked, OptimizedRate>;

struct Storage {
  std::string id;
  std::string node;
  double initial_fill = 0.0;
  double capacity_fixed = 0.0;
  bool capacity_optimizable = false;
  double capacity_cost = 0.0;  // EUR/(MWh*a)
  std::optional<double> capacity_max;
  double charge_efficiency = 1.0;
  double discharge_efficiency = 1.0;
  StorageRate rate = FixedRate{};
  bool final_fill_at_least_initial = false;
  bool operator==(const Storage&) const = default;
};

struct EnergySystem {
  std::string name;
  TimeGrid time_grid;
  std::vector<Node> nodes;
  std::vector<Component> components;
  std::vector<Storage> storages;
  std::optional<double> co2_cap;  // kg
  /// Scale annualised costs by scheduled hours / 8760.
  bool scale_annual_costs = true;

  double annual_cost_scale() const;
  const Node* find_node(const std::string& id) const;
  const Component* find_component(const std::string& id) const;
  const Storage* find_storage(const std::string& id) const;
  bool operator==(const EnergySystem&) const = default;
};

enum class Severity { Error, Warning };

enum class ViolationCode {
  EmptyTimeGrid,
  NonPositiveStep,
  PeriodOrder,
  SeriesLength,
  AvailabilityRange,
  NegativeValue,
  MaxBelowInitial,
  UnknownNode,
  SameInputOutput,
  BoundaryNodeLoad,
  NonPositiveEfficiency,
  FieldTooFewHalfPlanes,
  FieldMissingSense,
  DuplicateId,
  UnitMinLoadRange,
  BinaryRequired,
  PartialLoadSlope,
  PartialLoadWithoutInput,
  CommitmentCapacityConflict,
  StorageInitialExceedsCapacity,
  StorageEfficiencyRange,
  NonPositiveCRate,
  InvalidAnnuity,
  DegenerateNoLoad,
};

/// Machine-readable name, e.g. "AVAILABILITY_RANGE".
std::string_view to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  Severity severity = Severity::Error;
  std::string field;  // dotted path, e.g. components.pv.capacity.availability[7]
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const;
  std::vector<Violation> errors() const;
  bool has(ViolationCode code) const;
  bool operator==(const ValidationReport& other) const;
};

ValidationReport validate_system(const EnergySystem& sys);

struct SystemDimensions {
  std::size_t num_steps = 0;
  std::size_t num_nodes = 0;
  std::size_t num_components = 0;
  std::size_t num_storages = 0;
  std::size_t num_periods = 0;
  bool operator==(const SystemDimensions&) const = default;
};

SystemDimensions system_dimensions(const EnergySystem& sys);

}  // namespace enopt
