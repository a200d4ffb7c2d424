#include "enopt/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace enopt {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

ScenarioError::ScenarioError(ScenarioErrorKind kind, std::string field, const std::string& message, int line)
    : std::runtime_error(message), kind_(kind), field_(std::move(field)), line_(line) {}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
  throw ScenarioError(ScenarioErrorKind::Schema, path, path + ": " + message);
}

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string join(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) schema_error(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
      schema_error(join(path, key), "unknown key");
  }
}

const json* child(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

double number(const json& j, const std::string& path, const char* key, double fallback) {
  const json* c = child(j, key);
  return c ? as_number(*c, join(path, key)) : fallback;
}

double required_number(const json& j, const std::string& path, const char* key) {
  const json* c = child(j, key);
  if (!c) schema_error(join(path, key), "missing required number");
  return as_number(*c, join(path, key));
}

std::optional<double> optional_number(const json& j, const std::string& path, const char* key) {
  const json* c = child(j, key);
  if (!c) return std::nullopt;
  return as_number(*c, join(path, key));
}

int integer(const json& j, const std::string& path, const char* key, int fallback) {
  const json* c = child(j, key);
  if (!c) return fallback;
  if (!c->is_number_integer()) schema_error(join(path, key), "expected an integer");
  return c->get<int>();
}

long long_integer(const json& j, const std::string& path, const char* key, long fallback) {
  const json* c = child(j, key);
  if (!c) return fallback;
  if (!c->is_number_integer()) schema_error(join(path, key), "expected an integer");
  return c->get<long>();
}

bool boolean(const json& j, const std::string& path, const char* key, bool fallback) {
  const json* c = child(j, key);
  if (!c) return fallback;
  if (!c->is_boolean()) schema_error(join(path, key), "expected true or false");
  return c->get<bool>();
}

std::string text(const json& j, const std::string& path, const char* key, const std::string& fallback = "") {
  const json* c = child(j, key);
  if (!c) return fallback;
  if (!c->is_string()) schema_error(join(path, key), "expected a string");
  return c->get<std::string>();
}

std::string required_text(const json& j, const std::string& path, const char* key) {
  if (!child(j, key)) schema_error(join(path, key), "missing required string");
  return text(j, path, key);
}

std::vector<double> read_csv_column(const std::filesystem::path& file, const std::string& column,
                                    const std::string& path) {
  std::ifstream in(file);
  if (!in) schema_error(path, "cannot open series file " + file.string());
  std::string line;
  if (!std::getline(in, line)) schema_error(path, "empty series file " + file.string());
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      cells.push_back(cell);
    }
    return cells;
  };
  const auto header = split(line);
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) schema_error(path, "column '" + column + "' not found in " + file.string());
  const std::size_t col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> values;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (col >= cells.size())
      schema_error(path, file.string() + " line " + std::to_string(row) + ": missing column '" + column + "'");
    double v = 0.0;
    const std::string& cell = cells[col];
    auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || end != cell.data() + cell.size())
      schema_error(path, file.string() + " line " + std::to_string(row) + ": not a number: '" + cell + "'");
    values.push_back(v);
  }
  return values;
}

class Parser {
 public:
  explicit Parser(std::filesystem::path base_dir) : base_dir_(std::move(base_dir)) {}

  Scenario parse(const json& root) {
    allow_keys(root, "", {"schema_version", "name", "time_grid", "scale_annual_costs", "co2_cap", "nodes",
                          "components", "storages", "options", "solver", "outputs"});
    Scenario sc;
    const json* version = child(root, "schema_version");
    if (!version || !version->is_number_integer()) schema_error("/schema_version", "missing integer schema_version");
    sc.schema_version = version->get<int>();
    if (sc.schema_version != kScenarioSchemaVersion)
      schema_error("/schema_version", "unsupported schema version " + std::to_string(sc.schema_version));

    auto& sys = sc.system;
    sys.name = text(root, "", "name");
    sys.time_grid = time_grid(root);
    sys.scale_annual_costs = boolean(root, "", "scale_annual_costs", true);
    sys.co2_cap = optional_number(root, "", "co2_cap");
    for_each(root, "nodes", [&](const json& j, const std::string& p) { sys.nodes.push_back(node(j, p)); });
    for_each(root, "components", [&](const json& j, const std::string& p) { sys.components.push_back(component(j, p)); });
    for_each(root, "storages", [&](const json& j, const std::string& p) { sys.storages.push_back(storage(j, p)); });
    if (const json* o = child(root, "options")) options(*o, "/options", sc.compile);
    if (const json* s = child(root, "solver")) solver(*s, "/solver", sc.solver);
    if (const json* o = child(root, "outputs")) outputs(*o, "/outputs", sc.outputs);
    return sc;
  }

 private:
  template <class F>
  void for_each(const json& j, const char* key, F&& f) {
    const json* c = child(j, key);
    if (!c) return;
    const std::string path = join("", key);
    if (!c->is_array()) schema_error(path, "expected an array");
    for (std::size_t i = 0; i < c->size(); ++i) f((*c)[i], join(path, i));
  }

  Profile series(const json& j, const std::string& path, const char* key, Profile fallback) {
    const json* c = child(j, key);
    if (!c) return fallback;
    const std::string p = join(path, key);
    if (c->is_number()) return Profile(c->get<double>());
    if (c->is_array()) {
      std::vector<double> values;
      for (std::size_t i = 0; i < c->size(); ++i) values.push_back(as_number((*c)[i], join(p, i)));
      return Profile(std::move(values));
    }
    if (c->is_object()) {
      allow_keys(*c, p, {"csv", "column"});
      const std::string file = required_text(*c, p, "csv");
      const std::string column = required_text(*c, p, "column");
      return Profile(read_csv_column(base_dir_ / file, column, p));
    }
    schema_error(p, "expected a number, an array, or a {csv, column} reference");
  }

  TimeGrid time_grid(const json& root) {
    const json* g = child(root, "time_grid");
    if (!g) schema_error("/time_grid", "missing time_grid");
    const std::string path = "/time_grid";
    allow_keys(*g, path, {"steps", "step_hours", "periods", "period_lengths"});
    TimeGrid grid;
    const json* hours = child(*g, "step_hours");
    if (hours && !hours->is_number()) {
      grid.step_hours = series(*g, path, "step_hours", {}).values;
      if (child(*g, "steps") && integer(*g, path, "steps", 0) != static_cast<int>(grid.step_hours.size()))
        schema_error(join(path, "steps"), "does not match the length of step_hours");
    } else {
      const int steps = integer(*g, path, "steps", -1);
      if (steps < 0) schema_error(join(path, "steps"), "missing non-negative step count");
      grid.step_hours.assign(steps, number(*g, path, "step_hours", 1.0));
    }
    const std::size_t T = grid.step_hours.size();
    if (const json* periods = child(*g, "periods")) {
      if (!periods->is_array()) schema_error(join(path, "periods"), "expected an array of period indices");
      for (std::size_t i = 0; i < periods->size(); ++i) {
        if (!(*periods)[i].is_number_integer()) schema_error(join(join(path, "periods"), i), "expected an integer");
        grid.period_of_step.push_back((*periods)[i].get<int>());
      }
    } else if (const json* lengths = child(*g, "period_lengths")) {
      if (!lengths->is_array()) schema_error(join(path, "period_lengths"), "expected an array of step counts");
      for (std::size_t p = 0; p < lengths->size(); ++p) {
        const json& n = (*lengths)[p];
        if (!n.is_number_integer() || n.get<int>() < 0)
          schema_error(join(join(path, "period_lengths"), p), "expected a non-negative integer");
        grid.period_of_step.insert(grid.period_of_step.end(), n.get<int>(), static_cast<int>(p));
      }
    } else {
      grid.period_of_step.assign(T, 0);
    }
    return grid;
  }

  Node node(const json& j, const std::string& path) {
    allow_keys(j, path, {"id", "carrier", "load", "boundary"});
    Node n;
    n.id = required_text(j, path, "id");
    n.carrier = text(j, path, "carrier");
    n.load = series(j, path, "load", Profile(0.0));
    n.boundary = boolean(j, path, "boundary", false);
    return n;
  }

  Conversion conversion(const json& j, const std::string& path) {
    const std::string type = required_text(j, path, "type");
    if (type == "single")
      return SingleConversion{required_text(j, path, "input"), required_text(j, path, "output"),
                              number(j, path, "efficiency", 1.0)};
    if (type == "source") return SourceConversion{required_text(j, path, "output")};
    if (type == "coupled")
      return CoupledConversion{required_text(j, path, "input"), required_text(j, path, "primary_output"),
                               required_text(j, path, "secondary_output"),
                               required_number(j, path, "primary_efficiency"),
                               required_number(j, path, "secondary_efficiency")};
    if (type == "field") {
      FieldConversion f{required_text(j, path, "input"), required_text(j, path, "primary_output"),
                        required_text(j, path, "secondary_output"), required_number(j, path, "primary_efficiency"),
                        {}};
      const json* planes = child(j, "half_planes");
      const std::string p = join(path, "half_planes");
      if (!planes || !planes->is_array()) schema_error(p, "expected an array of half-planes");
      for (std::size_t i = 0; i < planes->size(); ++i) {
        const json& h = (*planes)[i];
        const std::string hp = join(p, i);
        allow_keys(h, hp, {"slope", "intercept", "sense"});
        HalfPlane plane{required_number(h, hp, "slope"), number(h, hp, "intercept", 0.0), sense(h, hp)};
        f.half_planes.push_back(plane);
      }
      return f;
    }
    schema_error(join(path, "type"), "unknown conversion type '" + type + "'");
  }

  Sense sense(const json& j, const std::string& path) {
    const std::string s = required_text(j, path, "sense");
    if (s == "<=") return Sense::LessEqual;
    if (s == ">=") return Sense::GreaterEqual;
    if (s == "=") return Sense::Equal;
    schema_error(join(path, "sense"), "expected one of <=, >=, =");
  }

  Component component(const json& j, const std::string& path) {
    allow_keys(j, path, {"id", "type", "input", "output", "primary_output", "secondary_output", "efficiency",
                         "primary_efficiency", "secondary_efficiency", "half_planes", "capacity", "ramp",
                         "commitment", "costs"});
    Component c;
    c.id = required_text(j, path, "id");
    c.conversion = conversion(j, path);
    if (const json* cap = child(j, "capacity")) c.capacity = capacity(*cap, join(path, "capacity"));
    if (const json* r = child(j, "ramp")) c.ramp = ramp(*r, join(path, "ramp"));
    if (const json* uc = child(j, "commitment")) c.commitment = commitment(*uc, join(path, "commitment"));
    if (const json* costs = child(j, "costs")) c.costs = cost_spec(*costs, join(path, "costs"), c);
    return c;
  }

  CapacitySpec capacity(const json& j, const std::string& path) {
    allow_keys(j, path, {"initial", "optimizable", "max", "availability", "per_period", "period_costing",
                         "build_cost"});
    CapacitySpec cap;
    cap.initial = number(j, path, "initial", 0.0);
    cap.optimizable = boolean(j, path, "optimizable", false);
    cap.max_installed = optional_number(j, path, "max");
    cap.availability = series(j, path, "availability", Profile(1.0));
    cap.per_period = boolean(j, path, "per_period", false);
    const std::string costing = text(j, path, "period_costing", "installed");
    if (costing == "installed") cap.period_costing = PeriodCosting::Installed;
    else if (costing == "built") cap.period_costing = PeriodCosting::Built;
    else schema_error(join(path, "period_costing"), "expected 'installed' or 'built'");
    cap.build_cost = number(j, path, "build_cost", 0.0);
    return cap;
  }

  RampSpec ramp(const json& j, const std::string& path) {
    allow_keys(j, path, {"type", "up", "down", "cost_up", "cost_down"});
    const std::string type = required_text(j, path, "type");
    if (type == "none") return NoRamp{};
    if (type == "fixed") return FixedRamp{number(j, path, "up", 1.0), number(j, path, "down", 1.0)};
    if (type == "optimized") return OptimizedRamp{number(j, path, "cost_up", 0.0), number(j, path, "cost_down", 0.0)};
    schema_error(join(path, "type"), "expected 'none', 'fixed', or 'optimized'");
  }

  UnitCommitment commitment(const json& j, const std::string& path) {
    allow_keys(j, path, {"unit_capacity", "unit_min_load", "max_units", "startup_cost", "min_up_steps",
                         "min_down_steps", "partial_load", "initial_on"});
    UnitCommitment uc;
    uc.unit_capacity = required_number(j, path, "unit_capacity");
    uc.unit_min_load = number(j, path, "unit_min_load", 0.0);
    if (const json* m = j.find("max_units") != j.end() ? &j.at("max_units") : nullptr) {
      if (m->is_null() || (m->is_string() && m->get<std::string>() == "optimize")) {
        uc.max_units = std::nullopt;
      } else if (m->is_number_integer()) {
        uc.max_units = m->get<int>();
      } else {
        schema_error(join(path, "max_units"), "expected an integer or \"optimize\"");
      }
    }
    uc.startup_cost = number(j, path, "startup_cost", 0.0);
    uc.min_up_steps = integer(j, path, "min_up_steps", 0);
    uc.min_down_steps = integer(j, path, "min_down_steps", 0);
    if (const json* pl = child(j, "partial_load")) {
      const std::string p = join(path, "partial_load");
      allow_keys(*pl, p, {"slope", "offset"});
      uc.partial_load = PartialLoad{required_number(*pl, p, "slope"), number(*pl, p, "offset", 0.0)};
    }
    uc.initial_on = integer(j, path, "initial_on", 0);
    return uc;
  }

  CostSpec cost_spec(const json& j, const std::string& path, const Component& c) {
    allow_keys(j, path, {"invest", "maintenance", "fuel", "emission_factor", "emission_price"});
    CostSpec costs;
    costs.maintenance = number(j, path, "maintenance", 0.0);
    costs.fuel = series(j, path, "fuel", Profile(0.0));
    costs.emission_factor = number(j, path, "emission_factor", 0.0);
    costs.emission_price = optional_number(j, path, "emission_price");
    if (const json* inv = child(j, "invest")) {
      const std::string p = join(path, "invest");
      if (inv->is_number()) {
        costs.invest = inv->get<double>();
      } else {
        allow_keys(*inv, p, {"annualized", "total", "interest_rate", "lifetime", "reference", "output_extra"});
        InvestmentBasis basis;
        if (child(*inv, "total")) {
          basis.annuity = AnnuityInput{required_number(*inv, p, "total"), number(*inv, p, "interest_rate", 0.0),
                                       integer(*inv, p, "lifetime", 1)};
          if (basis.annuity->lifetime < 1 || basis.annuity->interest_rate < 0.0)
            schema_error(p, "annuity needs lifetime >= 1 and a non-negative interest rate");
        } else {
          basis.annualized_input = required_number(*inv, p, "annualized");
        }
        const std::string reference = text(*inv, p, "reference", "output");
        if (reference != "input" && reference != "output")
          schema_error(join(p, "reference"), "expected 'input' or 'output'");
        basis.input_side = reference == "input";
        basis.output_extra = number(*inv, p, "output_extra", 0.0);
        const double annual = basis.annuity ? annualize(*basis.annuity) : *basis.annualized_input;
        if (basis.input_side) {
          const double eta = c.primary_efficiency();
          if (!(eta > 0.0)) schema_error(p, "input-referenced cost needs a positive efficiency");
          costs.invest = output_side_cost(annual, eta, basis.output_extra);
        } else {
          costs.invest = annual + basis.output_extra;
        }
        costs.invest_basis = basis;
      }
    }
    return costs;
  }

  Storage storage(const json& j, const std::string& path) {
    allow_keys(j, path, {"id", "node", "initial_fill", "capacity", "optimizable", "capacity_cost", "capacity_max",
                         "charge_efficiency", "discharge_efficiency", "rate", "final_fill_at_least_initial"});
    Storage s;
    s.id = required_text(j, path, "id");
    s.node = required_text(j, path, "node");
    s.initial_fill = number(j, path, "initial_fill", 0.0);
    s.capacity_fixed = number(j, path, "capacity", 0.0);
    s.capacity_optimizable = boolean(j, path, "optimizable", false);
    s.capacity_cost = number(j, path, "capacity_cost", 0.0);
    s.capacity_max = optional_number(j, path, "capacity_max");
    s.charge_efficiency = number(j, path, "charge_efficiency", 1.0);
    s.discharge_efficiency = number(j, path, "discharge_efficiency", 1.0);
    s.final_fill_at_least_initial = boolean(j, path, "final_fill_at_least_initial", false);
    if (const json* r = child(j, "rate")) {
      const std::string p = join(path, "rate");
      allow_keys(*r, p, {"type", "max_charge", "max_discharge", "c_rate", "cost_charge", "cost_discharge"});
      const std::string type = required_text(*r, p, "type");
      if (type == "fixed")
        s.rate = FixedRate{required_number(*r, p, "max_charge"), required_number(*r, p, "max_discharge")};
      else if (type == "c_rate")
        s.rate = CRateLinked{required_number(*r, p, "c_rate")};
      else if (type == "optimized")
        s.rate = OptimizedRate{number(*r, p, "cost_charge", 0.0), number(*r, p, "cost_discharge", 0.0)};
      else
        schema_error(join(p, "type"), "expected 'fixed', 'c_rate', or 'optimized'");
    }
    return s;
  }

  void options(const json& j, const std::string& path, CompileOptions& opts) {
    allow_keys(j, path, {"storage_formulation"});
    const std::string f = text(j, path, "storage_formulation", "recurrence");
    if (f == "recurrence") opts.storage = StorageFormulation::Recurrence;
    else if (f == "cumulative") opts.storage = StorageFormulation::Cumulative;
    else schema_error(join(path, "storage_formulation"), "expected 'recurrence' or 'cumulative'");
  }

  void solver(const json& j, const std::string& path, SolverConfig& cfg) {
    allow_keys(j, path, {"feasibility_tol", "optimality_tol", "integrality_tol", "mip_gap", "iteration_limit",
                         "node_limit", "stall_window", "seed"});
    cfg.feasibility_tol = number(j, path, "feasibility_tol", cfg.feasibility_tol);
    cfg.optimality_tol = number(j, path, "optimality_tol", cfg.optimality_tol);
    cfg.integrality_tol = number(j, path, "integrality_tol", cfg.integrality_tol);
    cfg.mip_gap = number(j, path, "mip_gap", cfg.mip_gap);
    cfg.iteration_limit = long_integer(j, path, "iteration_limit", cfg.iteration_limit);
    cfg.node_limit = long_integer(j, path, "node_limit", cfg.node_limit);
    cfg.stall_window = integer(j, path, "stall_window", cfg.stall_window);
    cfg.deterministic_seed = static_cast<std::uint64_t>(long_integer(j, path, "seed", 0));
    if (!cfg.valid()) schema_error(path, "solver settings out of range");
  }

  void outputs(const json& j, const std::string& path, OutputRequest& out) {
    allow_keys(j, path, {"schedule", "fill", "summary", "lp", "plot"});
    out.schedule = boolean(j, path, "schedule", out.schedule);
    out.fill = boolean(j, path, "fill", out.fill);
    out.summary = boolean(j, path, "summary", out.summary);
    out.lp = boolean(j, path, "lp", out.lp);
    out.plot = boolean(j, path, "plot", out.plot);
  }

  std::filesystem::path base_dir_;
};

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

ordered_json series_json(const Profile& p) {
  if (p.is_constant()) return p.values.front();
  return p.values;
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::GreaterEqual: return ">=";
    case Sense::Equal: return "=";
  }
  return "<=";
}

ordered_json component_json(const Component& c) {
  ordered_json j;
  j["id"] = c.id;
  std::visit(
      [&](const auto& conv) {
        using C = std::decay_t<decltype(conv)>;
        if constexpr (std::is_same_v<C, SingleConversion>) {
          j["type"] = "single";
          j["input"] = conv.input;
          j["output"] = conv.output;
          j["efficiency"] = conv.efficiency;
        } else if constexpr (std::is_same_v<C, SourceConversion>) {
          j["type"] = "source";
          j["output"] = conv.output;
        } else if constexpr (std::is_same_v<C, CoupledConversion>) {
          j["type"] = "coupled";
          j["input"] = conv.input;
          j["primary_output"] = conv.primary_output;
          j["secondary_output"] = conv.secondary_output;
          j["primary_efficiency"] = conv.primary_efficiency;
          j["secondary_efficiency"] = conv.secondary_efficiency;
        } else {
          j["type"] = "field";
          j["input"] = conv.input;
          j["primary_output"] = conv.primary_output;
          j["secondary_output"] = conv.secondary_output;
          j["primary_efficiency"] = conv.primary_efficiency;
          ordered_json planes = ordered_json::array();
          for (const auto& h : conv.half_planes)
            planes.push_back({{"slope", h.slope}, {"intercept", h.intercept}, {"sense", sense_text(h.sense)}});
          j["half_planes"] = planes;
        }
      },
      c.conversion);

  const auto& cap = c.capacity;
  ordered_json capj;
  capj["initial"] = cap.initial;
  capj["optimizable"] = cap.optimizable;
  if (cap.max_installed) capj["max"] = *cap.max_installed;
  capj["availability"] = series_json(cap.availability);
  capj["per_period"] = cap.per_period;
  capj["period_costing"] = cap.period_costing == PeriodCosting::Installed ? "installed" : "built";
  capj["build_cost"] = cap.build_cost;
  j["capacity"] = capj;

  if (const auto* f = std::get_if<FixedRamp>(&c.ramp))
    j["ramp"] = {{"type", "fixed"}, {"up", f->up}, {"down", f->down}};
  else if (const auto* o = std::get_if<OptimizedRamp>(&c.ramp))
    j["ramp"] = {{"type", "optimized"}, {"cost_up", o->cost_up}, {"cost_down", o->cost_down}};

  if (c.commitment) {
    const auto& uc = *c.commitment;
    ordered_json u;
    u["unit_capacity"] = uc.unit_capacity;
    u["unit_min_load"] = uc.unit_min_load;
    if (uc.max_units) u["max_units"] = *uc.max_units;
    else u["max_units"] = "optimize";
    u["startup_cost"] = uc.startup_cost;
    u["min_up_steps"] = uc.min_up_steps;
    u["min_down_steps"] = uc.min_down_steps;
    if (uc.partial_load) u["partial_load"] = {{"slope", uc.partial_load->slope}, {"offset", uc.partial_load->offset}};
    u["initial_on"] = uc.initial_on;
    j["commitment"] = u;
  }

  const auto& costs = c.costs;
  ordered_json cj;
  if (costs.invest_basis) {
    const auto& b = *costs.invest_basis;
    ordered_json inv;
    if (b.annuity) {
      inv["total"] = b.annuity->total_investment;
      inv["interest_rate"] = b.annuity->interest_rate;
      inv["lifetime"] = b.annuity->lifetime;
    } else {
      inv["annualized"] = b.annualized_input.value_or(0.0);
    }
    inv["reference"] = b.input_side ? "input" : "output";
    inv["output_extra"] = b.output_extra;
    cj["invest"] = inv;
  } else {
    cj["invest"] = costs.invest;
  }
  cj["maintenance"] = costs.maintenance;
  cj["fuel"] = series_json(costs.fuel);
  cj["emission_factor"] = costs.emission_factor;
  if (costs.emission_price) cj["emission_price"] = *costs.emission_price;
  j["costs"] = cj;
  return j;
}

ordered_json storage_json(const Storage& s) {
  ordered_json j;
  j["id"] = s.id;
  j["node"] = s.node;
  j["initial_fill"] = s.initial_fill;
  j["capacity"] = s.capacity_fixed;
  j["optimizable"] = s.capacity_optimizable;
  j["capacity_cost"] = s.capacity_cost;
  if (s.capacity_max) j["capacity_max"] = *s.capacity_max;
  j["charge_efficiency"] = s.charge_efficiency;
  j["discharge_efficiency"] = s.discharge_efficiency;
  if (const auto* r = std::get_if<FixedRate>(&s.rate))
    j["rate"] = {{"type", "fixed"}, {"max_charge", r->max_charge}, {"max_discharge", r->max_discharge}};
  else if (const auto* r = std::get_if<CRateLinked>(&s.rate))
    j["rate"] = {{"type", "c_rate"}, {"c_rate", r->c_rate}};
  else if (const auto* r = std::get_if<OptimizedRate>(&s.rate))
    j["rate"] = {{"type", "optimized"}, {"cost_charge", r->cost_charge}, {"cost_discharge", r->cost_discharge}};
  j["final_fill_at_least_initial"] = s.final_fill_at_least_initial;
  return j;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ScenarioError(ScenarioErrorKind::Parse, "", "line " + std::to_string(line) + ": " + e.what(), line);
  }
  try {
    return Parser(base_dir).parse(root);
  } catch (const json::exception& e) {
    throw ScenarioError(ScenarioErrorKind::Schema, "", e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(ScenarioErrorKind::Parse, "", "cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  Scenario sc = parse_scenario(buffer.str(), path.parent_path());
  const ValidationReport report = validate_system(sc.system);
  if (!report.valid()) {
    std::string message;
    for (const auto& v : report.errors())
      message += std::string(to_string(v.code)) + " at " + v.field + ": " + v.message + "\n";
    throw ScenarioError(ScenarioErrorKind::Validation, report.errors().front().field, message);
  }
  return sc;
}

std::string save_scenario(const Scenario& sc) {
  const auto& sys = sc.system;
  ordered_json root;
  root["schema_version"] = sc.schema_version;
  root["name"] = sys.name;
  ordered_json grid;
  grid["step_hours"] = sys.time_grid.step_hours;
  grid["periods"] = sys.time_grid.period_of_step;
  root["time_grid"] = grid;
  root["scale_annual_costs"] = sys.scale_annual_costs;
  if (sys.co2_cap) root["co2_cap"] = *sys.co2_cap;
  ordered_json nodes = ordered_json::array();
  for (const auto& n : sys.nodes) {
    ordered_json j;
    j["id"] = n.id;
    j["carrier"] = n.carrier;
    j["load"] = series_json(n.load);
    j["boundary"] = n.boundary;
    nodes.push_back(j);
  }
  root["nodes"] = nodes;
  ordered_json comps = ordered_json::array();
  for (const auto& c : sys.components) comps.push_back(component_json(c));
  root["components"] = comps;
  ordered_json stores = ordered_json::array();
  for (const auto& s : sys.storages) stores.push_back(storage_json(s));
  root["storages"] = stores;
  root["options"] = {{"storage_formulation",
                      sc.compile.storage == StorageFormulation::Recurrence ? "recurrence" : "cumulative"}};
  const auto& cfg = sc.solver;
  ordered_json solver;
  solver["feasibility_tol"] = cfg.feasibility_tol;
  solver["optimality_tol"] = cfg.optimality_tol;
  solver["integrality_tol"] = cfg.integrality_tol;
  solver["mip_gap"] = cfg.mip_gap;
  solver["iteration_limit"] = cfg.iteration_limit;
  solver["node_limit"] = cfg.node_limit;
  solver["stall_window"] = cfg.stall_window;
  solver["seed"] = cfg.deterministic_seed;
  root["solver"] = solver;
  const auto& o = sc.outputs;
  root["outputs"] = {{"schedule", o.schedule}, {"fill", o.fill}, {"summary", o.summary}, {"lp", o.lp}, {"plot", o.plot}};
  return root.dump(2) + "\n";
}

}  // namespace enopt
