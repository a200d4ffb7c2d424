#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "enopt/formulate.hpp"
#include "enopt/model.hpp"
#include "enopt/solver.hpp"

namespace enopt {

inline constexpr int kScenarioSchemaVersion = 1;

struct OutputRequest {
  bool schedule = true;
  bool fill = true;
  bool summary = true;
  bool lp = false;
  bool plot = false;
  bool operator==(const OutputRequest&) const = default;
};

struct Scenario {
  int schema_version = kScenarioSchemaVersion;
  EnergySystem system;
  SolverConfig solver;
  CompileOptions compile;
  OutputRequest outputs;
};

enum class ScenarioErrorKind { Parse, Schema, Validation };

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(ScenarioErrorKind kind, std::string field, const std::string& message, int line = 0);

  ScenarioErrorKind kind() const { return kind_; }
  /// JSON path of the offending value, e.g. /components/2/capacity/availability.
  const std::string& field() const { return field_; }
  /// 1-based line for parse errors, 0 otherwise.
  int line() const { return line_; }

 private:
  ScenarioErrorKind kind_;
  std::string field_;
  int line_;
};

/// Parses a scenario. Relative sidecar CSV paths resolve against `base_dir`.
/// Does not validate the system.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = ".");

/// Reads, parses, and validates a scenario file.
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical JSON text (all series inline, keys in fixed order).
std::string save_scenario(const Scenario& scenario);

}  // namespace enopt
