#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "enopt/sense.hpp"

namespace enopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind {
  Pout,
  PoutSecondary,  // dedicated secondary output of a characteristic field
  Pinstalled,
  PinstalledPeriod,
  Pbuilt,
  Pcharge,
  Pdischarge,
  Fill,  // auxiliary storage fill level of the recurrence formulation
  CapacityVar,
  PmaxchargeVar,
  PmaxdischargeVar,
  LCRupVar,
  LCRdownVar,
  On,
  Startup,
  Units,
};

std::string_view to_string(VarKind kind);

/// Identity of a decision variable: kind, owning component/storage, and the
/// step or period index (-1 when the variable is not indexed).
struct VarRef {
  VarKind kind = VarKind::Pout;
  std::string owner;
  int index = -1;

  std::string name() const;
  auto operator<=>(const VarRef&) const = default;
};

/// Source equation family of a constraint row.
enum class EquationTag {
  Eq1 = 1, Eq2, Eq3, Eq4, Eq5, Eq6, Eq7, Eq8, Eq9, Eq10,
  Eq11, Eq12, Eq13, Eq14, Eq15, Eq16, Eq17, Eq18, Eq19, Eq20,
  Eq21, Eq22, Eq23, Eq24, Eq25, Eq26, Eq27, Eq28, Eq29,
  EndFill,  // optional end-of-horizon storage condition
};

inline constexpr int kEquationFamilies = 29;

std::string_view to_string(EquationTag tag);
inline EquationTag equation_tag(int number) { return static_cast<EquationTag>(number); }
inline int equation_number(EquationTag tag) { return static_cast<int>(tag); }

struct Term {
  int var = 0;
  double coef = 0.0;
  bool operator==(const Term&) const = default;
};

struct Row {
  EquationTag tag = EquationTag::Eq1;
  std::string owner;  // component, storage, node, or "system"
  int step = -1;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;

  double activity(std::span<const double> x) const;
  /// Amount by which `x` violates the row (0 when satisfied).
  double violation(std::span<const double> x) const;
  bool operator==(const Row&) const = default;
};

struct Variable {
  VarRef ref;
  double lower = 0.0;
  double upper = kInf;
  bool integer = false;
  double cost = 0.0;
  bool operator==(const Variable&) const = default;
};

enum class IssueCode { CostlessSlack };

struct Issue {
  IssueCode code;
  std::string owner;
  std::string message;
  bool operator==(const Issue&) const = default;
};

/// Standard-form mixed-integer linear program (minimisation).
class LinearProgram {
 public:
  int add_variable(Variable v);
  void add_row(Row row);

  const std::vector<Variable>& variables() const { return variables_; }
  std::vector<Variable>& variables() { return variables_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::vector<Row>& rows() { return rows_; }
  const std::vector<Issue>& warnings() const { return warnings_; }
  void warn(Issue issue) { warnings_.push_back(std::move(issue)); }

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_nonzeros() const;
  bool has_integers() const;

  std::optional<int> find(const VarRef& ref) const;
  int index_of(const VarRef& ref) const;  // throws std::out_of_range
  double value(std::span<const double> x, const VarRef& ref, double fallback = 0.0) const;

  double objective(std::span<const double> x) const;
  /// Largest row or bound violation of `x`.
  double max_violation(std::span<const double> x) const;
  std::vector<const Row*> rows_with_tag(EquationTag tag) const;

  bool operator==(const LinearProgram& other) const {
    return variables_ == other.variables_ && rows_ == other.rows_;
  }

 private:
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
  std::map<VarRef, int> index_;
  std::vector<Issue> warnings_;
};

/// CPLEX LP-format text of the program, for cross-checking with external
/// solvers.
std::string to_lp_format(const LinearProgram& prog);

}  // namespace enopt
