#include "enopt/program.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace enopt {

std::string_view to_string(VarKind kind) {
  switch (kind) {
    case VarKind::Pout: return "Pout";
    case VarKind::PoutSecondary: return "PoutSecondary";
    case VarKind::Pinstalled: return "Pinstalled";
    case VarKind::PinstalledPeriod: return "PinstalledPeriod";
    case VarKind::Pbuilt: return "Pbuilt";
    case VarKind::Pcharge: return "Pcharge";
    case VarKind::Pdischarge: return "Pdischarge";
    case VarKind::Fill: return "Fill";
    case VarKind::CapacityVar: return "Capacity";
    case VarKind::PmaxchargeVar: return "Pmaxcharge";
    case VarKind::PmaxdischargeVar: return "Pmaxdischarge";
    case VarKind::LCRupVar: return "LCRup";
    case VarKind::LCRdownVar: return "LCRdown";
    case VarKind::On: return "on";
    case VarKind::Startup: return "startup";
    case VarKind::Units: return "units";
  }
  return "?";
}

std::string VarRef::name() const {
  std::string out(to_string(kind));
  out += '(';
  out += owner;
  if (index >= 0) {
    out += ',';
    out += std::to_string(index);
  }
  out += ')';
  return out;
}

std::string_view to_string(EquationTag tag) {
  static constexpr std::string_view names[] = {
      "EQ1",  "EQ2",  "EQ3",  "EQ4",  "EQ5",  "EQ6",  "EQ7",  "EQ8",  "EQ9",  "EQ10",
      "EQ11", "EQ12", "EQ13", "EQ14", "EQ15", "EQ16", "EQ17", "EQ18", "EQ19", "EQ20",
      "EQ21", "EQ22", "EQ23", "EQ24", "EQ25", "EQ26", "EQ27", "EQ28", "EQ29"};
  if (tag == EquationTag::EndFill) return "END_FILL";
  const int n = equation_number(tag);
  if (n >= 1 && n <= kEquationFamilies) return names[n - 1];
  return "?";
}

double Row::activity(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.coef * x[t.var];
  return sum;
}

double Row::violation(std::span<const double> x) const {
  const double a = activity(x);
  switch (sense) {
    case Sense::LessEqual: return std::max(0.0, a - rhs);
    case Sense::GreaterEqual: return std::max(0.0, rhs - a);
    case Sense::Equal: return std::abs(a - rhs);
  }
  return 0.0;
}

int LinearProgram::add_variable(Variable v) {
  const int idx = static_cast<int>(variables_.size());
  if (!index_.emplace(v.ref, idx).second)
    throw std::logic_error("duplicate variable " + v.ref.name());
  variables_.push_back(std::move(v));
  return idx;
}

void LinearProgram::add_row(Row row) {
  for (const auto& t : row.terms)
    if (t.var < 0 || t.var >= static_cast<int>(variables_.size()))
      throw std::logic_error("row references undefined variable");
  rows_.push_back(std::move(row));
}

std::size_t LinearProgram::num_nonzeros() const {
  std::size_t nnz = 0;
  for (const auto& r : rows_) nnz += r.terms.size();
  return nnz;
}

bool LinearProgram::has_integers() const {
  return std::any_of(variables_.begin(), variables_.end(), [](const Variable& v) { return v.integer; });
}

std::optional<int> LinearProgram::find(const VarRef& ref) const {
  auto it = index_.find(ref);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int LinearProgram::index_of(const VarRef& ref) const {
  auto it = index_.find(ref);
  if (it == index_.end()) throw std::out_of_range("no variable " + ref.name());
  return it->second;
}

double LinearProgram::value(std::span<const double> x, const VarRef& ref, double fallback) const {
  auto idx = find(ref);
  return idx ? x[*idx] : fallback;
}

double LinearProgram::objective(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) sum += variables_[j].cost * x[j];
  return sum;
}

double LinearProgram::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (const auto& r : rows_) worst = std::max(worst, r.violation(x));
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    worst = std::max(worst, variables_[j].lower - x[j]);
    worst = std::max(worst, x[j] - variables_[j].upper);
  }
  return worst;
}

std::vector<const Row*> LinearProgram::rows_with_tag(EquationTag tag) const {
  std::vector<const Row*> out;
  for (const auto& r : rows_)
    if (r.tag == tag) out.push_back(&r);
  return out;
}

namespace {

std::string lp_name(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char ch : raw) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '(' ||
                    ch == ')' || ch == ',' || ch == '.';
    out += ok ? ch : '_';
  }
  if (!out.empty() && (std::isdigit(static_cast<unsigned char>(out[0])) || out[0] == '.')) out.insert(0, "v");
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_terms(std::ostringstream& os, const std::vector<Term>& terms,
                 const std::vector<std::string>& names) {
  if (terms.empty()) {
    os << " 0 " << names.front();  // LP format needs a variable on every row
    return;
  }
  for (const auto& t : terms) {
    os << (t.coef < 0 ? " - " : " + ") << num(std::abs(t.coef)) << ' ' << names[t.var];
  }
}

}  // namespace

std::string to_lp_format(const LinearProgram& prog) {
  std::vector<std::string> names;
  names.reserve(prog.num_variables());
  for (const auto& v : prog.variables()) names.push_back(lp_name(v.ref.name()));
  if (names.empty()) names.push_back("dummy");

  std::ostringstream os;
  os << "\\ enopt linear program: " << prog.num_variables() << " variables, " << prog.num_rows()
     << " rows\nMinimize\n obj:";
  bool any = false;
  for (std::size_t j = 0; j < prog.num_variables(); ++j) {
    const double c = prog.variables()[j].cost;
    if (c == 0.0) continue;
    os << (c < 0 ? " - " : " + ") << num(std::abs(c)) << ' ' << names[j];
    any = true;
  }
  if (!any) os << " 0 " << names.front();
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < prog.num_rows(); ++i) {
    const auto& r = prog.rows()[i];
    os << ' ' << to_string(r.tag) << '_' << lp_name(r.owner);
    if (r.step >= 0) os << "_t" << r.step;
    os << "_r" << i << ':';
    write_terms(os, r.terms, names);
    os << ' ' << to_string(r.sense) << ' ' << num(r.rhs) << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < prog.num_variables(); ++j) {
    const auto& v = prog.variables()[j];
    if (v.lower == -kInf && v.upper == kInf) {
      os << ' ' << names[j] << " free\n";
      continue;
    }
    os << ' ' << (v.lower == -kInf ? std::string("-inf") : num(v.lower)) << " <= " << names[j] << " <= "
       << (v.upper == kInf ? std::string("+inf") : num(v.upper)) << '\n';
  }
  bool header = false;
  for (std::size_t j = 0; j < prog.num_variables(); ++j) {
    if (!prog.variables()[j].integer) continue;
    if (!header) os << "General\n";
    header = true;
    os << ' ' << names[j] << '\n';
  }
  os << "End\n";
  return os.str();
}

}  // namespace enopt
