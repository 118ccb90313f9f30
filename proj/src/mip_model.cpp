#include "fruc/mip.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace fruc {

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  constant += other.constant;
  return *this;
}

LinearExpr& LinearExpr::operator*=(double s) {
  for (auto& t : terms) t.coef *= s;
  constant *= s;
  return *this;
}

int MipModel::add_variable(std::string name, VarKind kind, double lower,
                           double upper) {
  if (name.empty()) throw ModelError("variable name must not be empty");
  if (var_index_.count(name)) throw ModelError("duplicate variable " + name);
  if (std::isnan(lower) || std::isnan(upper) || lower > upper)
    throw ModelError("invalid bounds for variable " + name);
  if (kind == VarKind::Integer && (!std::isfinite(lower) || !std::isfinite(upper)))
    throw ModelError("integer variable " + name + " needs finite bounds");
  const int id = num_variables();
  var_index_.emplace(name, id);
  vars_.push_back({std::move(name), kind, lower, upper});
  objective_.conservativeResize(id + 1);
  objective_(id) = 0.0;
  return id;
}

int MipModel::add_constraint(std::string name, const LinearExpr& expr,
                             Sense sense, double rhs) {
  if (name.empty()) throw ModelError("constraint name must not be empty");
  if (con_index_.count(name)) throw ModelError("duplicate constraint " + name);
  if (!std::isfinite(rhs - expr.constant))
    throw ModelError("non-finite right-hand side in " + name);
  std::vector<Term> terms = expr.terms;
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= num_variables())
      throw ModelError("constraint " + name + " references unknown variable");
    if (!std::isfinite(t.coef))
      throw ModelError("non-finite coefficient in " + name);
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().var == t.var)
      merged.back().coef += t.coef;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  const int id = num_constraints();
  con_index_.emplace(name, id);
  cons_.push_back({std::move(name), std::move(merged), sense, rhs - expr.constant});
  return id;
}

void MipModel::add_objective(const LinearExpr& expr) {
  for (const auto& t : expr.terms) {
    if (t.var < 0 || t.var >= num_variables())
      throw ModelError("objective references unknown variable");
    objective_(t.var) += t.coef;
  }
  objective_offset_ += expr.constant;
}

void MipModel::set_objective_coef(int var, double coef) {
  objective_(var) = coef;
}

void MipModel::set_bounds(int var, double lower, double upper) {
  auto& v = vars_.at(var);
  if (lower > upper) throw ModelError("invalid bounds for variable " + v.name);
  if (v.kind == VarKind::Integer && (!std::isfinite(lower) || !std::isfinite(upper)))
    throw ModelError("integer variable " + v.name + " needs finite bounds");
  v.lower = lower;
  v.upper = upper;
}

void MipModel::set_kind(int var, VarKind kind) {
  auto& v = vars_.at(var);
  if (kind == VarKind::Integer && (!std::isfinite(v.lower) || !std::isfinite(v.upper)))
    throw ModelError("integer variable " + v.name + " needs finite bounds");
  v.kind = kind;
}

int MipModel::num_integer() const {
  return static_cast<int>(std::count_if(vars_.begin(), vars_.end(), [](const Variable& v) {
    return v.kind == VarKind::Integer;
  }));
}

std::optional<int> MipModel::find_variable(std::string_view name) const {
  const auto it = var_index_.find(std::string(name));
  if (it == var_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> MipModel::find_constraint(std::string_view name) const {
  const auto it = con_index_.find(std::string(name));
  if (it == con_index_.end()) return std::nullopt;
  return it->second;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> MipModel::constraint_matrix() const {
  std::vector<Eigen::Triplet<double>> triplets;
  for (int r = 0; r < num_constraints(); ++r)
    for (const auto& t : cons_[r].terms) triplets.emplace_back(r, t.var, t.coef);
  Eigen::SparseMatrix<double, Eigen::RowMajor> a(num_constraints(), num_variables());
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

double evaluate(const LinearExpr& expr, const Eigen::VectorXd& x) {
  double sum = expr.constant;
  for (const auto& t : expr.terms) sum += t.coef * x(t.var);
  return sum;
}

std::vector<std::string> check_feasibility(const MipModel& model,
                                           const Eigen::VectorXd& x,
                                           double tol) {
  std::vector<std::string> out;
  if (x.size() != model.num_variables()) {
    out.push_back("value vector has wrong length");
    return out;
  }
  const auto fmt = [](double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
  };
  for (int j = 0; j < model.num_variables(); ++j) {
    const auto& v = model.variable(j);
    if (!std::isfinite(x(j))) {
      out.push_back(v.name + " is not finite");
      continue;
    }
    if (x(j) < v.lower - tol || x(j) > v.upper + tol)
      out.push_back(v.name + " = " + fmt(x(j)) + " outside [" + fmt(v.lower) +
                    ", " + fmt(v.upper) + "]");
    if (v.kind == VarKind::Integer && std::abs(x(j) - std::round(x(j))) > tol)
      out.push_back(v.name + " = " + fmt(x(j)) + " is not integral");
  }
  const Eigen::VectorXd activity = model.constraint_matrix() * x;
  for (int r = 0; r < model.num_constraints(); ++r) {
    const auto& c = model.constraint(r);
    const double lhs = activity(r);
    bool bad = false;
    switch (c.sense) {
      case Sense::LessEqual: bad = lhs > c.rhs + tol; break;
      case Sense::GreaterEqual: bad = lhs < c.rhs - tol; break;
      case Sense::Equal: bad = std::abs(lhs - c.rhs) > tol; break;
    }
    if (bad)
      out.push_back("row " + c.name + ": activity " + fmt(lhs) + " vs rhs " +
                    fmt(c.rhs));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Export

namespace {

std::string number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

bool legal_lp_name(const std::string& name) {
  if (name.empty() || name.size() > 255) return false;
  const auto head = static_cast<unsigned char>(name.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '.';
  });
}

bool legal_mps_name(const std::string& name) {
  if (name.empty() || name.front() == '$' || name.front() == '*') return false;
  return std::all_of(name.begin(), name.end(),
                     [](unsigned char c) { return std::isgraph(c); });
}

std::string objective_row_name(const MipModel& m) {
  std::string name = "obj";
  while (m.find_constraint(name) || m.find_variable(name)) name += "_";
  return name;
}

void check_names(const MipModel& m, bool (*legal)(const std::string&),
                 const char* format) {
  for (const auto& v : m.variables())
    if (!legal(v.name))
      throw ExportError(std::string("variable name '") + v.name +
                        "' is not legal in " + format + " format");
  for (const auto& c : m.constraints())
    if (!legal(c.name))
      throw ExportError(std::string("constraint name '") + c.name +
                        "' is not legal in " + format + " format");
}

void write_lp_terms(std::ostringstream& out, const MipModel& m,
                    const std::vector<Term>& terms) {
  if (terms.empty()) {
    out << " 0 " << (m.num_variables() ? m.variable(0).name : "");
    return;
  }
  for (const auto& t : terms) {
    out << (t.coef < 0 ? " - " : " + ") << number(std::abs(t.coef)) << ' '
        << m.variable(t.var).name;
  }
}

std::string export_lp(const MipModel& m) {
  check_names(m, legal_lp_name, "LP");
  std::ostringstream out;
  out << "\\ fruc model: " << m.num_variables() << " variables, "
      << m.num_constraints() << " constraints\n";
  out << "Minimize\n " << objective_row_name(m) << ":";
  std::vector<Term> obj;
  for (int j = 0; j < m.num_variables(); ++j)
    if (m.objective()(j) != 0.0) obj.push_back({j, m.objective()(j)});
  if (obj.empty() && m.num_variables() > 0) obj.push_back({0, 0.0});
  for (const auto& t : obj)
    out << (t.coef < 0 ? " - " : " + ") << number(std::abs(t.coef)) << ' '
        << m.variable(t.var).name;
  if (m.objective_offset() != 0.0)
    out << (m.objective_offset() < 0 ? " - " : " + ")
        << number(std::abs(m.objective_offset()));
  out << "\nSubject To\n";
  for (const auto& c : m.constraints()) {
    out << ' ' << c.name << ':';
    write_lp_terms(out, m, c.terms);
    const char* op = c.sense == Sense::LessEqual ? " <= "
                     : c.sense == Sense::Equal   ? " = "
                                                 : " >= ";
    out << op << number(c.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : m.variables()) {
    const bool lo = std::isfinite(v.lower);
    const bool hi = std::isfinite(v.upper);
    if (lo && hi && v.lower == v.upper)
      out << ' ' << v.name << " = " << number(v.lower) << '\n';
    else if (!lo && !hi)
      out << ' ' << v.name << " free\n";
    else if (lo && !hi)
      out << ' ' << v.name << " >= " << number(v.lower) << '\n';
    else
      out << ' ' << (lo ? number(v.lower) : std::string("-inf")) << " <= "
          << v.name << " <= " << number(v.upper) << '\n';
  }
  if (m.num_integer() > 0) {
    out << "General\n";
    for (const auto& v : m.variables())
      if (v.kind == VarKind::Integer) out << ' ' << v.name << '\n';
  }
  out << "End\n";
  return out.str();
}

std::string export_mps(const MipModel& m) {
  check_names(m, legal_mps_name, "MPS");
  const std::string obj_name = objective_row_name(m);
  std::ostringstream out;
  out << "NAME fruc\n";
  out << "ROWS\n";
  out << " N  " << obj_name << '\n';
  for (const auto& c : m.constraints()) {
    const char* s = c.sense == Sense::LessEqual ? "L"
                    : c.sense == Sense::Equal   ? "E"
                                                : "G";
    out << ' ' << s << "  " << c.name << '\n';
  }

  // Column-major view of the rows.
  std::vector<std::vector<Term>> columns(m.num_variables());
  for (int r = 0; r < m.num_constraints(); ++r)
    for (const auto& t : m.constraint(r).terms) columns[t.var].push_back({r, t.coef});

  out << "COLUMNS\n";
  bool in_integer_block = false;
  int marker = 0;
  for (int j = 0; j < m.num_variables(); ++j) {
    const auto& v = m.variable(j);
    const bool is_int = v.kind == VarKind::Integer;
    if (is_int != in_integer_block) {
      out << "    M" << marker++ << " 'MARKER' "
          << (is_int ? "'INTORG'" : "'INTEND'") << '\n';
      in_integer_block = is_int;
    }
    out << "    " << v.name << ' ' << obj_name << ' '
        << number(m.objective()(j)) << '\n';
    for (const auto& t : columns[j])
      out << "    " << v.name << ' ' << m.constraint(t.var).name << ' '
          << number(t.coef) << '\n';
  }
  if (in_integer_block) out << "    M" << marker << " 'MARKER' 'INTEND'\n";

  out << "RHS\n";
  if (m.objective_offset() != 0.0)
    out << "    RHS " << obj_name << ' ' << number(-m.objective_offset()) << '\n';
  for (const auto& c : m.constraints())
    if (c.rhs != 0.0) out << "    RHS " << c.name << ' ' << number(c.rhs) << '\n';

  out << "BOUNDS\n";
  for (const auto& v : m.variables()) {
    const bool lo = std::isfinite(v.lower);
    const bool hi = std::isfinite(v.upper);
    if (lo && hi && v.lower == v.upper) {
      out << " FX BND " << v.name << ' ' << number(v.lower) << '\n';
      continue;
    }
    if (!lo && !hi) {
      out << " FR BND " << v.name << '\n';
      continue;
    }
    if (lo)
      out << " LO BND " << v.name << ' ' << number(v.lower) << '\n';
    else
      out << " MI BND " << v.name << '\n';
    if (hi)
      out << " UP BND " << v.name << ' ' << number(v.upper) << '\n';
    else
      out << " PL BND " << v.name << '\n';
  }
  out << "ENDATA\n";
  return out.str();
}

}  // namespace

std::string export_model(const MipModel& model, ExportFormat format) {
  return format == ExportFormat::Lp ? export_lp(model) : export_mps(model);
}

}  // namespace fruc
