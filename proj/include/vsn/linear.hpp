#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace vsn {

// ---------------------------------------------------------------------------
// Variables, constraints and the MILP container shared by the model builder,
// the solvers and the heuristic.
// ---------------------------------------------------------------------------

enum class VarKind { Z, X, Y, H, F, G };

/// One decision variable. Binaries carry bounds [0,1] plus the integral flag;
/// relaxation just clears the flag. The subscripts record which scenario
/// entity the variable belongs to: Z(app), X(node), Y(node,app,tp),
/// H(app,tp), F(from,to), G(from,to).
struct VariableHandle {
  int index = 0;
  VarKind kind = VarKind::Z;
  int sub0 = -1;
  int sub1 = -1;
  int sub2 = -1;
  double lower = 0.0;
  double upper = 1.0;
  bool integral = false;

  std::string name() const {
    char buf[64];
    switch (kind) {
      case VarKind::Z: std::snprintf(buf, sizeof buf, "z[%d]", sub0); break;
      case VarKind::X: std::snprintf(buf, sizeof buf, "x[%d]", sub0); break;
      case VarKind::Y:
        std::snprintf(buf, sizeof buf, "y[%d,%d,%d]", sub0, sub1, sub2);
        break;
      case VarKind::H: std::snprintf(buf, sizeof buf, "h[%d,%d]", sub0, sub1); break;
      case VarKind::F: std::snprintf(buf, sizeof buf, "f[%d,%d]", sub0, sub1); break;
      case VarKind::G: std::snprintf(buf, sizeof buf, "g[%d,%d]", sub0, sub1); break;
    }
    return buf;
  }
};

enum class Sense { LE, EQ, GE };

struct LinearConstraint {
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  Sense sense = Sense::LE;
  double rhs = 0.0;
  std::string tag;  // constraint family + subscripts, e.g. "cover[1,2]"
};

/// Bidirectional map between scenario entities and variable indices.
struct ModelIndex {
  std::map<int, int> z;                            // app id -> var
  std::map<int, int> x;                            // node id -> var
  std::map<std::tuple<int, int, int>, int> y;      // (node, app, tp) -> var
  std::map<std::pair<int, int>, int> h;            // (app, tp) -> var
  std::map<std::pair<int, int>, int> f;            // (from, to) -> var
  std::map<std::pair<int, int>, int> g;            // (from, to) -> var

  int y_at(int node, int app, int tp) const {
    auto it = y.find({node, app, tp});
    return it == y.end() ? -1 : it->second;
  }
  int f_at(int from, int to) const {
    auto it = f.find({from, to});
    return it == f.end() ? -1 : it->second;
  }
  int g_at(int from, int to) const {
    auto it = g.find({from, to});
    return it == g.end() ? -1 : it->second;
  }
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Unknown };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unknown: return "unknown";
  }
  return "?";
}

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> values;  // indexed by VariableHandle::index
};

struct MilpModel {
  std::vector<VariableHandle> variables;
  std::vector<LinearConstraint> constraints;
  std::vector<std::pair<int, double>> objective;  // maximized
  ModelIndex index;

  int add_variable(VarKind kind, int s0, int s1, int s2, double lo, double up,
                   bool integral) {
    VariableHandle v;
    v.index = static_cast<int>(variables.size());
    v.kind = kind;
    v.sub0 = s0;
    v.sub1 = s1;
    v.sub2 = s2;
    v.lower = lo;
    v.upper = up;
    v.integral = integral;
    variables.push_back(v);
    return v.index;
  }

  /// Pins a variable to a value inside its current bounds.
  void fix_variable(int var, double value) {
    auto& v = variables.at(var);
    if (value < v.lower - 1e-12 || value > v.upper + 1e-12)
      throw std::domain_error("fix_variable: value " + std::to_string(value) +
                              " outside bounds of " + v.name());
    v.lower = v.upper = value;
  }

  double objective_value(const std::vector<double>& values) const {
    double total = 0.0;
    for (const auto& [var, coef] : objective) total += coef * values[var];
    return total;
  }

  bool any_integral() const {
    for (const auto& v : variables)
      if (v.integral) return true;
    return false;
  }
};

/// Copy of the model with every integrality flag cleared (bounds retained).
inline MilpModel relax(const MilpModel& model) {
  MilpModel out = model;
  for (auto& v : out.variables) v.integral = false;
  return out;
}

inline MilpModel with_fixed(const MilpModel& model, int var, double value) {
  MilpModel out = model;
  out.fix_variable(var, value);
  return out;
}

// ---------------------------------------------------------------------------
// LP text dump, for cross-checks with third-party solvers.
// ---------------------------------------------------------------------------

namespace detail {
inline std::string lp_symbol(const std::string& name) {
  std::string s = name;
  for (char& c : s) {
    if (c == '[' || c == ',') c = '_';
  }
  std::erase(s, ']');
  return s;
}
inline std::string lp_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

inline void write_lp(const MilpModel& model, std::ostream& os) {
  using detail::lp_number;
  using detail::lp_symbol;
  os << "Maximize\n obj:";
  for (const auto& [var, coef] : model.objective) {
    os << (coef >= 0 ? " + " : " - ") << lp_number(std::fabs(coef)) << " "
       << lp_symbol(model.variables[var].name());
  }
  os << "\nSubject To\n";
  for (const auto& c : model.constraints) {
    os << " " << lp_symbol(c.tag) << ":";
    for (const auto& [var, coef] : c.terms)
      os << (coef >= 0 ? " + " : " - ") << lp_number(std::fabs(coef)) << " "
         << lp_symbol(model.variables[var].name());
    switch (c.sense) {
      case Sense::LE: os << " <= "; break;
      case Sense::EQ: os << " = "; break;
      case Sense::GE: os << " >= "; break;
    }
    os << lp_number(c.rhs) << "\n";
  }
  os << "Bounds\n";
  for (const auto& v : model.variables)
    os << " " << lp_number(v.lower) << " <= " << lp_symbol(v.name())
       << " <= " << lp_number(v.upper) << "\n";
  bool any = false;
  for (const auto& v : model.variables) {
    if (!v.integral) continue;
    if (!any) os << "General\n";
    any = true;
    os << " " << lp_symbol(v.name());
  }
  if (any) os << "\n";
  os << "End\n";
}

}  // namespace vsn
