#pragma once

// Brute-force LP oracle for tiny instances with finite variable bounds:
// enumerates every choice of n active constraints (rows at equality plus
// variable bounds), solves the square system, keeps the best feasible
// vertex. A nonempty bounded polytope always has an optimal vertex, so the
// oracle is exact on such instances and reports infeasibility otherwise.

#include <cmath>
#include <optional>
#include <vector>

#include "vsn/linear.hpp"

namespace testutil {

struct OracleVerdict {
  bool feasible = false;
  double objective = 0.0;
};

inline OracleVerdict lp_oracle(const vsn::MilpModel& model) {
  const int n = static_cast<int>(model.variables.size());

  struct Plane {
    std::vector<double> a;
    double b;
  };
  std::vector<Plane> planes;
  for (const auto& c : model.constraints) {
    Plane p{std::vector<double>(n, 0.0), c.rhs};
    for (const auto& [var, coef] : c.terms) p.a[var] += coef;
    planes.push_back(std::move(p));
  }
  for (int j = 0; j < n; ++j) {
    Plane lo{std::vector<double>(n, 0.0), model.variables[j].lower};
    lo.a[j] = 1.0;
    planes.push_back(lo);
    Plane up{std::vector<double>(n, 0.0), model.variables[j].upper};
    up.a[j] = 1.0;
    planes.push_back(up);
  }

  std::vector<double> objective(n, 0.0);
  for (const auto& [var, coef] : model.objective) objective[var] += coef;

  auto feasible_point = [&](const std::vector<double>& x) {
    for (int j = 0; j < n; ++j)
      if (x[j] < model.variables[j].lower - 1e-7 ||
          x[j] > model.variables[j].upper + 1e-7)
        return false;
    for (const auto& c : model.constraints) {
      double lhs = 0.0;
      for (const auto& [var, coef] : c.terms) lhs += coef * x[var];
      switch (c.sense) {
        case vsn::Sense::LE:
          if (lhs > c.rhs + 1e-7) return false;
          break;
        case vsn::Sense::GE:
          if (lhs < c.rhs - 1e-7) return false;
          break;
        case vsn::Sense::EQ:
          if (std::fabs(lhs - c.rhs) > 1e-7) return false;
          break;
      }
    }
    return true;
  };

  OracleVerdict verdict;
  const int total = static_cast<int>(planes.size());
  std::vector<int> pick(n);
  auto solve_system = [&](const std::vector<int>& rows)
      -> std::optional<std::vector<double>> {
    std::vector<std::vector<double>> m(n, std::vector<double>(n + 1));
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) m[r][c] = planes[rows[r]].a[c];
      m[r][n] = planes[rows[r]].b;
    }
    for (int col = 0; col < n; ++col) {
      int piv = -1;
      double best = 1e-9;
      for (int r = col; r < n; ++r)
        if (std::fabs(m[r][col]) > best) {
          best = std::fabs(m[r][col]);
          piv = r;
        }
      if (piv < 0) return std::nullopt;
      std::swap(m[col], m[piv]);
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        const double f = m[r][col] / m[col][col];
        for (int c = col; c <= n; ++c) m[r][c] -= f * m[col][c];
      }
    }
    std::vector<double> x(n);
    for (int r = 0; r < n; ++r) x[r] = m[r][n] / m[r][r];
    return x;
  };

  // Iterate all n-subsets of the candidate planes.
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  while (true) {
    if (auto x = solve_system(idx)) {
      if (feasible_point(*x)) {
        double obj = 0.0;
        for (int j = 0; j < n; ++j) obj += objective[j] * (*x)[j];
        if (!verdict.feasible || obj > verdict.objective) {
          verdict.feasible = true;
          verdict.objective = obj;
        }
      }
    }
    int pos = n - 1;
    while (pos >= 0 && idx[pos] == total - n + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int k = pos + 1; k < n; ++k) idx[k] = idx[k - 1] + 1;
  }
  return verdict;
}

}  // namespace testutil
