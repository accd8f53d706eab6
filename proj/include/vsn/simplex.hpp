#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vsn/linear.hpp"

namespace vsn {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, Limit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;  // structural variables only
  double objective = 0.0;
  long iterations = 0;
};

struct LpOptions {
  long max_iterations = 0;  // 0: derived from the problem size
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

// ---------------------------------------------------------------------------
// Bounded-variable primal simplex on a dense tableau.
//
// Two phases: artificial variables absorb rows whose slack cannot cover the
// initial residual, phase one drives their sum to zero, phase two optimizes
// the real objective. Pricing is Dantzig with a Bland fallback after a
// degeneracy streak (threshold 200). Rows are equilibrated by their largest
// coefficient so the fixed tolerances behave across the mixed units of the
// allocation models (bits, bps, joules).
// ---------------------------------------------------------------------------
class SimplexSolver {
 public:
  explicit SimplexSolver(const MilpModel& model, const LpOptions& opts = {})
      : opts_(opts) {
    n_ = static_cast<int>(model.variables.size());
    lower_.reserve(n_);
    upper_.reserve(n_);
    for (const auto& v : model.variables) {
      if (v.lower > v.upper + 1e-12)
        throw SolverError("variable " + v.name() + " has empty bounds");
      lower_.push_back(v.lower);
      upper_.push_back(v.upper);
    }
    cost_.assign(n_, 0.0);
    for (const auto& [var, coef] : model.objective) cost_[var] += coef;

    // Materialize rows, dropping trivial empties early.
    for (const auto& c : model.constraints) {
      if (c.terms.empty()) {
        const bool ok = (c.sense == Sense::LE && c.rhs >= -1e-9) ||
                        (c.sense == Sense::GE && c.rhs <= 1e-9) ||
                        (c.sense == Sense::EQ && std::fabs(c.rhs) <= 1e-9);
        if (!ok) trivially_infeasible_ = true;
        continue;
      }
      rows_.push_back(&c);
    }
    m_ = static_cast<int>(rows_.size());
  }

  LpResult solve() {
    LpResult res;
    if (trivially_infeasible_) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    build_tableau();
    if (!phase_one(res)) return res;     // infeasible or limit
    if (!phase_two(res)) return res;     // unbounded or limit
    extract(res);
    return res;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  static constexpr double kPriceTol = 1e-9;
  static constexpr double kPivotTol = 1e-9;
  static constexpr double kDegenerateStep = 1e-11;
  static constexpr int kBlandThreshold = 200;

  enum class State : unsigned char { Basic, AtLower, AtUpper };

  const LpOptions opts_;
  int n_ = 0;  // structural columns
  int m_ = 0;  // rows
  int cols_ = 0;
  bool trivially_infeasible_ = false;
  std::vector<const LinearConstraint*> rows_;
  std::vector<double> lower_, upper_, cost_;

  std::vector<double> tab_;    // m x cols dictionary coefficients
  std::vector<double> beta_;   // value of the basic variable of each row
  std::vector<double> price_;  // reduced costs of the active phase
  std::vector<int> basis_;
  std::vector<State> state_;
  std::vector<double> col_lo_, col_up_;
  int first_artificial_ = 0;
  long iterations_ = 0;
  int degenerate_streak_ = 0;
  bool bland_ = false;

  double& tab(int r, int c) { return tab_[static_cast<std::size_t>(r) * cols_ + c]; }

  double nonbasic_value(int col) const {
    return state_[col] == State::AtUpper ? col_up_[col] : col_lo_[col];
  }

  long iteration_limit() const {
    if (opts_.max_iterations > 0) return opts_.max_iterations;
    return 20000 + 50L * (m_ + n_);
  }

  void build_tableau() {
    // Row scaling factors.
    std::vector<double> scale(m_, 1.0);
    for (int r = 0; r < m_; ++r) {
      double mx = 0.0;
      for (const auto& [var, coef] : rows_[r]->terms)
        mx = std::max(mx, std::fabs(coef));
      scale[r] = mx > 0 ? 1.0 / mx : 1.0;
    }

    // Columns: structural | slack per row | artificials (decided below).
    col_lo_ = lower_;
    col_up_ = upper_;
    std::vector<double> rhs(m_);
    for (int r = 0; r < m_; ++r) {
      rhs[r] = rows_[r]->rhs * scale[r];
      switch (rows_[r]->sense) {
        case Sense::LE: col_lo_.push_back(0.0); col_up_.push_back(kInf); break;
        case Sense::EQ: col_lo_.push_back(0.0); col_up_.push_back(0.0); break;
        case Sense::GE: col_lo_.push_back(-kInf); col_up_.push_back(0.0); break;
      }
    }

    // Start with every structural variable at a finite bound.
    state_.assign(n_ + m_, State::AtLower);
    for (int j = 0; j < n_; ++j) {
      if (std::isinf(col_lo_[j])) {
        if (std::isinf(col_up_[j]))
          throw SolverError("free variables are not supported");
        state_[j] = State::AtUpper;
      }
    }

    // Residual each slack would have to absorb.
    std::vector<double> s0(m_);
    for (int r = 0; r < m_; ++r) {
      double acc = rhs[r];
      for (const auto& [var, coef] : rows_[r]->terms)
        acc -= coef * scale[r] * nonbasic_value(var);
      s0[r] = acc;
    }

    std::vector<int> artificial_row;
    std::vector<double> art_sign;
    for (int r = 0; r < m_; ++r) {
      const int slack = n_ + r;
      if (s0[r] < col_lo_[slack] - 1e-11) {
        state_[slack] = State::AtLower;
        artificial_row.push_back(r);
        art_sign.push_back(-1.0);  // row negated so the artificial enters at +1
      } else if (s0[r] > col_up_[slack] + 1e-11) {
        state_[slack] = State::AtUpper;
        artificial_row.push_back(r);
        art_sign.push_back(1.0);
      }
    }

    first_artificial_ = n_ + m_;
    const int n_art = static_cast<int>(artificial_row.size());
    cols_ = n_ + m_ + n_art;
    tab_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);
    beta_.assign(m_, 0.0);
    basis_.assign(m_, -1);
    state_.resize(cols_, State::AtLower);
    col_lo_.resize(cols_, 0.0);
    col_up_.resize(cols_, kInf);

    for (int r = 0; r < m_; ++r) {
      for (const auto& [var, coef] : rows_[r]->terms) tab(r, var) += coef * scale[r];
      tab(r, n_ + r) = 1.0;
      basis_[r] = n_ + r;
      state_[n_ + r] = State::Basic;
      beta_[r] = s0[r];
    }
    for (int k = 0; k < n_art; ++k) {
      const int r = artificial_row[k];
      const int slack = n_ + r;
      const int art = first_artificial_ + k;
      // Slack pinned to the bound it overshot; artificial takes the residual.
      state_[slack] = art_sign[k] < 0 ? State::AtLower : State::AtUpper;
      double residual;
      if (art_sign[k] < 0) {
        residual = col_lo_[slack] - s0[r];
        for (int c = 0; c < cols_; ++c) tab(r, c) = -tab(r, c);
      } else {
        residual = s0[r] - col_up_[slack];
      }
      tab(r, art) = 1.0;
      basis_[r] = art;
      state_[art] = State::Basic;
      beta_[r] = residual;
    }
  }

  bool phase_one(LpResult& res) {
    if (first_artificial_ == cols_) return true;  // started feasible
    // Maximize minus the sum of artificials.
    price_.assign(cols_, 0.0);
    for (int c = first_artificial_; c < cols_; ++c) price_[c] = -1.0;
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < first_artificial_) continue;
      for (int c = 0; c < cols_; ++c) price_[c] += tab(r, c);
    }
    if (!iterate(res, /*phase_one=*/true)) return false;

    double infeasibility = 0.0;
    for (int r = 0; r < m_; ++r)
      if (basis_[r] >= first_artificial_) infeasibility += std::fabs(beta_[r]);
    for (int c = first_artificial_; c < cols_; ++c)
      if (state_[c] != State::Basic) infeasibility += nonbasic_value(c);
    if (infeasibility > 1e-7) {
      res.status = LpStatus::Infeasible;
      res.iterations = iterations_;
      return false;
    }
    // Artificials may not come back.
    for (int c = first_artificial_; c < cols_; ++c) col_up_[c] = 0.0;
    return true;
  }

  bool phase_two(LpResult& res) {
    price_.assign(cols_, 0.0);
    for (int j = 0; j < n_; ++j) price_[j] = cost_[j];
    for (int r = 0; r < m_; ++r) {
      const int b = basis_[r];
      if (b >= n_ || cost_[b] == 0.0) continue;
      const double cb = cost_[b];
      for (int c = 0; c < cols_; ++c) price_[c] -= cb * tab(r, c);
    }
    return iterate(res, /*phase_one=*/false);
  }

  // Core loop shared by both phases. Returns false when the caller must stop
  // (res.status set); true at phase optimality.
  bool iterate(LpResult& res, bool phase_one) {
    const long limit = iteration_limit();
    while (true) {
      if (iterations_ >= limit || deadline_hit()) {
        res.status = LpStatus::Limit;
        res.iterations = iterations_;
        return false;
      }
      const int entering = choose_entering();
      if (entering < 0) return true;  // optimal for this phase

      const double dir = state_[entering] == State::AtLower ? 1.0 : -1.0;
      double best_t = col_up_[entering] - col_lo_[entering];  // own range
      int leaving_row = -1;
      for (int r = 0; r < m_; ++r) {
        const double coef = dir * tab(r, entering);
        if (std::fabs(coef) <= kPivotTol) continue;
        const int b = basis_[r];
        double t;
        if (coef > 0) {
          if (std::isinf(col_lo_[b])) continue;
          t = (beta_[r] - col_lo_[b]) / coef;
        } else {
          if (std::isinf(col_up_[b])) continue;
          t = (col_up_[b] - beta_[r]) / (-coef);
        }
        if (t < 0) t = 0;
        if (t < best_t - 1e-10) {
          best_t = t;
          leaving_row = r;
        } else if (leaving_row >= 0 && t <= best_t + 1e-10) {
          // Tie: prefer the numerically strongest pivot; under Bland the
          // lowest leaving variable index (anti-cycling).
          if (bland_) {
            if (basis_[r] < basis_[leaving_row]) leaving_row = r;
          } else if (std::fabs(tab(r, entering)) >
                     std::fabs(tab(leaving_row, entering))) {
            leaving_row = r;
          }
        }
      }

      if (std::isinf(best_t)) {
        if (phase_one)
          throw SolverError("phase one unbounded: numerical breakdown");
        res.status = LpStatus::Unbounded;
        res.iterations = iterations_;
        return false;
      }

      ++iterations_;
      track_degeneracy(best_t);

      if (leaving_row < 0) {
        // Bound flip: the entering variable crosses to its other bound.
        for (int r = 0; r < m_; ++r) beta_[r] -= dir * best_t * tab(r, entering);
        state_[entering] =
            state_[entering] == State::AtLower ? State::AtUpper : State::AtLower;
        continue;
      }
      pivot(leaving_row, entering, dir, best_t);
    }
  }

  int choose_entering() const {
    int best = -1;
    double best_score = kPriceTol;
    for (int c = 0; c < cols_; ++c) {
      if (state_[c] == State::Basic) continue;
      if (col_up_[c] - col_lo_[c] <= 1e-14) continue;  // fixed
      const double d = price_[c];
      const bool eligible = (state_[c] == State::AtLower && d > kPriceTol) ||
                            (state_[c] == State::AtUpper && d < -kPriceTol);
      if (!eligible) continue;
      if (bland_) return c;
      if (std::fabs(d) > best_score) {
        best_score = std::fabs(d);
        best = c;
      }
    }
    return best;
  }

  void pivot(int r, int s, double dir, double t) {
    const int leaving = basis_[r];
    const double coef = dir * tab(r, s);
    for (int k = 0; k < m_; ++k)
      if (k != r) beta_[k] -= dir * t * tab(k, s);
    const double entering_value = nonbasic_value(s) + dir * t;
    state_[leaving] = coef > 0 ? State::AtLower : State::AtUpper;

    const double piv = tab(r, s);
    double* prow = &tab_[static_cast<std::size_t>(r) * cols_];
    const double inv = 1.0 / piv;
    for (int c = 0; c < cols_; ++c) prow[c] *= inv;
    for (int k = 0; k < m_; ++k) {
      if (k == r) continue;
      double* krow = &tab_[static_cast<std::size_t>(k) * cols_];
      const double factor = krow[s];
      if (factor == 0.0) continue;
      for (int c = 0; c < cols_; ++c) krow[c] -= factor * prow[c];
      krow[s] = 0.0;
    }
    const double dprice = price_[s];
    if (dprice != 0.0)
      for (int c = 0; c < cols_; ++c) price_[c] -= dprice * prow[c];
    price_[s] = 0.0;

    basis_[r] = s;
    state_[s] = State::Basic;
    beta_[r] = entering_value;
  }

  void track_degeneracy(double step) {
    if (step <= kDegenerateStep) {
      if (++degenerate_streak_ >= kBlandThreshold) bland_ = true;
    } else {
      degenerate_streak_ = 0;
      bland_ = false;
    }
  }

  bool deadline_hit() const {
    if (!opts_.deadline) return false;
    if ((iterations_ & 0xff) != 0) return false;  // probe the clock sparsely
    return std::chrono::steady_clock::now() > *opts_.deadline;
  }

  void extract(LpResult& res) {
    std::vector<double> x(n_);
    for (int j = 0; j < n_; ++j) x[j] = nonbasic_value(j);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) x[basis_[r]] = beta_[r];
    for (int j = 0; j < n_; ++j) x[j] = std::clamp(x[j], lower_[j], upper_[j]);

    // A wrong answer must never leave this function silently.
    for (int r = 0; r < m_; ++r) {
      double lhs = 0.0, mag = 1.0;
      for (const auto& [var, coef] : rows_[r]->terms) {
        lhs += coef * x[var];
        mag = std::max(mag, std::fabs(coef));
      }
      const double resid = lhs - rows_[r]->rhs;
      const double tol = 1e-7 * std::max(mag, std::fabs(rows_[r]->rhs));
      double violation = 0.0;
      switch (rows_[r]->sense) {
        case Sense::LE: violation = resid; break;
        case Sense::GE: violation = -resid; break;
        case Sense::EQ: violation = std::fabs(resid); break;
      }
      if (violation > tol)
        throw SolverError("simplex returned an infeasible point (row " +
                          rows_[r]->tag + ", residual " + std::to_string(resid) +
                          ", " + std::to_string(m_) + " rows, " +
                          std::to_string(n_) + " cols, iteration " +
                          std::to_string(iterations_) + ")");
    }

    res.status = LpStatus::Optimal;
    res.values = std::move(x);
    res.objective = 0.0;
    for (int j = 0; j < n_; ++j) res.objective += cost_[j] * res.values[j];
    res.iterations = iterations_;
  }
};

/// Primal-optimal basic solution of the relaxed model, or an
/// Infeasible/Unbounded verdict. Deterministic for a fixed model.
inline LpResult solve_lp(const MilpModel& model, const LpOptions& opts = {}) {
  if (model.any_integral())
    throw std::invalid_argument("solve_lp: relax the model first");
  return SimplexSolver(model, opts).solve();
}

/// Internal entry point for solvers that manage integrality themselves.
inline LpResult solve_lp_relaxation(const MilpModel& model,
                                    const LpOptions& opts = {}) {
  return SimplexSolver(model, opts).solve();
}

}  // namespace vsn
