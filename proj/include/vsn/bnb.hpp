#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "vsn/linear.hpp"
#include "vsn/simplex.hpp"

namespace vsn {

enum class Branching { MostFractional, PseudoCost };
enum class Search { BestFirst, DepthFirst };

struct BnbConfig {
  double integrality_tol = 1e-6;
  double gap_tol = 1e-6;  // relative, also used as the absolute floor
  long node_limit = 500000;
  double time_limit_s = std::numeric_limits<double>::infinity();
  Branching branching = Branching::MostFractional;
  Search search = Search::BestFirst;
};

struct SolverStats {
  long lp_iterations = 0;
  long bnb_nodes = 0;
  bool has_incumbent = false;
  double incumbent = 0.0;
  double bound = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  double wall_time_s = 0.0;
};

struct MilpOutcome {
  Solution solution;
  SolverStats stats;
};

// ---------------------------------------------------------------------------
// LP-based branch and bound over the binary variables. Bounding via the
// bounded-variable simplex, branching on the most fractional binary (or
// pseudo-costs), best-first or depth-first search. Single-threaded and fully
// deterministic for a fixed model and configuration.
// ---------------------------------------------------------------------------
class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const BnbConfig& config)
      : original_(model), config_(config) {
    for (const auto& v : model.variables)
      if (v.integral) binaries_.push_back(v.index);
  }

  MilpOutcome run() {
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<std::chrono::steady_clock::time_point> deadline;
    if (std::isfinite(config_.time_limit_s))
      deadline = t0 + std::chrono::microseconds(
                          static_cast<long>(config_.time_limit_s * 1e6));

    MilpModel work = relax(original_);
    std::vector<double> base_lo(work.variables.size()),
        base_up(work.variables.size());
    for (const auto& v : work.variables) {
      base_lo[v.index] = v.lower;
      base_up[v.index] = v.upper;
    }

    MilpOutcome out;
    pseudo_up_.assign(work.variables.size(), {0.0, 0});
    pseudo_down_.assign(work.variables.size(), {0.0, 0});

    struct Node {
      std::vector<std::pair<int, bool>> decisions;  // (variable, branched up)
      double bound = 0.0;
      long seq = 0;
      int branch_var = -1;
      bool branched_up = false;
      double parent_fraction = 0.0;
      double parent_bound = 0.0;
    };
    struct BestFirstOrder {
      bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound < b.bound;  // larger bound first
        return a.seq > b.seq;                              // then FIFO
      }
    };
    std::priority_queue<Node, std::vector<Node>, BestFirstOrder> heap;
    std::vector<Node> stack;
    long seq = 0;

    auto push = [&](Node n) {
      if (config_.search == Search::BestFirst)
        heap.push(std::move(n));
      else
        stack.push_back(std::move(n));
    };
    auto empty = [&] {
      return config_.search == Search::BestFirst ? heap.empty() : stack.empty();
    };
    auto pop = [&] {
      if (config_.search == Search::BestFirst) {
        Node n = heap.top();
        heap.pop();
        return n;
      }
      Node n = std::move(stack.back());
      stack.pop_back();
      return n;
    };
    auto open_bound = [&]() -> double {
      if (config_.search == Search::BestFirst)
        return heap.empty() ? -std::numeric_limits<double>::infinity()
                            : heap.top().bound;
      double b = -std::numeric_limits<double>::infinity();
      // The stack is only scanned when reporting, not per node.
      for (const auto& n : stack) b = std::max(b, n.bound);
      return b;
    };

    bool has_incumbent = false;
    double incumbent_obj = -std::numeric_limits<double>::infinity();
    std::vector<double> incumbent_values;
    bool limits_hit = false;

    auto prune_threshold = [&]() {
      return incumbent_obj +
             std::max(config_.gap_tol, config_.gap_tol * std::fabs(incumbent_obj));
    };

    push({{}, std::numeric_limits<double>::infinity(), seq++, -1, false, 0.0, 0.0});

    while (!empty()) {
      if (out.stats.bnb_nodes >= config_.node_limit) {
        limits_hit = true;
        break;
      }
      if (deadline && std::chrono::steady_clock::now() > *deadline) {
        limits_hit = true;
        break;
      }
      Node node = pop();
      if (has_incumbent && node.bound <= prune_threshold()) continue;

      // Apply the branch decisions on top of the base bounds.
      for (auto& v : work.variables) {
        v.lower = base_lo[v.index];
        v.upper = base_up[v.index];
      }
      bool conflict = false;
      for (const auto& [var, up] : node.decisions) {
        auto& v = work.variables[var];
        if (up)
          v.lower = 1.0;
        else
          v.upper = 0.0;
        if (v.lower > v.upper) conflict = true;
      }
      if (conflict) continue;

      LpOptions lp_opts;
      lp_opts.deadline = deadline;
      LpResult lp = solve_lp_relaxation(work, lp_opts);
      ++out.stats.bnb_nodes;
      out.stats.lp_iterations += lp.iterations;

      if (lp.status == LpStatus::Limit) {
        limits_hit = true;
        break;
      }
      if (lp.status == LpStatus::Unbounded)
        throw SolverError("branch and bound: relaxation is unbounded");
      if (lp.status == LpStatus::Infeasible) continue;

      if (node.branch_var >= 0) update_pseudocost(node, lp.objective);
      if (has_incumbent && lp.objective <= prune_threshold()) continue;

      const int frac = pick_branch_variable(lp.values);
      if (frac < 0) {
        // Integral: snap binaries exactly and keep the better incumbent.
        std::vector<double> snapped = lp.values;
        for (int var : binaries_) snapped[var] = std::round(snapped[var]);
        const double obj = original_.objective_value(snapped);
        if (!has_incumbent || obj > incumbent_obj) {
          has_incumbent = true;
          incumbent_obj = obj;
          incumbent_values = std::move(snapped);
        }
        continue;
      }

      const double fraction = lp.values[frac] - std::floor(lp.values[frac]);
      Node down;
      down.decisions = node.decisions;
      down.decisions.emplace_back(frac, false);
      down.bound = lp.objective;
      down.seq = seq++;
      down.branch_var = frac;
      down.branched_up = false;
      down.parent_fraction = fraction;
      down.parent_bound = lp.objective;
      Node up = down;
      up.decisions.back().second = true;
      up.seq = seq++;
      up.branched_up = true;
      // Depth-first pops the up child first: fractional activations tend to
      // round up into incumbents.
      push(std::move(down));
      push(std::move(up));
    }

    out.stats.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.stats.has_incumbent = has_incumbent;
    out.stats.incumbent = has_incumbent ? incumbent_obj : 0.0;

    const double remaining = limits_hit || !empty() ? open_bound()
                                                    : -std::numeric_limits<double>::infinity();
    out.stats.bound = std::max(remaining, has_incumbent
                                              ? incumbent_obj
                                              : -std::numeric_limits<double>::infinity());

    if (has_incumbent) {
      out.solution.values = incumbent_values;
      out.solution.objective = incumbent_obj;
      const bool closed = !limits_hit ||
                          out.stats.bound <= prune_threshold();
      out.solution.status = closed ? SolveStatus::Optimal : SolveStatus::Feasible;
      out.stats.gap = (out.stats.bound - incumbent_obj) /
                      std::max(1.0, std::fabs(incumbent_obj));
      if (out.stats.gap < 0) out.stats.gap = 0;
    } else if (limits_hit) {
      out.solution.status = SolveStatus::Unknown;  // not proven infeasible
    } else {
      out.solution.status = SolveStatus::Infeasible;
      out.stats.bound = -std::numeric_limits<double>::infinity();
    }
    return out;
  }

 private:
  struct PseudoCost {
    double total = 0.0;
    long count = 0;
    double average(double fallback) const {
      return count > 0 ? total / count : fallback;
    }
  };

  const MilpModel& original_;
  BnbConfig config_;
  std::vector<int> binaries_;
  std::vector<PseudoCost> pseudo_up_, pseudo_down_;

  void update_pseudocost(const auto& node, double child_objective) {
    const double degradation = std::max(0.0, node.parent_bound - child_objective);
    const double frac =
        node.branched_up ? 1.0 - node.parent_fraction : node.parent_fraction;
    if (frac < 1e-9) return;
    auto& pc = node.branched_up ? pseudo_up_[node.branch_var]
                                : pseudo_down_[node.branch_var];
    pc.total += degradation / frac;
    pc.count += 1;
  }

  int pick_branch_variable(const std::vector<double>& values) const {
    int best = -1;
    double best_score = config_.integrality_tol;
    for (int var : binaries_) {
      const double v = values[var];
      const double dist = std::fabs(v - std::round(v));
      if (dist <= config_.integrality_tol) continue;
      double score;
      if (config_.branching == Branching::PseudoCost) {
        const double f = v - std::floor(v);
        const double up = pseudo_up_[var].average(1.0) * (1.0 - f);
        const double down = pseudo_down_[var].average(1.0) * f;
        score = std::max(up, 1e-6) * std::max(down, 1e-6);
      } else {
        score = dist;  // distance to the nearest integer, peak at 0.5
      }
      // binaries_ ascends, so strict improvement keeps the lowest index on ties.
      if (score > best_score) {
        best_score = score;
        best = var;
      }
    }
    return best;
  }
};

/// Exact MILP solve: optimal within gap_tol, or the best incumbent plus a
/// proven bound when node/time limits interrupt the search (the status says
/// which). Deterministic for a fixed model and configuration.
inline MilpOutcome solve_milp(const MilpModel& model, const BnbConfig& config = {}) {
  return BranchAndBound(model, config).run();
}

}  // namespace vsn
