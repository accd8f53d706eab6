#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "vsn/model.hpp"
#include "vsn/simplex.hpp"

namespace vsn {

struct EnumerationTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnumerationResult {
  SolveStatus status = SolveStatus::Optimal;
  double objective = 0.0;
  SolutionValues values;
};

// ---------------------------------------------------------------------------
// Ground-truth oracle for tiny instances. Enumerates every consistent
// combination of application activations and test-point hosts (honoring
// coverage, per-node caps and memory/processing budgets), then settles the
// remaining flow/activation structure per routing mode:
//
//   static      parent chains are fixed, so flows are forced and checked
//               arithmetically;
//   singlepath  parent choices are branched lazily along the chains that
//               actually carry flow, flows again forced;
//   multipath   the cheapest set of extra active nodes is found by scanning
//               subsets in cost order, each checked with a pure flow-
//               feasibility LP.
//
// Work is metered; instances whose enumeration would exceed the configured
// budget are refused explicitly.
// ---------------------------------------------------------------------------
class ExactEnumerator {
 public:
  ExactEnumerator(const Scenario& sc, const RoutingMode& mode,
                  std::uint64_t work_limit = std::uint64_t{1} << 24)
      : sc_(sc), mode_(mode), links_(sc), work_limit_(work_limit) {
    sc_.validate();
    if (mode_.kind == RoutingKind::Static && !mode_.dodag)
      throw std::invalid_argument("static routing mode requires a DODAG");

    n_ = static_cast<int>(sc_.nodes.size());
    for (int u = 0; u < n_; ++u) id_to_idx_[sc_.nodes[u].id] = u;

    out_.resize(n_);
    const double gamma = sc_.radio.path_loss_exponent;
    for (int li = 0; li < links_.size(); ++li) {
      const auto& l = links_.link(li);
      out_[idx(l.from)].push_back(li);
      tx_coef_.push_back(sc_.radio.tx_energy_base +
                         sc_.radio.tx_energy_dist *
                             std::pow(links_.length(li), gamma));
    }
    for (auto& lst : out_)
      std::sort(lst.begin(), lst.end(), [&](int a, int b) {
        return links_.link(a).to < links_.link(b).to;
      });

    interference_.resize(links_.size());
    for (int li = 0; li < links_.size(); ++li) {
      const auto& l = links_.link(li);
      for (const auto& other : interfering_links(sc_, links_, l.from, l.to))
        interference_[li].push_back(links_.index_of(other.from, other.to));
    }

    if (mode_.kind == RoutingKind::Static) {
      parent_.assign(n_, -1);
      for (int u = 0; u < n_; ++u) {
        auto p = mode_.dodag->parent_of(sc_.nodes[u].id);
        if (p) parent_[u] = idx(*p);
      }
    }

    for (const auto& app : sc_.applications) {
      AppInfo info;
      info.id = app.id;
      info.preference = app.preference;
      info.rate = app.rate_bps;
      info.memory = app.memory_bits;
      info.mips = app.mips;
      info.watts = app.cpu_watts;
      info.cap = app.per_node_cap;
      for (const auto& tp : app.test_points) {
        std::vector<int> hosts;
        for (int node_id : coverage_set(sc_, app.id, tp.id)) hosts.push_back(idx(node_id));
        std::sort(hosts.begin(), hosts.end());
        info.tps.push_back({tp.id, std::move(hosts)});
      }
      apps_.push_back(std::move(info));
    }
  }

  EnumerationResult run() {
    refuse_if_structurally_huge();

    // The empty deployment is always feasible.
    best_objective_ = 0.0;
    best_ = SolutionValues{};
    for (const auto& app : apps_) best_.z[app.id] = 0.0;
    for (const auto& n : sc_.nodes) best_.x[n.id] = 0.0;

    const int napps = static_cast<int>(apps_.size());
    if (napps > 20) throw EnumerationTooLarge("too many applications to enumerate");
    mem_used_.assign(n_, 0.0);
    mips_used_.assign(n_, 0.0);
    per_app_count_.assign(static_cast<std::size_t>(n_) * napps, 0);

    for (std::uint32_t mask = 0; mask < (1u << napps); ++mask) {
      bool coverable = true;
      slots_.clear();
      for (int a = 0; a < napps && coverable; ++a) {
        if (!(mask & (1u << a))) continue;
        for (const auto& tp : apps_[a].tps) {
          if (tp.hosts.empty()) coverable = false;
          slots_.push_back({a, tp.id, &tp.hosts});
        }
      }
      if (!coverable) continue;
      mask_ = mask;
      assign_hosts(0);
    }

    EnumerationResult res;
    res.objective = best_objective_;
    res.values = best_;
    return res;
  }

 private:
  struct TpInfo {
    int tp_id;
    std::vector<int> hosts;  // node indices
  };
  struct AppInfo {
    int id;
    double preference, rate, memory, mips, watts;
    int cap;
    std::vector<TpInfo> tps;
  };
  struct Slot {
    int app;
    int tp_id;
    const std::vector<int>* hosts;
  };

  const Scenario& sc_;
  RoutingMode mode_;
  LinkTable links_;
  std::uint64_t work_limit_;
  std::uint64_t work_ = 0;
  int n_ = 0;
  std::map<int, int> id_to_idx_;
  std::vector<std::vector<int>> out_;          // node idx -> outgoing link idxs
  std::vector<double> tx_coef_;                // per link
  std::vector<std::vector<int>> interference_;  // per link
  std::vector<int> parent_;                    // static mode, node idx or -1

  std::vector<AppInfo> apps_;
  std::vector<Slot> slots_;
  std::uint32_t mask_ = 0;
  std::vector<double> mem_used_, mips_used_;
  std::vector<int> per_app_count_;
  std::vector<std::pair<int, int>> assignment_;  // (slot, host) pairs in order

  double best_objective_ = 0.0;
  SolutionValues best_;

  int idx(int node_id) const { return id_to_idx_.at(node_id); }

  void charge_work(std::uint64_t amount = 1) {
    work_ += amount;
    if (work_ > work_limit_)
      throw EnumerationTooLarge(
          "enumeration work limit exceeded; the instance is too large for the "
          "exhaustive oracle");
  }

  void refuse_if_structurally_huge() const {
    // Host-choice space alone, summed over activation patterns.
    long double total = 0.0;
    const int napps = static_cast<int>(apps_.size());
    if (napps > 20) throw EnumerationTooLarge("too many applications");
    for (std::uint32_t mask = 0; mask < (1u << napps); ++mask) {
      long double combos = 1.0;
      for (int a = 0; a < napps; ++a) {
        if (!(mask & (1u << a))) continue;
        for (const auto& tp : apps_[a].tps) {
          combos *= std::max<std::size_t>(tp.hosts.size(), 1);
          if (combos > 1e18) break;
        }
      }
      total += combos;
      if (total > static_cast<long double>(work_limit_))
        throw EnumerationTooLarge("host assignment space exceeds the oracle budget");
    }
  }

  // Depth-first assignment of hosts to the active test points with budget
  // pruning; complete assignments are handed to the routing evaluator.
  void assign_hosts(std::size_t slot_idx) {
    if (slot_idx == slots_.size()) {
      charge_work();
      evaluate_assignment();
      return;
    }
    const Slot& slot = slots_[slot_idx];
    const AppInfo& app = apps_[slot.app];
    for (int host : *slot.hosts) {
      int& count = per_app_count_[host * apps_.size() + slot.app];
      if (count + 1 > app.cap) continue;
      if (mem_used_[host] + app.memory >
          sc_.profile_of(sc_.nodes[host]).memory_bits * (1 + 1e-9))
        continue;
      if (mips_used_[host] + app.mips >
          sc_.profile_of(sc_.nodes[host]).mips * (1 + 1e-9))
        continue;
      ++count;
      mem_used_[host] += app.memory;
      mips_used_[host] += app.mips;
      assignment_.emplace_back(static_cast<int>(slot_idx), host);
      assign_hosts(slot_idx + 1);
      assignment_.pop_back();
      --count;
      mem_used_[host] -= app.memory;
      mips_used_[host] -= app.mips;
    }
  }

  struct LeafLoad {
    std::vector<double> gen;       // bps generated per node idx
    std::vector<double> watts;     // processing power per node idx
    std::vector<int> hosts;        // nodes hosting at least one test point
    double revenue = 0.0;
  };

  LeafLoad leaf_load() const {
    LeafLoad load;
    load.gen.assign(n_, 0.0);
    load.watts.assign(n_, 0.0);
    for (const auto& [slot_idx, host] : assignment_) {
      const AppInfo& app = apps_[slots_[slot_idx].app];
      load.gen[host] += app.rate;
      load.watts[host] += app.watts;
    }
    for (int u = 0; u < n_; ++u)
      if (load.gen[u] > 0 || load.watts[u] > 0) load.hosts.push_back(u);
    for (int a = 0; a < static_cast<int>(apps_.size()); ++a)
      if (mask_ & (1u << a)) load.revenue += apps_[a].preference;
    return load;
  }

  void evaluate_assignment() {
    LeafLoad load = leaf_load();
    switch (mode_.kind) {
      case RoutingKind::Static: {
        std::vector<double> flows(links_.size(), 0.0);
        if (!push_chain_flows(load, parent_, flows)) return;
        finish_forced_leaf(load, flows, /*with_g=*/false);
        return;
      }
      case RoutingKind::Singlepath: {
        std::vector<int> chosen(n_, -1);
        branch_routes(load, chosen);
        return;
      }
      case RoutingKind::Multipath:
        evaluate_multipath(load);
        return;
    }
  }

  // Walks every host's parent chain, accumulating the forced flow on each
  // edge. Fails when a chain leaves the node set (no parent) or loops.
  bool push_chain_flows(const LeafLoad& load, const std::vector<int>& parent,
                        std::vector<double>& flows) const {
    for (int host : load.hosts) {
      if (load.gen[host] <= 0 || sc_.nodes[host].is_sink) continue;
      int v = host;
      int steps = 0;
      while (!sc_.nodes[v].is_sink) {
        const int p = parent[v];
        if (p < 0) return false;
        flows[link_between(v, p)] += load.gen[host];
        v = p;
        if (++steps > n_) return false;  // cycle
      }
    }
    return true;
  }

  int link_between(int u, int v) const {
    return links_.index_of(sc_.nodes[u].id, sc_.nodes[v].id);
  }

  // Lazily branches on the parent of the first flow-carrying node that has
  // none yet; complete routings fall through to the forced-flow checks.
  void branch_routes(const LeafLoad& load, std::vector<int>& chosen) {
    charge_work();
    int branch_node = -1;
    for (int host : load.hosts) {
      if (load.gen[host] <= 0 || sc_.nodes[host].is_sink) continue;
      int v = host;
      int steps = 0;
      while (!sc_.nodes[v].is_sink) {
        if (chosen[v] < 0) {
          branch_node = v;
          break;
        }
        v = chosen[v];
        if (++steps > n_) return;  // routed into a cycle: infeasible branch
      }
      if (branch_node >= 0) break;
    }
    if (branch_node < 0) {
      std::vector<double> flows(links_.size(), 0.0);
      if (!push_chain_flows(load, chosen, flows)) return;
      finish_forced_leaf(load, flows, /*with_g=*/true, &chosen);
      return;
    }
    for (int li : out_[branch_node]) {
      chosen[branch_node] = idx(links_.link(li).to);
      branch_routes(load, chosen);
      chosen[branch_node] = -1;
    }
  }

  // Bandwidth, energy and cost bookkeeping shared by the forced-flow modes.
  void finish_forced_leaf(const LeafLoad& load, const std::vector<double>& flows,
                          bool with_g, const std::vector<int>* chosen = nullptr) {
    charge_work();
    if (!check_bandwidth(flows)) return;

    std::vector<bool> active(n_, false);
    for (int h : load.hosts) active[h] = true;
    for (int li = 0; li < links_.size(); ++li)
      if (flows[li] > 0) active[idx(links_.link(li).to)] = true;

    if (!check_energy(load, flows, active)) return;

    double cost = 0.0;
    for (int u = 0; u < n_; ++u)
      if (active[u]) cost += sc_.nodes[u].activation_cost;
    const double objective = load.revenue - cost;
    if (objective <= best_objective_ + 1e-12) return;

    best_objective_ = objective;
    best_ = assemble_values(load, active);
    for (int li = 0; li < links_.size(); ++li)
      if (flows[li] > 0)
        best_.f[{links_.link(li).from, links_.link(li).to}] = flows[li];
    if (with_g && chosen)
      for (int u = 0; u < n_; ++u)
        if ((*chosen)[u] >= 0 && active[u] && !sc_.nodes[u].is_sink)
          best_.g[{sc_.nodes[u].id, sc_.nodes[(*chosen)[u]].id}] = 1.0;
  }

  bool check_bandwidth(const std::vector<double>& flows) const {
    // Incremental shares: only rows touched by a nonzero flow can fail, and
    // interference is symmetric under uniform max power.
    std::map<int, double> share;
    for (int li = 0; li < links_.size(); ++li) {
      if (flows[li] <= 0) continue;
      const double s = flows[li] / links_.capacity(li);
      share[li] += s;
      for (int lj : interference_[li]) share[lj] += s;
    }
    for (const auto& [row, s] : share)
      if (s > 1 + 1e-9) return false;
    return true;
  }

  bool check_energy(const LeafLoad& load, const std::vector<double>& flows,
                    const std::vector<bool>& active) const {
    std::vector<double> watts(load.watts);
    for (int li = 0; li < links_.size(); ++li) {
      if (flows[li] <= 0) continue;
      watts[idx(links_.link(li).from)] += flows[li] * tx_coef_[li];
      watts[idx(links_.link(li).to)] += flows[li] * sc_.radio.rx_energy;
    }
    for (int u = 0; u < n_; ++u) {
      if (!active[u] && watts[u] <= 0) continue;
      const double budget =
          sc_.profile_of(sc_.nodes[u]).energy_j / sc_.lifetime_s;
      if (watts[u] > budget * (1 + 1e-9)) return false;
    }
    return true;
  }

  SolutionValues assemble_values(const LeafLoad& load,
                                 const std::vector<bool>& active) const {
    SolutionValues out;
    for (int a = 0; a < static_cast<int>(apps_.size()); ++a) {
      out.z[apps_[a].id] = (mask_ & (1u << a)) ? 1.0 : 0.0;
      for (const auto& tp : apps_[a].tps)
        out.h[{apps_[a].id, tp.tp_id}] = (mask_ & (1u << a)) ? 1.0 : 0.0;
    }
    for (const auto& [slot_idx, host] : assignment_) {
      const Slot& slot = slots_[slot_idx];
      out.y[{sc_.nodes[host].id, apps_[slot.app].id, slot.tp_id}] = 1.0;
    }
    for (int u = 0; u < n_; ++u) out.x[sc_.nodes[u].id] = active[u] ? 1.0 : 0.0;
    return out;
  }

  // --- multipath -----------------------------------------------------------

  void evaluate_multipath(const LeafLoad& load) {
    std::vector<int> optional;
    std::vector<bool> mandatory(n_, false);
    for (int h : load.hosts) mandatory[h] = true;
    for (int u = 0; u < n_; ++u)
      if (!mandatory[u]) optional.push_back(u);
    if (optional.size() > 20)
      throw EnumerationTooLarge("too many optional nodes for subset scan");

    // One model for the full candidate set; subsets are imposed by clamping
    // the flow variables that touch excluded nodes.
    MilpModel lp;
    std::vector<int> fvar(links_.size(), -1);
    for (int li = 0; li < links_.size(); ++li) {
      const auto& l = links_.link(li);
      if (sc_.nodes[idx(l.from)].is_sink) continue;  // sinks never re-emit
      fvar[li] = lp.add_variable(VarKind::F, l.from, l.to, -1, 0.0,
                                 links_.capacity(li), false);
    }
    for (int u = 0; u < n_; ++u) {
      if (sc_.nodes[u].is_sink) continue;
      LinearConstraint c;
      for (int li = 0; li < links_.size(); ++li) {
        if (fvar[li] < 0) continue;
        const auto& l = links_.link(li);
        if (idx(l.to) == u) c.terms.emplace_back(fvar[li], 1.0);
        if (idx(l.from) == u) c.terms.emplace_back(fvar[li], -1.0);
      }
      if (c.terms.empty() && load.gen[u] <= 0) continue;
      c.sense = Sense::EQ;
      c.rhs = -load.gen[u];
      c.tag = "flow[" + std::to_string(sc_.nodes[u].id) + "]";
      lp.constraints.push_back(std::move(c));
    }
    {
      LinearConstraint c;
      double rhs = 0.0;
      for (int u = 0; u < n_; ++u)
        if (!sc_.nodes[u].is_sink) rhs += load.gen[u];
      for (int li = 0; li < links_.size(); ++li) {
        if (fvar[li] < 0) continue;
        if (sc_.nodes[idx(links_.link(li).to)].is_sink)
          c.terms.emplace_back(fvar[li], 1.0);
      }
      c.sense = Sense::EQ;
      c.rhs = rhs;
      c.tag = "delivery";
      lp.constraints.push_back(std::move(c));
    }
    for (int li = 0; li < links_.size(); ++li) {
      LinearConstraint c;
      if (fvar[li] >= 0) c.terms.emplace_back(fvar[li], 1.0 / links_.capacity(li));
      for (int lj : interference_[li])
        if (fvar[lj] >= 0) c.terms.emplace_back(fvar[lj], 1.0 / links_.capacity(lj));
      if (c.terms.empty()) continue;
      c.sense = Sense::LE;
      c.rhs = 1.0;
      c.tag = "bw";
      lp.constraints.push_back(std::move(c));
    }
    for (int u = 0; u < n_; ++u) {
      LinearConstraint c;
      for (int li = 0; li < links_.size(); ++li) {
        if (fvar[li] < 0) continue;
        if (idx(links_.link(li).from) == u) c.terms.emplace_back(fvar[li], tx_coef_[li]);
        if (idx(links_.link(li).to) == u)
          c.terms.emplace_back(fvar[li], sc_.radio.rx_energy);
      }
      const double budget =
          sc_.profile_of(sc_.nodes[u]).energy_j / sc_.lifetime_s - load.watts[u];
      if (budget < -1e-12) return;  // hosting alone exceeds the energy budget
      if (c.terms.empty()) continue;
      c.sense = Sense::LE;
      c.rhs = budget;
      c.tag = "energy";
      lp.constraints.push_back(std::move(c));
    }

    auto solve_subset = [&](const std::vector<bool>& active)
        -> std::optional<std::vector<double>> {
      charge_work(4);  // an LP costs more than an arithmetic leaf
      for (int li = 0; li < links_.size(); ++li) {
        if (fvar[li] < 0) continue;
        const auto& l = links_.link(li);
        const bool allowed = active[idx(l.from)] && active[idx(l.to)];
        lp.variables[fvar[li]].upper = allowed ? links_.capacity(li) : 0.0;
      }
      LpResult res = solve_lp_relaxation(lp);
      if (res.status == LpStatus::Optimal) return res.values;
      return std::nullopt;
    };

    std::vector<bool> active(n_, false);
    for (int h : load.hosts) active[h] = true;
    for (int u : optional) active[u] = true;
    if (!solve_subset(active)) return;  // even every relay on cannot route it

    // Cost-ordered subset scan; the first feasible subset is the cheapest.
    struct Candidate {
      double cost;
      std::uint32_t bits;
    };
    std::vector<Candidate> order;
    order.reserve(std::size_t{1} << optional.size());
    for (std::uint32_t bits = 0; bits < (1u << optional.size()); ++bits) {
      double cost = 0.0;
      for (std::size_t k = 0; k < optional.size(); ++k)
        if (bits & (1u << k)) cost += sc_.nodes[optional[k]].activation_cost;
      order.push_back({cost, bits});
    }
    std::sort(order.begin(), order.end(), [](const Candidate& a, const Candidate& b) {
      if (a.cost != b.cost) return a.cost < b.cost;
      return a.bits < b.bits;
    });

    double host_cost = 0.0;
    for (int h : load.hosts) host_cost += sc_.nodes[h].activation_cost;

    for (const auto& cand : order) {
      const double objective = load.revenue - host_cost - cand.cost;
      if (objective <= best_objective_ + 1e-12) return;  // cannot improve
      std::fill(active.begin(), active.end(), false);
      for (int h : load.hosts) active[h] = true;
      for (std::size_t k = 0; k < optional.size(); ++k)
        if (cand.bits & (1u << k)) active[optional[k]] = true;
      auto flows = solve_subset(active);
      if (!flows) continue;

      best_objective_ = objective;
      best_ = assemble_values(load, active);
      for (int li = 0; li < links_.size(); ++li)
        if (fvar[li] >= 0 && (*flows)[fvar[li]] > 1e-9)
          best_.f[{links_.link(li).from, links_.link(li).to}] = (*flows)[fvar[li]];
      return;
    }
  }
};

/// Exhaustive optimum for tiny instances (refuses anything larger).
inline EnumerationResult enumerate_exact(const Scenario& sc, const RoutingMode& mode,
                                         std::uint64_t work_limit = std::uint64_t{1}
                                                                    << 24) {
  return ExactEnumerator(sc, mode, work_limit).run();
}

}  // namespace vsn
