#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "vsn/linear.hpp"
#include "vsn/scenario.hpp"

namespace vsn {

// ---------------------------------------------------------------------------
// Routing mode
// ---------------------------------------------------------------------------

enum class RoutingKind { Multipath, Singlepath, Static };

inline const char* to_string(RoutingKind k) {
  switch (k) {
    case RoutingKind::Multipath: return "multipath";
    case RoutingKind::Singlepath: return "singlepath";
    case RoutingKind::Static: return "static";
  }
  return "?";
}

inline RoutingKind routing_kind_from_string(const std::string& s) {
  if (s == "multipath") return RoutingKind::Multipath;
  if (s == "singlepath") return RoutingKind::Singlepath;
  if (s == "static") return RoutingKind::Static;
  throw std::invalid_argument("unknown routing mode: " + s);
}

struct RoutingMode {
  RoutingKind kind = RoutingKind::Multipath;
  std::optional<DodagRouting> dodag;  // present iff kind == Static

  static RoutingMode multipath() { return {RoutingKind::Multipath, std::nullopt}; }
  static RoutingMode singlepath() { return {RoutingKind::Singlepath, std::nullopt}; }
  static RoutingMode static_routing(DodagRouting d) {
    return {RoutingKind::Static, std::move(d)};
  }
  static RoutingMode static_routing(const Scenario& sc) {
    return static_routing(build_dodag(sc));
  }
  static RoutingMode for_kind(RoutingKind k, const Scenario& sc) {
    return k == RoutingKind::Static ? static_routing(sc) : RoutingMode{k, std::nullopt};
  }
};

namespace detail {
inline std::string tag1(const char* family, int a) {
  return std::string(family) + "[" + std::to_string(a) + "]";
}
inline std::string tag2(const char* family, int a, int b) {
  return std::string(family) + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Model construction
// ---------------------------------------------------------------------------

/// Translates the scenario into the allocation MILP for the chosen routing
/// mode: coverage and per-node budgets, flow conservation with delivery to
/// the sink set, big-M activation, per-link time-share rows under the
/// protocol interference model, and per-node lifetime (energy) rows.
/// Variables that are structurally zero (y outside coverage sets, flows on
/// non-viable links, off-tree flows under static routing) are not created.
inline MilpModel build_model(const Scenario& sc, const RoutingMode& mode) {
  sc.validate();
  if (mode.kind == RoutingKind::Static && !mode.dodag)
    throw std::invalid_argument("static routing mode requires a DODAG");

  using detail::tag1;
  using detail::tag2;
  MilpModel m;
  LinkTable links(sc);
  const double big_m = sc.big_m_bps;

  for (const auto& app : sc.applications)
    m.index.z[app.id] = m.add_variable(VarKind::Z, app.id, -1, -1, 0, 1, true);
  for (const auto& n : sc.nodes)
    m.index.x[n.id] = m.add_variable(VarKind::X, n.id, -1, -1, 0, 1, true);

  std::map<std::pair<int, int>, std::vector<int>> cover;  // (app,tp) -> nodes
  for (const auto& app : sc.applications) {
    for (const auto& tp : app.test_points) {
      m.index.h[{app.id, tp.id}] =
          m.add_variable(VarKind::H, app.id, tp.id, -1, 0, 1, true);
      auto covering = coverage_set(sc, app.id, tp.id);
      cover[{app.id, tp.id}] = covering;
      for (int node : covering)
        m.index.y[{node, app.id, tp.id}] =
            m.add_variable(VarKind::Y, node, app.id, tp.id, 0, 1, true);
    }
  }

  // Flow variables: every viable directed link, or only the DODAG edges
  // under static routing (everything else is structurally zero).
  auto add_flow = [&](int li) {
    const auto& l = links.link(li);
    m.index.f[{l.from, l.to}] =
        m.add_variable(VarKind::F, l.from, l.to, -1, 0, links.capacity(li), false);
  };
  if (mode.kind == RoutingKind::Static) {
    for (const auto& n : sc.nodes) {
      auto parent = mode.dodag->parent_of(n.id);
      if (parent) add_flow(links.index_of(n.id, *parent));
    }
  } else {
    for (int li = 0; li < links.size(); ++li) add_flow(li);
  }
  if (mode.kind == RoutingKind::Singlepath)
    for (int li = 0; li < links.size(); ++li) {
      const auto& l = links.link(li);
      m.index.g[{l.from, l.to}] =
          m.add_variable(VarKind::G, l.from, l.to, -1, 0, 1, true);
    }

  // Coverage: each covered test point is sensed by exactly one host, and an
  // application is deployed iff all of its test points are covered.
  for (const auto& app : sc.applications) {
    for (const auto& tp : app.test_points) {
      LinearConstraint c;
      for (int node : cover[{app.id, tp.id}])
        c.terms.emplace_back(m.index.y_at(node, app.id, tp.id), 1.0);
      c.terms.emplace_back(m.index.h.at({app.id, tp.id}), -1.0);
      c.sense = Sense::EQ;
      c.rhs = 0.0;
      c.tag = tag2("cover", app.id, tp.id);
      m.constraints.push_back(std::move(c));
    }
    LinearConstraint link;
    link.terms.emplace_back(m.index.z.at(app.id),
                            static_cast<double>(app.test_points.size()));
    for (const auto& tp : app.test_points)
      link.terms.emplace_back(m.index.h.at({app.id, tp.id}), -1.0);
    link.sense = Sense::EQ;
    link.rhs = 0.0;
    link.tag = tag1("app_cover", app.id);
    m.constraints.push_back(std::move(link));
  }

  // A node may sense at most per_node_cap test points of one application.
  for (const auto& n : sc.nodes) {
    for (const auto& app : sc.applications) {
      std::vector<int> vars;
      for (const auto& tp : app.test_points) {
        int v = m.index.y_at(n.id, app.id, tp.id);
        if (v >= 0) vars.push_back(v);
      }
      if (static_cast<int>(vars.size()) <= app.per_node_cap) continue;
      LinearConstraint c;
      for (int v : vars) c.terms.emplace_back(v, 1.0);
      c.sense = Sense::LE;
      c.rhs = app.per_node_cap;
      c.tag = tag2("per_node_cap", n.id, app.id);
      m.constraints.push_back(std::move(c));
    }
  }

  // Memory and processing budgets.
  for (const auto& n : sc.nodes) {
    LinearConstraint mem, cpu;
    for (const auto& app : sc.applications) {
      for (const auto& tp : app.test_points) {
        int v = m.index.y_at(n.id, app.id, tp.id);
        if (v < 0) continue;
        if (app.memory_bits > 0) mem.terms.emplace_back(v, app.memory_bits);
        if (app.mips > 0) cpu.terms.emplace_back(v, app.mips);
      }
    }
    if (!mem.terms.empty()) {
      mem.sense = Sense::LE;
      mem.rhs = sc.profile_of(n).memory_bits;
      mem.tag = tag1("memory", n.id);
      m.constraints.push_back(std::move(mem));
    }
    if (!cpu.terms.empty()) {
      cpu.sense = Sense::LE;
      cpu.rhs = sc.profile_of(n).mips;
      cpu.tag = tag1("cpu", n.id);
      m.constraints.push_back(std::move(cpu));
    }
  }

  // Flow conservation at non-sinks; aggregated delivery at the sink set.
  for (const auto& n : sc.nodes) {
    if (n.is_sink) continue;
    LinearConstraint c;
    for (const auto& [key, var] : m.index.f) {
      if (key.second == n.id) c.terms.emplace_back(var, 1.0);
      if (key.first == n.id) c.terms.emplace_back(var, -1.0);
    }
    for (const auto& app : sc.applications)
      for (const auto& tp : app.test_points) {
        int v = m.index.y_at(n.id, app.id, tp.id);
        if (v >= 0) c.terms.emplace_back(v, app.rate_bps);
      }
    if (c.terms.empty()) continue;
    c.sense = Sense::EQ;
    c.rhs = 0.0;
    c.tag = tag1("flow", n.id);
    m.constraints.push_back(std::move(c));
  }
  {
    LinearConstraint c;
    for (const auto& app : sc.applications)
      c.terms.emplace_back(m.index.z.at(app.id),
                           app.rate_bps * app.test_points.size());
    for (const auto& n : sc.nodes) {
      if (!n.is_sink) continue;
      for (const auto& [key, var] : m.index.f)
        if (key.second == n.id) c.terms.emplace_back(var, -1.0);
      for (const auto& app : sc.applications)
        for (const auto& tp : app.test_points) {
          int v = m.index.y_at(n.id, app.id, tp.id);
          if (v >= 0) c.terms.emplace_back(v, -app.rate_bps);
        }
    }
    c.sense = Sense::EQ;
    c.rhs = 0.0;
    c.tag = "delivery";
    m.constraints.push_back(std::move(c));
  }

  // Receiving data or sensing turns a node on.
  for (const auto& n : sc.nodes) {
    LinearConstraint c;
    for (const auto& [key, var] : m.index.f)
      if (key.second == n.id) c.terms.emplace_back(var, 1.0);
    for (const auto& app : sc.applications)
      for (const auto& tp : app.test_points) {
        int v = m.index.y_at(n.id, app.id, tp.id);
        if (v >= 0) c.terms.emplace_back(v, app.rate_bps);
      }
    if (c.terms.empty()) continue;
    c.terms.emplace_back(m.index.x.at(n.id), -big_m);
    c.sense = Sense::LE;
    c.rhs = 0.0;
    c.tag = tag1("activation", n.id);
    m.constraints.push_back(std::move(c));
  }

  // Single-path routing: at most one outgoing link carries flow.
  if (mode.kind == RoutingKind::Singlepath) {
    for (const auto& n : sc.nodes) {
      LinearConstraint c;
      for (const auto& [key, var] : m.index.g)
        if (key.first == n.id) c.terms.emplace_back(var, 1.0);
      if (c.terms.empty()) continue;
      c.sense = Sense::LE;
      c.rhs = 1.0;
      c.tag = tag1("route_choice", n.id);
      m.constraints.push_back(std::move(c));
    }
    for (const auto& [key, fvar] : m.index.f) {
      LinearConstraint c;
      c.terms.emplace_back(fvar, 1.0);
      c.terms.emplace_back(m.index.g.at(key), -big_m);
      c.sense = Sense::LE;
      c.rhs = 0.0;
      c.tag = tag2("route_bigm", key.first, key.second);
      m.constraints.push_back(std::move(c));
    }
  }

  // Per-link medium time share: the link plus everything it interferes with
  // may not exceed one full schedule.
  for (int li = 0; li < links.size(); ++li) {
    const auto& l = links.link(li);
    LinearConstraint c;
    int fvar = m.index.f_at(l.from, l.to);
    if (fvar >= 0) c.terms.emplace_back(fvar, 1.0 / links.capacity(li));
    for (const auto& other : interfering_links(sc, links, l.from, l.to)) {
      int v = m.index.f_at(other.from, other.to);
      if (v < 0) continue;
      c.terms.emplace_back(v,
                           1.0 / links.capacity(links.index_of(other.from, other.to)));
    }
    if (c.terms.empty()) continue;
    c.sense = Sense::LE;
    c.rhs = 1.0;
    c.tag = tag2("bandwidth", l.from, l.to);
    m.constraints.push_back(std::move(c));
  }

  // Lifetime: transmit + receive + processing power within the energy budget.
  const double gamma = sc.radio.path_loss_exponent;
  for (const auto& n : sc.nodes) {
    LinearConstraint c;
    for (const auto& [key, var] : m.index.f) {
      if (key.first == n.id) {
        const int li = links.index_of(key.first, key.second);
        c.terms.emplace_back(var, sc.radio.tx_energy_base +
                                      sc.radio.tx_energy_dist *
                                          std::pow(links.length(li), gamma));
      } else if (key.second == n.id) {
        c.terms.emplace_back(var, sc.radio.rx_energy);
      }
    }
    for (const auto& app : sc.applications) {
      if (app.cpu_watts <= 0) continue;
      for (const auto& tp : app.test_points) {
        int v = m.index.y_at(n.id, app.id, tp.id);
        if (v >= 0) c.terms.emplace_back(v, app.cpu_watts);
      }
    }
    if (c.terms.empty()) continue;
    c.sense = Sense::LE;
    c.rhs = sc.profile_of(n).energy_j / sc.lifetime_s;
    c.tag = tag1("energy", n.id);
    m.constraints.push_back(std::move(c));
  }

  // Revenue for deployed applications minus activation cost.
  for (const auto& app : sc.applications)
    m.objective.emplace_back(m.index.z.at(app.id), app.preference);
  for (const auto& n : sc.nodes)
    if (n.activation_cost != 0.0)
      m.objective.emplace_back(m.index.x.at(n.id), -n.activation_cost);

  return m;
}

// ---------------------------------------------------------------------------
// Solution values keyed by scenario entities
// ---------------------------------------------------------------------------

/// Variable assignment in scenario terms, independent of any model instance.
/// Missing entries read as zero (structurally-zero variables are never
/// stored).
struct SolutionValues {
  std::map<int, double> z, x;
  std::map<std::tuple<int, int, int>, double> y;
  std::map<std::pair<int, int>, double> h;
  std::map<std::pair<int, int>, double> f, g;

  double z_at(int app) const { return value(z, app); }
  double x_at(int node) const { return value(x, node); }
  double y_at(int node, int app, int tp) const {
    auto it = y.find({node, app, tp});
    return it == y.end() ? 0.0 : it->second;
  }
  double h_at(int app, int tp) const { return value(h, {app, tp}); }
  double f_at(int from, int to) const { return value(f, {from, to}); }
  double g_at(int from, int to) const { return value(g, {from, to}); }

 private:
  template <typename K>
  static double value(const std::map<K, double>& m, const K& k) {
    auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
  }
  static double value(const std::map<int, double>& m, int k) {
    auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
  }
};

inline SolutionValues extract_values(const MilpModel& model,
                                     const std::vector<double>& raw) {
  SolutionValues out;
  for (const auto& v : model.variables) {
    const double val = raw[v.index];
    switch (v.kind) {
      case VarKind::Z: out.z[v.sub0] = val; break;
      case VarKind::X: out.x[v.sub0] = val; break;
      case VarKind::Y: out.y[{v.sub0, v.sub1, v.sub2}] = val; break;
      case VarKind::H: out.h[{v.sub0, v.sub1}] = val; break;
      case VarKind::F: out.f[{v.sub0, v.sub1}] = val; break;
      case VarKind::G: out.g[{v.sub0, v.sub1}] = val; break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Independent validation straight from the scenario
// ---------------------------------------------------------------------------

struct Violation {
  std::string tag;
  double residual = 0.0;
};

/// Re-checks every constraint family directly against the scenario (not via
/// a MilpModel): binary integrality, coverage linkage, per-node caps and
/// budgets, flow conservation and delivery, activation, routing-mode
/// restrictions, per-link time shares and energy. Returns every violation
/// with the offending tag and residual.
inline std::vector<Violation> validate_solution(const Scenario& sc,
                                                const RoutingMode& mode,
                                                const SolutionValues& sol) {
  using detail::tag1;
  using detail::tag2;
  if (mode.kind == RoutingKind::Static && !mode.dodag)
    throw std::invalid_argument("static routing mode requires a DODAG");
  std::vector<Violation> out;
  const double tol = 1e-6;
  auto flag = [&](std::string tag, double residual) {
    out.push_back({std::move(tag), residual});
  };

  LinkTable links(sc);

  // Binary integrality (absolute tolerance).
  auto check_binary = [&](const std::string& name, double v) {
    const double dist = std::fabs(v - std::round(v));
    if (dist > tol || v < -tol || v > 1 + tol) flag("binary[" + name + "]", dist);
  };
  for (const auto& [app, v] : sol.z) check_binary("z:" + std::to_string(app), v);
  for (const auto& [node, v] : sol.x) check_binary("x:" + std::to_string(node), v);
  for (const auto& [key, v] : sol.h)
    check_binary("h:" + std::to_string(key.first) + "," + std::to_string(key.second), v);
  for (const auto& [key, v] : sol.y)
    check_binary("y:" + std::to_string(std::get<0>(key)) + "," +
                     std::to_string(std::get<1>(key)) + "," +
                     std::to_string(std::get<2>(key)),
                 v);
  if (mode.kind == RoutingKind::Singlepath)
    for (const auto& [key, v] : sol.g)
      check_binary("g:" + std::to_string(key.first) + "," + std::to_string(key.second),
                   v);

  // Coverage equations and support.
  for (const auto& app : sc.applications) {
    double h_sum = 0.0;
    for (const auto& tp : app.test_points) {
      auto covering = coverage_set(sc, app.id, tp.id);
      double y_sum = 0.0;
      for (int node : covering) y_sum += sol.y_at(node, app.id, tp.id);
      const double resid = y_sum - sol.h_at(app.id, tp.id);
      if (std::fabs(resid) > tol) flag(tag2("cover", app.id, tp.id), resid);
      h_sum += sol.h_at(app.id, tp.id);
    }
    const double link_resid =
        sol.z_at(app.id) * static_cast<double>(app.test_points.size()) - h_sum;
    if (std::fabs(link_resid) > tol * app.test_points.size())
      flag(tag1("app_cover", app.id), link_resid);

    // Semantic linkage: an active application covers every test point by
    // exactly one host; an inactive one holds no hosts at all.
    const bool active = sol.z_at(app.id) >= 0.5;
    for (const auto& tp : app.test_points) {
      double y_sum = 0.0;
      for (int node : coverage_set(sc, app.id, tp.id))
        y_sum += sol.y_at(node, app.id, tp.id);
      if (active && std::fabs(y_sum - 1.0) > tol) {
        flag(tag1("app_active", app.id), y_sum - 1.0);
        break;
      }
      if (!active && y_sum > tol) {
        flag(tag1("app_active", app.id), y_sum);
        break;
      }
    }
  }
  for (const auto& [key, v] : sol.y) {
    if (v <= tol) continue;
    auto [node, app, tp] = key;
    auto covering = coverage_set(sc, app, tp);
    if (std::find(covering.begin(), covering.end(), node) == covering.end())
      flag("y_support[" + std::to_string(node) + "," + std::to_string(app) + "," +
               std::to_string(tp) + "]",
           v);
  }

  // Per-node caps and budgets (relative tolerance on budgets).
  for (const auto& n : sc.nodes) {
    double mem = 0.0, cpu = 0.0;
    for (const auto& app : sc.applications) {
      double count = 0.0;
      for (const auto& tp : app.test_points) count += sol.y_at(n.id, app.id, tp.id);
      if (count > app.per_node_cap + tol)
        flag(tag2("per_node_cap", n.id, app.id), count - app.per_node_cap);
      mem += count * app.memory_bits;
      cpu += count * app.mips;
    }
    const auto& prof = sc.profile_of(n);
    if (mem > prof.memory_bits * (1 + tol))
      flag(tag1("memory", n.id), mem - prof.memory_bits);
    if (cpu > prof.mips * (1 + tol)) flag(tag1("cpu", n.id), cpu - prof.mips);
  }

  // Flows only on viable links; static mode additionally only towards the
  // DODAG parent.
  const double flow_tol = tol * sc.big_m_bps;
  for (const auto& [key, v] : sol.f) {
    if (std::fabs(v) <= flow_tol) continue;
    if (!links.contains(key.first, key.second)) {
      flag(tag2("link", key.first, key.second), v);
      continue;
    }
    if (mode.kind == RoutingKind::Static) {
      auto parent = mode.dodag->parent_of(key.first);
      if (!parent || *parent != key.second)
        flag(tag2("static_route", key.first, key.second), v);
    }
  }

  // Flow conservation and delivery.
  auto inflow = [&](int node) {
    double s = 0.0;
    for (const auto& [key, v] : sol.f)
      if (key.second == node) s += v;
    return s;
  };
  auto outflow = [&](int node) {
    double s = 0.0;
    for (const auto& [key, v] : sol.f)
      if (key.first == node) s += v;
    return s;
  };
  auto sensed = [&](int node) {
    double s = 0.0;
    for (const auto& app : sc.applications)
      for (const auto& tp : app.test_points)
        s += app.rate_bps * sol.y_at(node, app.id, tp.id);
    return s;
  };
  for (const auto& n : sc.nodes) {
    if (n.is_sink) continue;
    const double in = inflow(n.id), gen = sensed(n.id), out_f = outflow(n.id);
    const double resid = in - out_f + gen;
    if (std::fabs(resid) > tol * std::max(1.0, in + out_f + gen))
      flag(tag1("flow", n.id), resid);
  }
  {
    double generated = 0.0;
    for (const auto& app : sc.applications)
      generated += app.rate_bps * app.test_points.size() * sol.z_at(app.id);
    double delivered = 0.0;
    for (const auto& n : sc.nodes)
      if (n.is_sink) delivered += inflow(n.id) + sensed(n.id);
    const double resid = generated - delivered;
    if (std::fabs(resid) > tol * std::max(1.0, generated + delivered))
      flag("delivery", resid);
  }

  // Activation big-M.
  for (const auto& n : sc.nodes) {
    const double load = inflow(n.id) + sensed(n.id);
    if (load > sc.big_m_bps * (sol.x_at(n.id) + tol))
      flag(tag1("activation", n.id), load - sc.big_m_bps * sol.x_at(n.id));
  }

  // Single-path restrictions.
  if (mode.kind == RoutingKind::Singlepath) {
    std::map<int, double> out_choices;
    for (const auto& [key, v] : sol.g) {
      if (v <= tol) continue;
      if (!links.contains(key.first, key.second))
        flag(tag2("route_support", key.first, key.second), v);
      out_choices[key.first] += v;
    }
    for (const auto& [node, total] : out_choices)
      if (total > 1 + tol) flag(tag1("route_choice", node), total - 1);
    for (const auto& [key, v] : sol.f)
      if (v > sc.big_m_bps * (sol.g_at(key.first, key.second) + tol))
        flag(tag2("route_bigm", key.first, key.second), v);
  }

  // Medium time share per viable link including its interference set.
  for (int li = 0; li < links.size(); ++li) {
    const auto& l = links.link(li);
    double share = sol.f_at(l.from, l.to) / links.capacity(li);
    for (const auto& other : interfering_links(sc, links, l.from, l.to))
      share += sol.f_at(other.from, other.to) /
               links.capacity(links.index_of(other.from, other.to));
    if (share > 1 + tol) flag(tag2("bandwidth", l.from, l.to), share - 1);
  }

  // Lifetime.
  const double gamma = sc.radio.path_loss_exponent;
  for (const auto& n : sc.nodes) {
    double watts = 0.0;
    for (const auto& [key, v] : sol.f) {
      if (key.first == n.id && links.contains(key.first, key.second)) {
        const int li = links.index_of(key.first, key.second);
        watts += v * (sc.radio.tx_energy_base +
                      sc.radio.tx_energy_dist * std::pow(links.length(li), gamma));
      } else if (key.second == n.id) {
        watts += v * sc.radio.rx_energy;
      }
    }
    for (const auto& app : sc.applications)
      for (const auto& tp : app.test_points)
        watts += app.cpu_watts * sol.y_at(n.id, app.id, tp.id);
    const double budget = sc.profile_of(n).energy_j / sc.lifetime_s;
    if (watts > budget * (1 + tol)) flag(tag1("energy", n.id), watts - budget);
  }

  return out;
}

// ---------------------------------------------------------------------------
// Solution metrics
// ---------------------------------------------------------------------------

struct SolutionMetrics {
  double objective = 0.0;
  std::map<AppKind, int> active_apps;        // per kind, z >= 0.5
  std::map<std::string, int> active_nodes;   // per profile name, x >= 0.5
  int active_apps_total = 0;
  int active_nodes_total = 0;
  double delivered_bps = 0.0;  // sink inflow plus sink-local sensing
};

inline SolutionMetrics metrics(const Scenario& sc, const SolutionValues& sol) {
  SolutionMetrics mt;
  for (AppKind k : {AppKind::Temperature, AppKind::Light, AppKind::Cta,
                    AppKind::Atc, AppKind::Custom})
    mt.active_apps[k] = 0;
  for (const auto& p : sc.profiles) mt.active_nodes[p.name] = 0;

  for (const auto& app : sc.applications) {
    mt.objective += app.preference * sol.z_at(app.id);
    if (sol.z_at(app.id) >= 0.5) {
      ++mt.active_apps[app.kind];
      ++mt.active_apps_total;
    }
  }
  for (const auto& n : sc.nodes) {
    mt.objective -= n.activation_cost * sol.x_at(n.id);
    if (sol.x_at(n.id) >= 0.5) {
      ++mt.active_nodes[sc.profile_of(n).name];
      ++mt.active_nodes_total;
    }
  }
  for (const auto& n : sc.nodes) {
    if (!n.is_sink) continue;
    for (const auto& [key, v] : sol.f)
      if (key.second == n.id) mt.delivered_bps += v;
    for (const auto& app : sc.applications)
      for (const auto& tp : app.test_points)
        mt.delivered_bps += app.rate_bps * sol.y_at(n.id, app.id, tp.id);
  }
  return mt;
}

}  // namespace vsn
