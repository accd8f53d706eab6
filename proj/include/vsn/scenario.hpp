#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "vsn/rng.hpp"

namespace vsn {

// ---------------------------------------------------------------------------
// World description: nodes, applications, test points, radio, routing trees.
// Everything here is immutable after construction and safe to share across
// threads; derived structures (coverage sets, link tables, DODAGs) are plain
// values computed from a const Scenario.
// ---------------------------------------------------------------------------

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point2D& a, const Point2D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

/// Hardware resource vector of a node class: bandwidth C [bit/s], memory
/// M [bit], processing L [MIPS], energy store E [J].
struct NodeProfile {
  std::string name;
  double bandwidth_bps = 0.0;
  double memory_bits = 0.0;
  double mips = 0.0;
  double energy_j = 0.0;
};

struct SensorNode {
  int id = 0;
  Point2D position;
  int profile = 0;  // index into Scenario::profiles
  bool is_sink = false;
  double sensing_range_m = 30.0;
  double activation_cost = 0.0;  // revenue units charged when the node is on
};

enum class AppKind { Temperature, Light, Cta, Atc, Custom };

inline const char* to_string(AppKind k) {
  switch (k) {
    case AppKind::Temperature: return "temperature";
    case AppKind::Light: return "light";
    case AppKind::Cta: return "cta";
    case AppKind::Atc: return "atc";
    case AppKind::Custom: return "custom";
  }
  return "?";
}

inline AppKind app_kind_from_string(const std::string& s) {
  if (s == "temperature") return AppKind::Temperature;
  if (s == "light") return AppKind::Light;
  if (s == "cta") return AppKind::Cta;
  if (s == "atc") return AppKind::Atc;
  if (s == "custom") return AppKind::Custom;
  throw std::invalid_argument("unknown application kind: " + s);
}

struct TestPoint {
  int id = 0;
  Point2D position;
};

/// One application request: per-test-point source rate c [bit/s], per-host
/// memory m [bit] and processing l [MIPS], per-host processing power draw
/// [W], provider revenue q, and the test points it must cover.
struct ApplicationSpec {
  int id = 0;
  AppKind kind = AppKind::Custom;
  double rate_bps = 0.0;
  double memory_bits = 0.0;
  double mips = 0.0;
  double cpu_watts = 0.0;
  double preference = 1.0;
  std::vector<int> allowed_profiles;  // profile indices; empty = any profile
  int per_node_cap = 1;               // max test points of this app per node
  std::vector<TestPoint> test_points;

  bool profile_allowed(int profile_index) const {
    if (allowed_profiles.empty()) return true;
    return std::find(allowed_profiles.begin(), allowed_profiles.end(),
                     profile_index) != allowed_profiles.end();
  }
};

/// Protocol interference model with power control. Thresholds are stored in
/// mW (dBm converted once at ingestion); energy coefficients in J/bit.
struct RadioParams {
  double p_max_mw = 1.0;                    // 0 dBm
  double rx_threshold_mw = 6.30957344480193e-10;            // -92 dBm
  double interference_threshold_mw = 3.9810717055349695e-11;  // -104 dBm
  double path_loss_exponent = 4.0;
  double antenna_gain = 8.1e-3;
  double tx_energy_base = 50e-9;   // J/bit
  double tx_energy_dist = 1.3e-15;  // J/bit/m^gamma
  double rx_energy = 50e-9;        // J/bit
};

/// Maximum distance at which a transmission at power p [mW] is decodable:
/// received power p * g0 * d^(-gamma) >= alpha.
inline double tx_range(double p_mw, const RadioParams& radio) {
  if (!(p_mw > 0.0)) throw std::domain_error("tx_range: power must be > 0");
  return std::pow(p_mw * radio.antenna_gain / radio.rx_threshold_mw,
                  1.0 / radio.path_loss_exponent);
}

/// Maximum distance at which a transmission at power p [mW] still produces
/// non-negligible interference (received power >= beta).
inline double interference_range(double p_mw, const RadioParams& radio) {
  if (!(p_mw > 0.0))
    throw std::domain_error("interference_range: power must be > 0");
  return std::pow(p_mw * radio.antenna_gain / radio.interference_threshold_mw,
                  1.0 / radio.path_loss_exponent);
}

struct Scenario {
  double area_width_m = 200.0;
  double area_height_m = 200.0;
  std::vector<NodeProfile> profiles;
  std::vector<SensorNode> nodes;
  std::vector<ApplicationSpec> applications;
  RadioParams radio;
  double lifetime_s = 86400.0;
  double big_m_bps = 0.0;  // activation big-M, must exceed every C_i

  int node_index(int node_id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].id == node_id) return static_cast<int>(i);
    throw std::out_of_range("unknown node id " + std::to_string(node_id));
  }

  int app_index(int app_id) const {
    for (std::size_t i = 0; i < applications.size(); ++i)
      if (applications[i].id == app_id) return static_cast<int>(i);
    throw std::out_of_range("unknown application id " + std::to_string(app_id));
  }

  const SensorNode& node(int node_id) const { return nodes[node_index(node_id)]; }
  const ApplicationSpec& application(int app_id) const {
    return applications[app_index(app_id)];
  }

  const NodeProfile& profile_of(const SensorNode& n) const {
    return profiles[n.profile];
  }

  std::vector<int> sink_ids() const {
    std::vector<int> s;
    for (const auto& n : nodes)
      if (n.is_sink) s.push_back(n.id);
    return s;
  }

  double max_node_bandwidth() const {
    double m = 0.0;
    for (const auto& n : nodes) m = std::max(m, profile_of(n).bandwidth_bps);
    return m;
  }

  /// Structural sanity; throws std::invalid_argument naming the first
  /// violated rule.
  void validate() const;
};

inline void Scenario::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(area_width_m > 0.0) || !(area_height_m > 0.0)) fail("area must be positive");
  if (!(lifetime_s > 0.0)) fail("lifetime must be positive");
  if (profiles.empty()) fail("at least one node profile required");
  for (const auto& p : profiles) {
    if (!(p.bandwidth_bps > 0 && p.memory_bits > 0 && p.mips > 0 && p.energy_j > 0))
      fail("profile '" + p.name + "' must have positive resources");
  }
  const auto& r = radio;
  if (!(r.p_max_mw > 0 && r.rx_threshold_mw > 0 && r.interference_threshold_mw > 0 &&
        r.path_loss_exponent > 0 && r.antenna_gain > 0 && r.tx_energy_base > 0 &&
        r.tx_energy_dist > 0 && r.rx_energy > 0))
    fail("radio parameters must be positive");
  if (!(r.interference_threshold_mw < r.rx_threshold_mw))
    fail("interference threshold must be below the decode threshold");

  std::set<int> node_ids;
  bool any_sink = false;
  for (const auto& n : nodes) {
    if (!node_ids.insert(n.id).second)
      fail("duplicate node id " + std::to_string(n.id));
    if (n.profile < 0 || n.profile >= static_cast<int>(profiles.size()))
      fail("node " + std::to_string(n.id) + " references an unknown profile");
    if (!(n.sensing_range_m > 0)) fail("sensing range must be positive");
    if (n.activation_cost < 0) fail("activation cost must be >= 0");
    if (n.position.x < 0 || n.position.x > area_width_m || n.position.y < 0 ||
        n.position.y > area_height_m)
      fail("node " + std::to_string(n.id) + " lies outside the area");
    any_sink |= n.is_sink;
  }
  if (!nodes.empty() && !any_sink) fail("at least one sink node required");
  if (!(big_m_bps > max_node_bandwidth()))
    fail("big-M must exceed the maximum node bandwidth");

  std::set<int> app_ids;
  for (const auto& a : applications) {
    if (!app_ids.insert(a.id).second)
      fail("duplicate application id " + std::to_string(a.id));
    if (!(a.rate_bps > 0)) fail("application rate must be positive");
    if (a.memory_bits < 0 || a.mips < 0 || a.cpu_watts < 0)
      fail("application demands must be >= 0");
    if (!(a.preference > 0)) fail("application preference must be positive");
    if (a.test_points.empty()) fail("application needs at least one test point");
    if (a.per_node_cap < 1) fail("per-node test point cap must be >= 1");
    for (int pi : a.allowed_profiles)
      if (pi < 0 || pi >= static_cast<int>(profiles.size()))
        fail("application " + std::to_string(a.id) + " references an unknown profile");
    std::set<int> tp_ids;
    for (const auto& tp : a.test_points) {
      if (!tp_ids.insert(tp.id).second)
        fail("duplicate test point id in application " + std::to_string(a.id));
      if (tp.position.x < 0 || tp.position.x > area_width_m ||
          tp.position.y < 0 || tp.position.y > area_height_m)
        fail("test point outside the area in application " + std::to_string(a.id));
    }
  }
}

// ---------------------------------------------------------------------------
// Coverage
// ---------------------------------------------------------------------------

/// Nodes that physically cover test point k of application j: within sensing
/// range (boundary inclusive) and of a profile the application may run on.
inline std::vector<int> coverage_set(const Scenario& sc, int app_id, int tp_id) {
  const auto& app = sc.application(app_id);
  const TestPoint* tp = nullptr;
  for (const auto& t : app.test_points)
    if (t.id == tp_id) tp = &t;
  if (!tp)
    throw std::out_of_range("application " + std::to_string(app_id) +
                            " has no test point " + std::to_string(tp_id));
  std::vector<int> covering;
  for (const auto& n : sc.nodes) {
    if (!app.profile_allowed(n.profile)) continue;
    if (distance(n.position, tp->position) <= n.sensing_range_m)
      covering.push_back(n.id);
  }
  return covering;
}

// ---------------------------------------------------------------------------
// Links and interference
// ---------------------------------------------------------------------------

inline bool link_viable(const Scenario& sc, int node_i, int node_h) {
  if (node_i == node_h) throw std::domain_error("link_viable: i == h");
  const auto& a = sc.node(node_i);
  const auto& b = sc.node(node_h);
  return distance(a.position, b.position) <= tx_range(sc.radio.p_max_mw, sc.radio);
}

/// Capacity of a directed link, limited by the slower endpoint.
inline double link_capacity(const Scenario& sc, int node_i, int node_h) {
  if (!link_viable(sc, node_i, node_h))
    throw std::domain_error("link_capacity: link is not viable");
  return std::min(sc.profile_of(sc.node(node_i)).bandwidth_bps,
                  sc.profile_of(sc.node(node_h)).bandwidth_bps);
}

struct DirectedLink {
  int from = 0;
  int to = 0;
  friend bool operator==(const DirectedLink&, const DirectedLink&) = default;
  friend auto operator<=>(const DirectedLink&, const DirectedLink&) = default;
};

/// Every viable directed link of the scenario, with capacities, distances and
/// per-link interference sets, computed once and shared by the model builder,
/// the validator and the oracles.
class LinkTable {
 public:
  explicit LinkTable(const Scenario& sc) {
    const double reach = tx_range(sc.radio.p_max_mw, sc.radio);
    for (const auto& a : sc.nodes) {
      for (const auto& b : sc.nodes) {
        if (a.id == b.id) continue;
        if (distance(a.position, b.position) <= reach) {
          links_.push_back({a.id, b.id});
          capacity_.push_back(std::min(sc.profile_of(a).bandwidth_bps,
                                       sc.profile_of(b).bandwidth_bps));
          length_.push_back(distance(a.position, b.position));
        }
      }
    }
    for (std::size_t i = 0; i < links_.size(); ++i)
      index_[links_[i]] = static_cast<int>(i);
  }

  const std::vector<DirectedLink>& links() const { return links_; }
  int size() const { return static_cast<int>(links_.size()); }
  double capacity(int link) const { return capacity_[link]; }
  double length(int link) const { return length_[link]; }
  const DirectedLink& link(int idx) const { return links_[idx]; }

  bool contains(int from, int to) const {
    return index_.count(DirectedLink{from, to}) > 0;
  }
  int index_of(int from, int to) const {
    auto it = index_.find(DirectedLink{from, to});
    if (it == index_.end()) throw std::domain_error("link is not viable");
    return it->second;
  }

 private:
  std::vector<DirectedLink> links_;
  std::vector<double> capacity_;
  std::vector<double> length_;
  std::map<DirectedLink, int> index_;
};

/// The links that cannot be active at the same time as (i,h) under the
/// protocol interference model. Union semantics: a link matching several
/// clauses appears once; (i,h) itself is excluded.
inline std::vector<DirectedLink> interfering_links(const Scenario& sc,
                                                   const LinkTable& table,
                                                   int node_i, int node_h) {
  if (!table.contains(node_i, node_h))
    throw std::domain_error("interfering_links: link is not viable");
  const double r_int = interference_range(sc.radio.p_max_mw, sc.radio);
  const Point2D pos_i = sc.node(node_i).position;
  const Point2D pos_h = sc.node(node_h).position;

  std::vector<DirectedLink> out;
  for (const auto& l : table.links()) {
    if (l.from == node_i && l.to == node_h) continue;
    const bool half_duplex_i = l.from == node_i || l.to == node_i;
    const bool half_duplex_h = l.from == node_h || l.to == node_h;
    const bool rx_near_tx = distance(pos_i, sc.node(l.to).position) < r_int;
    const bool tx_near_rx = distance(sc.node(l.from).position, pos_h) < r_int;
    if (half_duplex_i || half_duplex_h || rx_near_tx || tx_near_rx)
      out.push_back(l);
  }
  return out;
}

inline std::vector<DirectedLink> interfering_links(const Scenario& sc,
                                                   int node_i, int node_h) {
  return interfering_links(sc, LinkTable(sc), node_i, node_h);
}

// ---------------------------------------------------------------------------
// Static routing: min-hop DODAG towards the sink set
// ---------------------------------------------------------------------------

struct DodagRouting {
  std::map<int, int> parent;     // node id -> parent id (absent for sinks)
  std::map<int, int> hop_count;  // node id -> hops to its sink (sinks: 0)
  std::vector<int> unreachable;  // non-sink nodes with no viable path to a sink

  bool reachable(int node_id) const { return hop_count.count(node_id) > 0; }
  std::optional<int> parent_of(int node_id) const {
    auto it = parent.find(node_id);
    if (it == parent.end()) return std::nullopt;
    return it->second;
  }
};

/// Breadth-first hop counts from the sink set over viable links; each node's
/// parent is its minimum-hop neighbor towards a sink, ties broken by lowest
/// node id.
inline DodagRouting build_dodag(const Scenario& sc) {
  DodagRouting out;
  LinkTable table(sc);

  // Sorted adjacency so that tie-breaks are by node id.
  std::map<int, std::vector<int>> neighbors;
  for (const auto& l : table.links()) neighbors[l.from].push_back(l.to);
  for (auto& [id, nb] : neighbors) std::sort(nb.begin(), nb.end());

  std::deque<int> frontier;
  std::vector<int> sinks = sc.sink_ids();
  std::sort(sinks.begin(), sinks.end());
  for (int s : sinks) {
    out.hop_count[s] = 0;
    frontier.push_back(s);
  }
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop_front();
    for (int v : neighbors[u]) {
      if (out.hop_count.count(v)) continue;
      out.hop_count[v] = out.hop_count[u] + 1;
      out.parent[v] = u;  // first offer wins: BFS order + sorted ids
      frontier.push_back(v);
    }
  }
  for (const auto& n : sc.nodes)
    if (!n.is_sink && !out.hop_count.count(n.id)) out.unreachable.push_back(n.id);
  std::sort(out.unreachable.begin(), out.unreachable.end());
  return out;
}

// ---------------------------------------------------------------------------
// Visual-application processing energy
// ---------------------------------------------------------------------------

namespace cpu_model {
inline constexpr double power_w = 2.1;          // visual node processor draw
inline constexpr double detector_init_s = 0.049152;  // 1.6e-4 ms/px * 640*480
inline constexpr double feature_detect_s = 0.31e-3;
inline constexpr double feature_describe_s = 0.16e-3;
inline constexpr double mote_mips = 720.0;

/// Tabulated compress-then-analyze image processing time per query rate.
inline double cta_cpu_time_s(double rate_bits_per_query) {
  if (!(rate_bits_per_query > 0))
    throw std::domain_error("cta_cpu_time_s: rate must be > 0");
  if (std::abs(rate_bits_per_query - 20000.0) < 1e-6) return 24.5e-3;
  throw std::domain_error("cta_cpu_time_s: no tabulated time for rate " +
                          std::to_string(rate_bits_per_query));
}
}  // namespace cpu_model

/// Joules to process one image under compress-then-analyze at the given
/// query rate [bit/query].
inline double cpu_energy_cta(double rate_bits_per_query) {
  return cpu_model::power_w * cpu_model::cta_cpu_time_s(rate_bits_per_query);
}

/// Joules to process one image under analyze-then-compress: detector
/// initialization plus detection+description of `features` keypoints.
inline double cpu_energy_atc(double rate_bits_per_query, int features) {
  if (!(rate_bits_per_query > 0))
    throw std::domain_error("cpu_energy_atc: rate must be > 0");
  if (features < 0) throw std::domain_error("cpu_energy_atc: features must be >= 0");
  return cpu_model::power_w *
         (cpu_model::detector_init_s +
          features * (cpu_model::feature_detect_s + cpu_model::feature_describe_s));
}

// ---------------------------------------------------------------------------
// Randomized instance generation
// ---------------------------------------------------------------------------

inline NodeProfile telosb_profile() {
  return {"TelosB", 250e3, 7.0 * 1024 * 8, 8.0, 32400.0};
}

inline NodeProfile beaglebone_profile() {
  return {"BeagleBone", 250e3, 256.0 * 1024 * 1024 * 8, 720.0, 32400.0};
}

/// Default per-kind application vectors (rate, memory, MIPS, power, revenue).
inline ApplicationSpec default_app(AppKind kind) {
  ApplicationSpec a;
  a.kind = kind;
  switch (kind) {
    case AppKind::Temperature:
      a.rate_bps = 500.0;
      a.memory_bits = 4462.0 * 8;
      a.preference = 1.0;
      break;
    case AppKind::Light:
      a.rate_bps = 1000.0;
      a.memory_bits = 1006.0 * 8;
      a.preference = 1.0;
      break;
    case AppKind::Cta:
      a.rate_bps = 20e3;
      a.memory_bits = 1.0 * 1024 * 1024 * 8;
      a.mips = 17.64;
      a.cpu_watts = 0.05;
      a.preference = 12.0;
      break;
    case AppKind::Atc:
      a.rate_bps = 12e3;
      a.memory_bits = 1.0 * 1024 * 1024 * 8;
      a.mips = 69.23;
      a.cpu_watts = 0.2;
      a.preference = 8.0;
      break;
    case AppKind::Custom:
      break;
  }
  return a;
}

struct GenParams {
  int n_scalar = 36;
  int n_multimedia = 36;
  int n_sinks_scalar = 1;
  int n_sinks_mm = 1;
  int apps_per_kind = 1;
  int scalar_test_points = 5;
  int visual_test_points = 3;
  double area_width_m = 200.0;
  double area_height_m = 200.0;
  double p_max_dbm = 0.0;
  double lifetime_s = 86400.0;
  double sensing_range_m = 30.0;
  double activation_cost = 0.01;
  int per_node_cap = 1;
};

/// Deterministic world generator: node and test-point positions uniform in
/// the area, sinks drawn from a seeded permutation of each node class (so a
/// larger sink count yields a superset of the smaller one's sinks).
inline Scenario random_scenario(std::uint64_t seed, const GenParams& gp = {}) {
  if (gp.n_scalar < 0 || gp.n_multimedia < 0 || gp.apps_per_kind < 0)
    throw std::invalid_argument("random_scenario: counts must be >= 0");
  if (gp.n_sinks_scalar > gp.n_scalar || gp.n_sinks_mm > gp.n_multimedia)
    throw std::invalid_argument("random_scenario: more sinks than nodes of that class");
  if (gp.n_sinks_scalar + gp.n_sinks_mm < 1)
    throw std::invalid_argument("random_scenario: at least one sink required");

  Rng rng(seed);
  Scenario sc;
  sc.area_width_m = gp.area_width_m;
  sc.area_height_m = gp.area_height_m;
  sc.lifetime_s = gp.lifetime_s;
  sc.profiles = {telosb_profile(), beaglebone_profile()};
  sc.radio.p_max_mw = dbm_to_mw(gp.p_max_dbm);
  sc.big_m_bps = 10.0 * std::max(sc.profiles[0].bandwidth_bps,
                                 sc.profiles[1].bandwidth_bps);

  auto place_nodes = [&](int count, int profile) {
    for (int i = 0; i < count; ++i) {
      SensorNode n;
      n.id = static_cast<int>(sc.nodes.size());
      n.position = {rng.uniform(0.0, gp.area_width_m),
                    rng.uniform(0.0, gp.area_height_m)};
      n.profile = profile;
      n.sensing_range_m = gp.sensing_range_m;
      n.activation_cost = gp.activation_cost;
      sc.nodes.push_back(n);
    }
  };
  place_nodes(gp.n_scalar, 0);
  place_nodes(gp.n_multimedia, 1);

  auto pick_sinks = [&](int first, int count, int n_sinks) {
    std::vector<int> perm = rng.permutation(count);
    for (int s = 0; s < n_sinks; ++s) sc.nodes[first + perm[s]].is_sink = true;
  };
  pick_sinks(0, gp.n_scalar, gp.n_sinks_scalar);
  pick_sinks(gp.n_scalar, gp.n_multimedia, gp.n_sinks_mm);

  const AppKind kinds[] = {AppKind::Temperature, AppKind::Light, AppKind::Cta,
                           AppKind::Atc};
  int app_id = 0;
  for (AppKind kind : kinds) {
    const bool visual = kind == AppKind::Cta || kind == AppKind::Atc;
    for (int rep = 0; rep < gp.apps_per_kind; ++rep) {
      ApplicationSpec a = default_app(kind);
      a.id = app_id++;
      a.per_node_cap = gp.per_node_cap;
      if (visual) a.allowed_profiles = {1};  // multimedia motes only
      const int n_tp = visual ? gp.visual_test_points : gp.scalar_test_points;
      for (int t = 0; t < n_tp; ++t)
        a.test_points.push_back({t, {rng.uniform(0.0, gp.area_width_m),
                                     rng.uniform(0.0, gp.area_height_m)}});
      sc.applications.push_back(std::move(a));
    }
  }
  sc.validate();
  return sc;
}

}  // namespace vsn
