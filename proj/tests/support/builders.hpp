#pragma once

// Shared helpers for building small hand-laid scenarios in tests.

#include <vector>

#include "vsn/scenario.hpp"

namespace testutil {

inline constexpr int kScalar = 0;
inline constexpr int kMultimedia = 1;

struct NodeSpec {
  int id;
  vsn::Point2D pos;
  int profile;
  bool sink;
};

/// Scenario with the two reference profiles, default radio, the given nodes,
/// no applications, a 200x200 area (grown to fit the nodes) and paper-style
/// activation cost.
inline vsn::Scenario two_profile_scenario(const std::vector<NodeSpec>& nodes) {
  vsn::Scenario sc;
  sc.profiles = {vsn::telosb_profile(), vsn::beaglebone_profile()};
  sc.big_m_bps = 2.5e6;
  for (const auto& spec : nodes) {
    vsn::SensorNode n;
    n.id = spec.id;
    n.position = spec.pos;
    n.profile = spec.profile;
    n.is_sink = spec.sink;
    n.sensing_range_m = 30.0;
    n.activation_cost = 0.01;
    sc.nodes.push_back(n);
    sc.area_width_m = std::max(sc.area_width_m, spec.pos.x);
    sc.area_height_m = std::max(sc.area_height_m, spec.pos.y);
  }
  sc.validate();
  return sc;
}

/// Generation parameters for quick randomized property tests.
inline vsn::GenParams small_params() {
  vsn::GenParams gp;
  gp.n_scalar = 6;
  gp.n_multimedia = 6;
  gp.apps_per_kind = 1;
  gp.scalar_test_points = 3;
  gp.visual_test_points = 2;
  gp.area_width_m = 150.0;
  gp.area_height_m = 150.0;
  return gp;
}

/// The single-node single-app fixture: one sink covering one temperature
/// test point. Exact optimum is q - delta = 0.99.
inline vsn::Scenario one_node_fixture() {
  vsn::Scenario sc;
  sc.profiles = {vsn::telosb_profile()};
  sc.big_m_bps = 2.5e6;
  sc.area_width_m = sc.area_height_m = 100.0;
  vsn::SensorNode n;
  n.id = 0;
  n.position = {50.0, 50.0};
  n.profile = 0;
  n.is_sink = true;
  n.sensing_range_m = 30.0;
  n.activation_cost = 0.01;
  sc.nodes.push_back(n);
  vsn::ApplicationSpec app = vsn::default_app(vsn::AppKind::Temperature);
  app.id = 0;
  app.test_points = {{0, {60.0, 50.0}}};
  sc.applications.push_back(app);
  sc.validate();
  return sc;
}

}  // namespace testutil
