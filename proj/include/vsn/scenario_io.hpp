#pragma once

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "vsn/scenario.hpp"

namespace vsn {

using json = nlohmann::json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void expect_keys(const json& obj, const std::string& where,
                        const std::set<std::string>& allowed,
                        const std::set<std::string>& required) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw ParseError(where + ": unknown key '" + key + "'");
  for (const auto& key : required)
    if (!obj.contains(key))
      throw ParseError(where + ": missing key '" + key + "'");
}

inline double num(const json& obj, const std::string& where, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline int integer(const json& obj, const std::string& where, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer())
    throw ParseError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

}  // namespace detail

inline json scenario_to_json(const Scenario& sc) {
  json j;
  j["area"] = {{"width_m", sc.area_width_m}, {"height_m", sc.area_height_m}};
  j["lifetime_s"] = sc.lifetime_s;
  j["big_m_bps"] = sc.big_m_bps;
  j["radio"] = {{"p_max_mw", sc.radio.p_max_mw},
                {"rx_threshold_mw", sc.radio.rx_threshold_mw},
                {"interference_threshold_mw", sc.radio.interference_threshold_mw},
                {"path_loss_exponent", sc.radio.path_loss_exponent},
                {"antenna_gain", sc.radio.antenna_gain},
                {"tx_energy_base_j_per_bit", sc.radio.tx_energy_base},
                {"tx_energy_dist_j_per_bit_mgamma", sc.radio.tx_energy_dist},
                {"rx_energy_j_per_bit", sc.radio.rx_energy}};
  j["profiles"] = json::object();
  for (const auto& p : sc.profiles)
    j["profiles"][p.name] = {{"bandwidth_bps", p.bandwidth_bps},
                             {"memory_bits", p.memory_bits},
                             {"mips", p.mips},
                             {"energy_j", p.energy_j}};
  j["nodes"] = json::array();
  for (const auto& n : sc.nodes)
    j["nodes"].push_back({{"id", n.id},
                          {"x", n.position.x},
                          {"y", n.position.y},
                          {"profile", sc.profiles[n.profile].name},
                          {"is_sink", n.is_sink},
                          {"sensing_range_m", n.sensing_range_m},
                          {"activation_cost", n.activation_cost}});
  j["applications"] = json::array();
  for (const auto& a : sc.applications) {
    json app = {{"id", a.id},
                {"kind", to_string(a.kind)},
                {"rate_bps", a.rate_bps},
                {"memory_bits", a.memory_bits},
                {"mips", a.mips},
                {"cpu_watts", a.cpu_watts},
                {"preference", a.preference},
                {"per_node_cap", a.per_node_cap}};
    app["allowed_profiles"] = json::array();
    for (int pi : a.allowed_profiles)
      app["allowed_profiles"].push_back(sc.profiles[pi].name);
    app["test_points"] = json::array();
    for (const auto& tp : a.test_points)
      app["test_points"].push_back(
          {{"id", tp.id}, {"x", tp.position.x}, {"y", tp.position.y}});
    j["applications"].push_back(std::move(app));
  }
  return j;
}

inline Scenario scenario_from_json(const json& j) {
  using detail::expect_keys;
  using detail::integer;
  using detail::num;

  expect_keys(j, "scenario",
              {"area", "radio", "lifetime_s", "big_m_bps", "nodes", "profiles",
               "applications"},
              {"area", "radio", "lifetime_s", "big_m_bps", "nodes", "profiles",
               "applications"});
  Scenario sc;
  expect_keys(j.at("area"), "area", {"width_m", "height_m"}, {"width_m", "height_m"});
  sc.area_width_m = num(j.at("area"), "area", "width_m");
  sc.area_height_m = num(j.at("area"), "area", "height_m");
  sc.lifetime_s = num(j, "scenario", "lifetime_s");
  sc.big_m_bps = num(j, "scenario", "big_m_bps");

  const auto& jr = j.at("radio");
  expect_keys(jr, "radio",
              {"p_max_mw", "rx_threshold_mw", "interference_threshold_mw",
               "path_loss_exponent", "antenna_gain", "tx_energy_base_j_per_bit",
               "tx_energy_dist_j_per_bit_mgamma", "rx_energy_j_per_bit"},
              {"p_max_mw", "rx_threshold_mw", "interference_threshold_mw",
               "path_loss_exponent", "antenna_gain", "tx_energy_base_j_per_bit",
               "tx_energy_dist_j_per_bit_mgamma", "rx_energy_j_per_bit"});
  sc.radio.p_max_mw = num(jr, "radio", "p_max_mw");
  sc.radio.rx_threshold_mw = num(jr, "radio", "rx_threshold_mw");
  sc.radio.interference_threshold_mw = num(jr, "radio", "interference_threshold_mw");
  sc.radio.path_loss_exponent = num(jr, "radio", "path_loss_exponent");
  sc.radio.antenna_gain = num(jr, "radio", "antenna_gain");
  sc.radio.tx_energy_base = num(jr, "radio", "tx_energy_base_j_per_bit");
  sc.radio.tx_energy_dist = num(jr, "radio", "tx_energy_dist_j_per_bit_mgamma");
  sc.radio.rx_energy = num(jr, "radio", "rx_energy_j_per_bit");

  std::map<std::string, int> profile_index;
  if (!j.at("profiles").is_object())
    throw ParseError("profiles: expected an object keyed by profile name");
  for (const auto& [name, jp] : j.at("profiles").items()) {
    expect_keys(jp, "profiles." + name,
                {"bandwidth_bps", "memory_bits", "mips", "energy_j"},
                {"bandwidth_bps", "memory_bits", "mips", "energy_j"});
    NodeProfile p;
    p.name = name;
    p.bandwidth_bps = num(jp, name, "bandwidth_bps");
    p.memory_bits = num(jp, name, "memory_bits");
    p.mips = num(jp, name, "mips");
    p.energy_j = num(jp, name, "energy_j");
    profile_index[name] = static_cast<int>(sc.profiles.size());
    sc.profiles.push_back(std::move(p));
  }
  auto lookup_profile = [&](const std::string& name, const std::string& where) {
    auto it = profile_index.find(name);
    if (it == profile_index.end())
      throw ParseError(where + ": unknown profile '" + name + "'");
    return it->second;
  };

  if (!j.at("nodes").is_array()) throw ParseError("nodes: expected an array");
  for (const auto& jn : j.at("nodes")) {
    const std::string where = "nodes[" + std::to_string(sc.nodes.size()) + "]";
    expect_keys(jn, where,
                {"id", "x", "y", "profile", "is_sink", "sensing_range_m",
                 "activation_cost"},
                {"id", "x", "y", "profile", "is_sink", "sensing_range_m",
                 "activation_cost"});
    SensorNode n;
    n.id = integer(jn, where, "id");
    n.position = {num(jn, where, "x"), num(jn, where, "y")};
    n.profile = lookup_profile(jn.at("profile").get<std::string>(), where);
    if (!jn.at("is_sink").is_boolean())
      throw ParseError(where + ".is_sink: expected a boolean");
    n.is_sink = jn.at("is_sink").get<bool>();
    n.sensing_range_m = num(jn, where, "sensing_range_m");
    n.activation_cost = num(jn, where, "activation_cost");
    sc.nodes.push_back(n);
  }

  if (!j.at("applications").is_array())
    throw ParseError("applications: expected an array");
  for (const auto& ja : j.at("applications")) {
    const std::string where =
        "applications[" + std::to_string(sc.applications.size()) + "]";
    expect_keys(ja, where,
                {"id", "kind", "rate_bps", "memory_bits", "mips", "cpu_watts",
                 "preference", "allowed_profiles", "per_node_cap", "test_points"},
                {"id", "kind", "rate_bps", "memory_bits", "mips", "cpu_watts",
                 "preference", "allowed_profiles", "per_node_cap", "test_points"});
    ApplicationSpec a;
    a.id = integer(ja, where, "id");
    a.kind = app_kind_from_string(ja.at("kind").get<std::string>());
    a.rate_bps = num(ja, where, "rate_bps");
    a.memory_bits = num(ja, where, "memory_bits");
    a.mips = num(ja, where, "mips");
    a.cpu_watts = num(ja, where, "cpu_watts");
    a.preference = num(ja, where, "preference");
    a.per_node_cap = integer(ja, where, "per_node_cap");
    for (const auto& jp : ja.at("allowed_profiles"))
      a.allowed_profiles.push_back(
          lookup_profile(jp.get<std::string>(), where + ".allowed_profiles"));
    for (const auto& jt : ja.at("test_points")) {
      const std::string tw =
          where + ".test_points[" + std::to_string(a.test_points.size()) + "]";
      expect_keys(jt, tw, {"id", "x", "y"}, {"id", "x", "y"});
      a.test_points.push_back(
          {integer(jt, tw, "id"), {num(jt, tw, "x"), num(jt, tw, "y")}});
    }
    sc.applications.push_back(std::move(a));
  }

  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return scenario_from_json(j);
}

inline void save_scenario(const Scenario& sc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << scenario_to_json(sc).dump(2) << "\n";
}

}  // namespace vsn
