#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "vsn/bnb.hpp"
#include "vsn/model.hpp"
#include "vsn/simplex.hpp"
#include "support/builders.hpp"

using namespace vsn;

namespace {

/// Hand enumeration of the one-node fixture: all 16 assignments of
/// (z, x, h, y) checked against the coverage, linkage and activation rules.
double one_node_optimum_by_hand(const Scenario& sc) {
  const auto& app = sc.applications[0];
  const double q = app.preference;
  const double delta = sc.nodes[0].activation_cost;
  double best = -1e9;
  for (int z = 0; z <= 1; ++z)
    for (int x = 0; x <= 1; ++x)
      for (int h = 0; h <= 1; ++h)
        for (int y = 0; y <= 1; ++y) {
          if (y != h) continue;                    // cover: sum y == h
          if (z != h) continue;                    // every test point covered
          if (y == 1 && x == 0) continue;          // sensing activates the node
          best = std::max(best, q * z - delta * x);
        }
  return best;
}

}  // namespace

TEST_CASE("one-node model matches hand enumeration") {
  Scenario sc = testutil::one_node_fixture();
  MilpModel model = build_model(sc, RoutingMode::multipath());

  // One node, no links: only z, x, h, y.
  CHECK(model.index.f.empty());
  CHECK(model.index.g.empty());
  REQUIRE(model.index.z.size() == 1);
  REQUIRE(model.index.y.size() == 1);

  const double expected = one_node_optimum_by_hand(sc);
  CHECK(expected == Catch::Approx(0.99));

  auto out = solve_milp(model);
  REQUIRE(out.solution.status == SolveStatus::Optimal);
  CHECK(out.solution.objective == Catch::Approx(expected).margin(1e-9));

  auto vals = extract_values(model, out.solution.values);
  CHECK(validate_solution(sc, RoutingMode::multipath(), vals).empty());
}

TEST_CASE("relaxation behaves as a relaxation") {
  Scenario sc = testutil::one_node_fixture();
  MilpModel model = build_model(sc, RoutingMode::multipath());

  SECTION("relax clears every flag and is idempotent") {
    MilpModel r = relax(model);
    CHECK_FALSE(r.any_integral());
    MilpModel rr = relax(r);
    CHECK(rr.variables.size() == r.variables.size());
    for (std::size_t i = 0; i < r.variables.size(); ++i) {
      CHECK(rr.variables[i].lower == r.variables[i].lower);
      CHECK(rr.variables[i].upper == r.variables[i].upper);
      CHECK_FALSE(rr.variables[i].integral);
    }
  }

  SECTION("LP bound dominates the integer optimum") {
    auto lp = solve_lp(relax(model));
    auto milp = solve_milp(model);
    REQUIRE(lp.status == LpStatus::Optimal);
    CHECK(lp.objective >= milp.solution.objective - 1e-9);
    // Big-M lets the activation variable sit at c/K in the relaxation.
    const double frac = sc.applications[0].rate_bps / sc.big_m_bps;
    CHECK(lp.objective ==
          Catch::Approx(1.0 - sc.nodes[0].activation_cost * frac).margin(1e-9));
  }
}

TEST_CASE("fix_variable pins values and propagates") {
  Scenario sc = testutil::one_node_fixture();
  MilpModel model = build_model(sc, RoutingMode::multipath());
  const int zvar = model.index.z.at(0);

  SECTION("fixing z to zero disables the application") {
    MilpModel fixed = with_fixed(model, zvar, 0.0);
    auto out = solve_milp(fixed);
    REQUIRE(out.solution.status == SolveStatus::Optimal);
    CHECK(out.solution.objective == Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("forcing an uncoverable application is infeasible") {
    Scenario bad = sc;
    bad.applications[0].test_points[0].position = {5.0, 5.0};  // out of range
    bad.validate();
    MilpModel m2 = build_model(bad, RoutingMode::multipath());
    MilpModel forced = with_fixed(m2, m2.index.z.at(0), 1.0);
    auto out = solve_milp(forced);
    CHECK(out.solution.status == SolveStatus::Infeasible);
  }

  SECTION("re-solving with all binaries fixed reproduces the objective") {
    auto first = solve_milp(model);
    MilpModel pinned = relax(model);
    for (const auto& v : model.variables)
      if (v.integral) pinned.fix_variable(v.index, first.solution.values[v.index]);
    auto lp = solve_lp(pinned);
    REQUIRE(lp.status == LpStatus::Optimal);
    CHECK(lp.objective == Catch::Approx(first.solution.objective).margin(1e-6));
  }

  SECTION("out-of-bounds fix raises") {
    CHECK_THROWS_AS(with_fixed(model, zvar, 2.0), std::domain_error);
  }
}

TEST_CASE("zero applications deploy nothing") {
  Scenario sc = testutil::one_node_fixture();
  sc.applications.clear();
  MilpModel model = build_model(sc, RoutingMode::multipath());
  auto out = solve_milp(model);
  REQUIRE(out.solution.status == SolveStatus::Optimal);
  CHECK(out.solution.objective == Catch::Approx(0.0).margin(1e-12));
  auto vals = extract_values(model, out.solution.values);
  for (const auto& [node, v] : vals.x) CHECK(v == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("validator catches hand-made corruption") {
  Scenario sc = testutil::one_node_fixture();
  MilpModel model = build_model(sc, RoutingMode::multipath());
  auto out = solve_milp(model);
  auto vals = extract_values(model, out.solution.values);
  REQUIRE(validate_solution(sc, RoutingMode::multipath(), vals).empty());

  SECTION("a dropped host breaks coverage and the app linkage") {
    SolutionValues bad = vals;
    bad.y[{0, 0, 0}] = 0.0;
    auto violations = validate_solution(sc, RoutingMode::multipath(), bad);
    REQUIRE_FALSE(violations.empty());
    bool cover = false, linkage = false;
    for (const auto& v : violations) {
      if (v.tag.rfind("cover[", 0) == 0) cover = true;
      if (v.tag.rfind("app_active[", 0) == 0) linkage = true;
    }
    CHECK(cover);
    CHECK(linkage);
  }

  SECTION("fractional binaries are flagged") {
    SolutionValues bad = vals;
    bad.z[0] = 0.4;
    auto violations = validate_solution(sc, RoutingMode::multipath(), bad);
    bool binary = false;
    for (const auto& v : violations)
      if (v.tag.rfind("binary[", 0) == 0) binary = true;
    CHECK(binary);
  }

  SECTION("an unpaid activation is flagged") {
    SolutionValues bad = vals;
    bad.x[0] = 0.0;
    auto violations = validate_solution(sc, RoutingMode::multipath(), bad);
    bool activation = false;
    for (const auto& v : violations)
      if (v.tag.rfind("activation[", 0) == 0) activation = true;
    CHECK(activation);
  }

  SECTION("hosting outside the coverage set is flagged") {
    SolutionValues bad = vals;
    bad.y[{0, 0, 99}] = 1.0;  // no such test point
    auto violations = validate_solution(sc, RoutingMode::multipath(), bad);
    bool support = false;
    for (const auto& v : violations)
      if (v.tag.rfind("y_support[", 0) == 0) support = true;
    CHECK(support);
  }
}

TEST_CASE("metrics summarize a solution") {
  SECTION("empty deployment gives an all-zero row") {
    Scenario sc = testutil::one_node_fixture();
    SolutionValues vals;
    auto mt = metrics(sc, vals);
    CHECK(mt.objective == 0.0);
    CHECK(mt.active_apps_total == 0);
    CHECK(mt.active_nodes_total == 0);
    CHECK(mt.delivered_bps == 0.0);
  }

  SECTION("one-node deployment counts one app and one scalar node") {
    Scenario sc = testutil::one_node_fixture();
    MilpModel model = build_model(sc, RoutingMode::multipath());
    auto out = solve_milp(model);
    auto vals = extract_values(model, out.solution.values);
    auto mt = metrics(sc, vals);
    CHECK(mt.objective == Catch::Approx(0.99));
    CHECK(mt.active_apps.at(AppKind::Temperature) == 1);
    CHECK(mt.active_apps_total == 1);
    CHECK(mt.active_nodes.at("TelosB") == 1);
    // Delivered traffic equals the offered rate of the active applications.
    double offered = 0.0;
    for (const auto& app : sc.applications)
      offered += app.rate_bps * app.test_points.size() * vals.z_at(app.id);
    CHECK(mt.delivered_bps == Catch::Approx(offered));
  }
}

TEST_CASE("LP dump is syntactically plausible") {
  Scenario sc = testutil::one_node_fixture();
  MilpModel model = build_model(sc, RoutingMode::multipath());
  std::ostringstream os;
  write_lp(model, os);
  const std::string text = os.str();
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("cover_0_0:") != std::string::npos);
  CHECK(text.find("General") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}

TEST_CASE("routing modes nest: multipath >= singlepath >= static") {
  int checked = 0;
  for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u, 16u}) {
    GenParams gp = testutil::small_params();
    gp.p_max_dbm = -6.0;  // multi-hop but still connected at this scale
    Scenario sc = random_scenario(seed, gp);
    auto dodag = build_dodag(sc);

    auto solve_mode = [&](const RoutingMode& mode) {
      auto out = solve_milp(build_model(sc, mode));
      REQUIRE(out.solution.status == SolveStatus::Optimal);
      return out.solution.objective;
    };
    const double multi = solve_mode(RoutingMode::multipath());
    const double single = solve_mode(RoutingMode::singlepath());
    const double fixed = solve_mode(RoutingMode::static_routing(dodag));
    CHECK(multi >= single - 1e-9);
    CHECK(single >= fixed - 1e-9);
    ++checked;
  }
  CHECK(checked == 6);
}

TEST_CASE("objective scales with a common factor on preferences and costs") {
  GenParams gp = testutil::small_params();
  Scenario sc = random_scenario(21, gp);
  Scenario scaled = sc;
  const double factor = 3.7;
  for (auto& app : scaled.applications) app.preference *= factor;
  for (auto& n : scaled.nodes) n.activation_cost *= factor;

  auto base = solve_milp(build_model(sc, RoutingMode::multipath()));
  auto big = solve_milp(build_model(scaled, RoutingMode::multipath()));
  REQUIRE(base.solution.status == SolveStatus::Optimal);
  REQUIRE(big.solution.status == SolveStatus::Optimal);
  CHECK(big.solution.objective ==
        Catch::Approx(base.solution.objective * factor).epsilon(1e-6));
}
