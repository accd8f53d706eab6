#include <catch2/catch_amalgamated.hpp>

#include "vsn/scenario.hpp"
#include "vsn/scenario_io.hpp"
#include "support/builders.hpp"

using namespace vsn;

TEST_CASE("scenario JSON round trip preserves every field") {
  GenParams gp;
  gp.n_scalar = 5;
  gp.n_multimedia = 4;
  gp.apps_per_kind = 2;
  Scenario sc = random_scenario(123, gp);
  Scenario back = scenario_from_json(scenario_to_json(sc));
  CHECK(scenario_to_json(back).dump() == scenario_to_json(sc).dump());
}

TEST_CASE("loader rejects unknown keys with a field diagnostic") {
  json j = scenario_to_json(testutil::one_node_fixture());

  SECTION("top level") {
    j["surprise"] = 1;
    CHECK_THROWS_WITH(scenario_from_json(j),
                      Catch::Matchers::ContainsSubstring("surprise"));
  }
  SECTION("node object") {
    j["nodes"][0]["battery"] = 3;
    CHECK_THROWS_WITH(scenario_from_json(j),
                      Catch::Matchers::ContainsSubstring("battery"));
  }
  SECTION("application object") {
    j["applications"][0]["priority"] = 2;
    CHECK_THROWS_WITH(scenario_from_json(j),
                      Catch::Matchers::ContainsSubstring("priority"));
  }
  SECTION("missing required key") {
    j.erase("lifetime_s");
    CHECK_THROWS_WITH(scenario_from_json(j),
                      Catch::Matchers::ContainsSubstring("lifetime_s"));
  }
  SECTION("unknown profile reference") {
    j["nodes"][0]["profile"] = "Imaginary";
    CHECK_THROWS_WITH(scenario_from_json(j),
                      Catch::Matchers::ContainsSubstring("Imaginary"));
  }
  SECTION("type errors are named") {
    j["nodes"][0]["x"] = "far away";
    CHECK_THROWS_WITH(scenario_from_json(j), Catch::Matchers::ContainsSubstring("x"));
  }
}

TEST_CASE("loader enforces scenario invariants") {
  json j = scenario_to_json(testutil::one_node_fixture());

  SECTION("sinkless scenarios are rejected") {
    j["nodes"][0]["is_sink"] = false;
    CHECK_THROWS_AS(scenario_from_json(j), ParseError);
  }
  SECTION("big-M must exceed node bandwidth") {
    j["big_m_bps"] = 1000.0;
    CHECK_THROWS_AS(scenario_from_json(j), ParseError);
  }
  SECTION("interference threshold below decode threshold") {
    j["radio"]["interference_threshold_mw"] = j["radio"]["rx_threshold_mw"];
    CHECK_THROWS_AS(scenario_from_json(j), ParseError);
  }
}
