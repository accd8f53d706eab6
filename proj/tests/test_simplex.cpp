#include <catch2/catch_amalgamated.hpp>

#include <limits>
#include <random>

#include "vsn/linear.hpp"
#include "vsn/simplex.hpp"
#include "support/lp_oracle.hpp"

using namespace vsn;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Small builder for raw LPs in tests.
struct LpBuilder {
  MilpModel model;

  int var(double lo, double up, double cost) {
    int idx = model.add_variable(VarKind::Z, static_cast<int>(model.variables.size()),
                                 -1, -1, lo, up, false);
    if (cost != 0.0) model.objective.emplace_back(idx, cost);
    return idx;
  }

  void row(std::vector<std::pair<int, double>> terms, Sense sense, double rhs,
           std::string tag = "row") {
    model.constraints.push_back({std::move(terms), sense, rhs, std::move(tag)});
  }
};

}  // namespace

TEST_CASE("simplex solves textbook one-liners") {
  SECTION("max x s.t. x <= 3, 0 <= x <= 10") {
    LpBuilder b;
    int x = b.var(0, 10, 1.0);
    b.row({{x, 1.0}}, Sense::LE, 3.0);
    auto res = solve_lp(b.model);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.objective == Catch::Approx(3.0));
    CHECK(res.values[0] == Catch::Approx(3.0));
  }
  SECTION("conflicting rows are infeasible") {
    LpBuilder b;
    int x = b.var(0, 10, 1.0);
    b.row({{x, 1.0}}, Sense::LE, 1.0);
    b.row({{x, 1.0}}, Sense::GE, 2.0);
    CHECK(solve_lp(b.model).status == LpStatus::Infeasible);
  }
  SECTION("unbounded direction is reported") {
    LpBuilder b;
    b.var(0, kInf, 1.0);
    CHECK(solve_lp(b.model).status == LpStatus::Unbounded);
  }
  SECTION("upper bound alone decides") {
    LpBuilder b;
    b.var(0, 5, 2.0);
    auto res = solve_lp(b.model);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.objective == Catch::Approx(10.0));
  }
  SECTION("equality rows work through phase one") {
    LpBuilder b;
    int x = b.var(0, 3, 1.0);
    int y = b.var(0, 3, 1.0);
    b.row({{x, 1.0}, {y, 1.0}}, Sense::EQ, 2.0);
    auto res = solve_lp(b.model);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.objective == Catch::Approx(2.0));
  }
  SECTION("GE row pushes off the cheap bound") {
    LpBuilder b;
    int x = b.var(0, 10, -1.0);  // maximize -x
    b.row({{x, 1.0}}, Sense::GE, 1.0);
    auto res = solve_lp(b.model);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.objective == Catch::Approx(-1.0));
    CHECK(res.values[0] == Catch::Approx(1.0));
  }
  SECTION("fixed variables stay fixed") {
    LpBuilder b;
    int x = b.var(0, 10, 1.0);
    int y = b.var(0, 10, 1.0);
    b.model.fix_variable(y, 4.0);
    b.row({{x, 1.0}, {y, 1.0}}, Sense::LE, 6.0);
    auto res = solve_lp(b.model);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.values[1] == Catch::Approx(4.0));
    CHECK(res.objective == Catch::Approx(6.0));
  }
}

TEST_CASE("solve_lp refuses unrelaxed models") {
  LpBuilder b;
  b.var(0, 1, 1.0);
  b.model.variables[0].integral = true;
  CHECK_THROWS_AS(solve_lp(b.model), std::invalid_argument);
  CHECK(solve_lp(relax(b.model)).status == LpStatus::Optimal);
}

TEST_CASE("simplex matches the vertex enumeration oracle on random LPs") {
  std::mt19937 gen(20240817);
  auto coin = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  };

  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    LpBuilder b;
    const int n = coin(2, 5);
    const int m = coin(1, 5);
    for (int j = 0; j < n; ++j) {
      const double lo = coin(-3, 2);
      const double up = lo + coin(0, 8);
      b.var(lo, up, coin(-5, 5));
    }
    for (int r = 0; r < m; ++r) {
      std::vector<std::pair<int, double>> terms;
      for (int j = 0; j < n; ++j) {
        const int c = coin(-4, 4);
        if (c != 0) terms.emplace_back(j, static_cast<double>(c));
      }
      if (terms.empty()) terms.emplace_back(coin(0, n - 1), 1.0);
      const Sense sense = static_cast<Sense>(coin(0, 2));
      b.row(std::move(terms), sense, coin(-6, 10), "r" + std::to_string(r));
    }

    auto expected = testutil::lp_oracle(b.model);
    auto res = solve_lp(b.model);
    INFO("trial " << trial);
    if (expected.feasible) {
      REQUIRE(res.status == LpStatus::Optimal);
      CHECK(res.objective == Catch::Approx(expected.objective).margin(1e-6));
      ++optimal;
    } else {
      REQUIRE(res.status == LpStatus::Infeasible);
      ++infeasible;
    }
  }
  // The generator must exercise both verdicts to be worth anything.
  CHECK(optimal > 50);
  CHECK(infeasible > 50);
}

TEST_CASE("simplex is deterministic") {
  std::mt19937 gen(7);
  LpBuilder b;
  for (int j = 0; j < 8; ++j) b.var(0, 3, (j % 3) - 1.0);
  for (int r = 0; r < 6; ++r) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < 8; ++j)
      terms.emplace_back(j, std::uniform_int_distribution<int>(-3, 3)(gen));
    b.row(std::move(terms), Sense::LE, 5.0);
  }
  auto r1 = solve_lp(b.model);
  auto r2 = solve_lp(b.model);
  REQUIRE(r1.status == LpStatus::Optimal);
  CHECK(r1.objective == r2.objective);
  CHECK(r1.iterations == r2.iterations);
  CHECK(r1.values == r2.values);
}

TEST_CASE("degenerate LPs terminate") {
  // Stack of tight rows sharing a vertex.
  LpBuilder b;
  const int n = 6;
  for (int j = 0; j < n; ++j) b.var(0, kInf, 1.0);
  for (int r = 0; r < n; ++r) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j <= r; ++j) terms.emplace_back(j, 1.0);
    b.row(std::move(terms), Sense::LE, 0.0);
  }
  auto res = solve_lp(b.model);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == Catch::Approx(0.0).margin(1e-9));
}
