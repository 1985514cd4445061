#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mpdvrp/error.hpp"
#include "mpdvrp/instance.hpp"
#include "mpdvrp/tsplib.hpp"
#include "support/instances.hpp"

using namespace mpdvrp;
using mpdvrp::testing::fleet_caps;
using mpdvrp::testing::random_instance;
using mpdvrp::testing::tiny4;
using mpdvrp::testing::uniform_fleet;

TEST_CASE("euclidean_distance basics") {
  CHECK(euclidean_distance({0, 0, 0}, {1, 3, 4}) == 5.0);
  CHECK(euclidean_distance({0, 1, 1}, {1, 1, 1}) == 0.0);
  CHECK(euclidean_distance({0, 0, 0}, {1, 1, 1}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("parse_tsplib reads a minimal file") {
  std::istringstream in(
      "NAME : two\nTYPE : TSP\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\n"
      "NODE_COORD_SECTION\n1 0 0\n2 3 4\nEOF\n");
  const auto coords = parse_tsplib(in);
  REQUIRE(coords.size() == 2);
  CHECK(coords[0].id == 0);
  CHECK(coords[0].x == 0.0);
  CHECK(coords[1].id == 1);
  CHECK(coords[1].x == 3.0);
  CHECK(coords[1].y == 4.0);
}

TEST_CASE("parse_tsplib reads eil51") {
  const auto coords = parse_tsplib_file(std::string(MPDVRP_TEST_DATA_DIR) + "/eil51.tsp");
  CHECK(coords.size() == 51);
  CHECK(coords[0].x == 37.0);
  CHECK(coords[0].y == 52.0);
  CHECK(coords[50].x == 30.0);
  CHECK(coords[50].y == 40.0);
}

TEST_CASE("parse_tsplib rejects malformed input") {
  SUBCASE("dimension mismatch") {
    std::istringstream in(
        "DIMENSION : 51\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 4\nEOF\n");
    CHECK_THROWS_AS(parse_tsplib(in), ParseError);
  }
  SUBCASE("non-numeric coordinate names the line") {
    std::istringstream in(
        "DIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 x 4\nEOF\n");
    try {
      parse_tsplib(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("line 5") != std::string::npos);
    }
  }
  SUBCASE("coordinates before dimension") {
    std::istringstream in("NODE_COORD_SECTION\n1 0 0\nEOF\n");
    CHECK_THROWS_AS(parse_tsplib(in), ParseError);
  }
  SUBCASE("non-euclidean weight type") {
    std::istringstream in("DIMENSION : 2\nEDGE_WEIGHT_TYPE : EXPLICIT\n");
    CHECK_THROWS_AS(parse_tsplib(in), ParseError);
  }
}

TEST_CASE("parse_tsplib warns about ignored keywords") {
  std::istringstream in(
      "DIMENSION : 1\nEDGE_WEIGHT_TYPE : EUC_2D\nCAPACITY : 99\n"
      "NODE_COORD_SECTION\n1 0 0\nEOF\n");
  std::vector<std::string> warnings;
  parse_tsplib(in, &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("CAPACITY") != std::string::npos);
}

TEST_CASE("build_pd_instance splits coordinates into depot and pairs") {
  SUBCASE("eil51 with two agents") {
    const auto coords = parse_tsplib_file(std::string(MPDVRP_TEST_DATA_DIR) + "/eil51.tsp");
    const auto inst = build_pd_instance(coords, uniform_fleet(10.0, 2));
    CHECK(inst.n_tasks() == 25);
    CHECK(inst.n_agents() == 2);
    CHECK(inst.agent_capacity(0) == 10.0);
    CHECK(validate_instance(inst).empty());
  }
  SUBCASE("five coordinates, pickup 1 at coord 2, delivery 1 at coord 4") {
    const std::vector<Location> coords = {
        {0, 0, 0}, {1, 10, 0}, {2, 20, 0}, {3, 30, 0}, {4, 40, 0}};
    const auto inst = build_pd_instance(coords, uniform_fleet(1.0, 1));
    CHECK(inst.n_tasks() == 2);
    CHECK(inst.locations[inst.pickup_of(1)].x == 10.0);
    CHECK(inst.locations[inst.delivery_of(1)].x == 30.0);
    CHECK(inst.task_mass(1) == 1.0);
  }
  SUBCASE("even coordinate count is rejected") {
    const std::vector<Location> coords = {{0, 0, 0}, {1, 1, 0}, {2, 2, 0}, {3, 3, 0}};
    CHECK_THROWS_AS(build_pd_instance(coords, uniform_fleet(1.0, 1)), ValidationError);
  }
}

TEST_CASE("build_pd_instance is deterministic") {
  std::mt19937_64 rng(7);
  const auto a = random_instance(rng, 5, fleet_caps({2, 3}));
  std::mt19937_64 rng2(7);
  const auto b = random_instance(rng2, 5, fleet_caps({2, 3}));
  REQUIRE(a.n_nodes() == b.n_nodes());
  for (int i = 0; i < a.n_nodes(); ++i) {
    CHECK(a.locations[i].x == b.locations[i].x);
    CHECK(a.locations[i].y == b.locations[i].y);
  }
  for (int i = 0; i < a.n_nodes(); ++i)
    for (int j = 0; j < a.n_nodes(); ++j) CHECK(a.distances(i, j) == b.distances(i, j));
}

TEST_CASE("distance matrix is a metric on random instances") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 20; ++round) {
    const auto inst = random_instance(rng, 4, uniform_fleet(2.0, 1));
    const int n = inst.n_nodes();
    for (int i = 0; i < n; ++i) {
      CHECK(inst.distances(i, i) == 0.0);
      for (int j = 0; j < n; ++j) {
        CHECK(inst.distances(i, j) == inst.distances(j, i));
        CHECK(inst.distances(i, j) >= 0.0);
        for (int k = 0; k < n; ++k)
          CHECK(inst.distances(i, j) <= inst.distances(i, k) + inst.distances(k, j) + 1e-9);
      }
    }
  }
}

TEST_CASE("validate_instance reports invariant breaches") {
  SUBCASE("well-formed tiny4") { CHECK(validate_instance(tiny4(2.0)).empty()); }
  SUBCASE("zero mass") {
    auto inst = tiny4(2.0);
    inst.tasks[0].mass = 0.0;
    const auto report = validate_instance(inst);
    REQUIRE(report.size() == 1);
    CHECK(report[0].find("nonpositive mass") != std::string::npos);
    CHECK(report[0].find("task 1") != std::string::npos);
  }
  SUBCASE("negative capacity") {
    auto inst = tiny4(2.0);
    inst.fleet.agent_types[0].capacity = -1.0;
    inst.reset_capacities_from_fleet();
    const auto report = validate_instance(inst);
    CHECK(!report.empty());
    CHECK(report[0].find("nonpositive capacity") != std::string::npos);
  }
  SUBCASE("duplicated node reference") {
    auto inst = tiny4(2.0);
    inst.tasks[1].pickup_node = inst.tasks[0].pickup_node;
    inst.rebuild_derived();
    CHECK(!validate_instance(inst).empty());
  }
}
