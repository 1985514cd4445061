#include <doctest.h>

#include <cmath>
#include <random>

#include "mpdvrp/error.hpp"
#include "mpdvrp/oracle.hpp"
#include "support/brute_force.hpp"
#include "support/instances.hpp"

using namespace mpdvrp;
using mpdvrp::testing::brute_force_mpdtsp;
using mpdvrp::testing::brute_force_solve;
using mpdvrp::testing::fleet_caps;
using mpdvrp::testing::random_instance;
using mpdvrp::testing::tiny4;
using mpdvrp::testing::uniform_fleet;

namespace {
const double kTiny4Best = 5.0 + std::sqrt(5.0);
}

TEST_CASE("exact_mpdtsp on tiny4") {
  const auto inst = tiny4(2.0);
  SUBCASE("both tasks") {
    const auto tour = exact_mpdtsp(inst, {1, 2}, 2.0);
    CHECK(tour.cost == doctest::Approx(kTiny4Best).epsilon(1e-12));
    CHECK(check_tour_feasible(tour, inst, 2.0).empty());
    // optimum ties with its mirror; either realizes the cost
    const bool forward = tour.visits == std::vector<int>{0, 1, 3, 2, 4, 0};
    const bool mirror = tour.visits == std::vector<int>{0, 2, 4, 1, 3, 0};
    CHECK((forward || mirror));
  }
  SUBCASE("single task is the direct loop") {
    const auto tour = exact_mpdtsp(inst, {1}, 2.0);
    const double expect = inst.distances(0, 1) + inst.distances(1, 3) + inst.distances(3, 0);
    CHECK(tour.cost == expect);
  }
  SUBCASE("empty task set") {
    const auto tour = exact_mpdtsp(inst, {}, 2.0);
    CHECK(tour.cost == 0.0);
    CHECK(tour.visits == std::vector<int>{0, 0});
  }
}

TEST_CASE("exact_mpdtsp agrees with permutation enumeration") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> n_dist(1, 4);
  std::uniform_int_distribution<int> cap_dist(1, 3);
  for (int round = 0; round < 120; ++round) {
    const int n = n_dist(rng);
    const double capacity = cap_dist(rng);
    const auto inst = random_instance(rng, n, uniform_fleet(capacity, 1));
    std::vector<int> tasks;
    for (int t = 1; t <= n; ++t) tasks.push_back(t);
    const auto dp = exact_mpdtsp(inst, tasks, capacity);
    const auto brute = brute_force_mpdtsp(inst, tasks, capacity);
    REQUIRE(brute.has_value());
    CHECK(dp.cost == doctest::Approx(brute->cost).epsilon(1e-12));
    CHECK(check_tour_feasible(dp, inst, capacity).empty());
  }
}

TEST_CASE("exact_mpdtsp handles non-unit masses") {
  // the on-board load stays subset-derivable for arbitrary masses; the two
  // oracles must keep agreeing
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> mass(0.2, 2.0);
  for (int round = 0; round < 60; ++round) {
    auto inst = random_instance(rng, 3, uniform_fleet(2.5, 1));
    for (auto& t : inst.tasks) t.mass = mass(rng);
    const std::vector<int> tasks{1, 2, 3};
    const auto brute = brute_force_mpdtsp(inst, tasks, 2.5);
    REQUIRE(brute.has_value());  // capacity exceeds the largest single mass
    const auto dp = exact_mpdtsp(inst, tasks, 2.5);
    CHECK(dp.cost == doctest::Approx(brute->cost).epsilon(1e-12));
  }
}

TEST_CASE("exact_mpdtsp enforces caps and infeasibility") {
  std::mt19937_64 rng(41);
  const auto inst = random_instance(rng, 13, uniform_fleet(2.0, 1));
  std::vector<int> tasks;
  for (int t = 1; t <= 13; ++t) tasks.push_back(t);
  CHECK_THROWS_AS(exact_mpdtsp(inst, tasks, 2.0), CapError);

  auto heavy = tiny4(1.0);
  heavy.tasks[0].mass = 5.0;
  heavy.tasks[1].mass = 5.0;
  CHECK_THROWS_AS(exact_mpdtsp(heavy, {1, 2}, 1.0), InfeasibleError);
}

TEST_CASE("exact_solve on tiny4") {
  SUBCASE("two agents, ties resolve to the lexicographically smallest assignment") {
    const auto inst = tiny4(2.0, 2);
    const auto res = exact_solve(inst);
    CHECK(res.cost == doctest::Approx(kTiny4Best).epsilon(1e-12));
    CHECK(res.assignment.agent_of == std::vector<int>{0, 0});
    REQUIRE(res.tours.size() == 1);
    CHECK(check_tour_feasible(res.tours[0], inst, 2.0).empty());
  }
  SUBCASE("single agent") {
    const auto res = exact_solve(tiny4(2.0, 1));
    CHECK(res.cost == doctest::Approx(kTiny4Best).epsilon(1e-12));
  }
  SUBCASE("one task, two agents") {
    const std::vector<Location> coords = {{0, 0, 0}, {1, 1, 0}, {2, 2, 0}};
    const auto inst = build_pd_instance(coords, uniform_fleet(1.0, 2));
    const auto res = exact_solve(inst);
    CHECK(res.cost == 4.0);
    CHECK(res.assignment.agent_of == std::vector<int>{0});
  }
}

TEST_CASE("exact_solve matches brute-force assignment enumeration") {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> n_dist(1, 4);
  for (int round = 0; round < 40; ++round) {
    const int n = n_dist(rng);
    const auto inst = random_instance(rng, n, fleet_caps({2.0, 3.0}));
    const auto exact = exact_solve(inst);
    const auto brute = brute_force_solve(inst);
    REQUIRE(brute.has_value());
    CHECK(exact.cost == doctest::Approx(brute->cost).epsilon(1e-12));
    double tour_sum = 0.0;
    for (const auto& t : exact.tours) tour_sum += t.cost;
    CHECK(tour_sum == doctest::Approx(exact.cost).epsilon(1e-12));
  }
}

TEST_CASE("exact_solve cost is invariant under relabeling identical agents") {
  std::mt19937_64 rng(47);
  const auto two_identical = random_instance(rng, 3, uniform_fleet(2.0, 2));
  const auto res = exact_solve(two_identical);
  // flipping every agent label gives the same cost by symmetry
  std::vector<int> flipped;
  for (int a : res.assignment.agent_of) flipped.push_back(1 - a);
  double flipped_cost = 0.0;
  for (int a = 0; a < 2; ++a) {
    std::vector<int> tasks;
    for (int t = 1; t <= 3; ++t)
      if (flipped[t - 1] == a) tasks.push_back(t);
    if (!tasks.empty()) flipped_cost += exact_mpdtsp(two_identical, tasks, 2.0).cost;
  }
  CHECK(flipped_cost == doctest::Approx(res.cost).epsilon(1e-12));
}

TEST_CASE("exact_solve enforces caps") {
  std::mt19937_64 rng(53);
  const auto inst = random_instance(rng, 7, uniform_fleet(2.0, 1));
  CHECK_THROWS_AS(exact_solve(inst), CapError);
}
