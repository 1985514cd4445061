#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mpdvrp/error.hpp"
#include "mpdvrp/routing.hpp"
#include "support/brute_force.hpp"
#include "support/instances.hpp"

using namespace mpdvrp;
using mpdvrp::testing::brute_force_mpdtsp;
using mpdvrp::testing::random_instance;
using mpdvrp::testing::tiny4;
using mpdvrp::testing::uniform_fleet;

namespace {
const double kTiny4Best = 5.0 + std::sqrt(5.0);
}

TEST_CASE("feasible_next applies precedence and capacity") {
  const auto inst = tiny4(1.0);
  SUBCASE("carrying task 1 blocks the second pickup under capacity 1") {
    PayloadState payload{{1}, 1.0};
    const auto next = feasible_next(inst, payload, {inst.delivery_of(1), inst.pickup_of(2)}, 1.0);
    CHECK(next == std::vector<int>{inst.delivery_of(1)});
  }
  SUBCASE("delivery before pickup is never admissible") {
    PayloadState payload{{}, 0.0};
    CHECK(feasible_next(inst, payload, {inst.delivery_of(1)}, 1.0).empty());
  }
  SUBCASE("both pickups admissible under a loose capacity") {
    PayloadState payload{{}, 0.0};
    const auto next = feasible_next(inst, payload, {inst.pickup_of(1), inst.pickup_of(2)}, 10.0);
    CHECK(next.size() == 2);
  }
}

TEST_CASE("check_tour_feasible classifies violations") {
  const auto inst = tiny4(1.0);
  const int p1 = inst.pickup_of(1), d1 = inst.delivery_of(1);
  const int p2 = inst.pickup_of(2), d2 = inst.delivery_of(2);

  SUBCASE("canonical feasible tour") {
    Tour tour{0, {0, p1, d1, 0}, 0};
    CHECK(check_tour_feasible(tour, inst, 1.0).empty());
  }
  SUBCASE("inverted pair raises precedence at step 1") {
    Tour tour{0, {0, d1, p1, 0}, 0};
    const auto violations = check_tour_feasible(tour, inst, 1.0);
    REQUIRE(!violations.empty());
    CHECK(violations[0].kind == ViolationKind::precedence);
    CHECK(violations[0].step == 1);
  }
  SUBCASE("two on board raises capacity at step 2") {
    Tour tour{0, {0, p1, p2, d1, d2, 0}, 0};
    const auto violations = check_tour_feasible(tour, inst, 1.0);
    REQUIRE(!violations.empty());
    CHECK(violations[0].kind == ViolationKind::capacity);
    CHECK(violations[0].step == 2);
  }
  SUBCASE("structural problems") {
    CHECK(!check_tour_feasible(Tour{0, {p1, d1}, 0}, inst, 1.0).empty());
    CHECK(!check_tour_feasible(Tour{0, {0, p1, p1, d1, 0}, 0}, inst, 2.0).empty());
    CHECK(!check_tour_feasible(Tour{0, {0, p1, 0}, 0}, inst, 1.0).empty());  // undelivered
  }
}

TEST_CASE("tour_cost sums consecutive legs") {
  SUBCASE("collinear example") {
    const std::vector<Location> coords = {{0, 0, 0}, {1, 1, 0}, {2, 2, 0}};
    // depot (0,0), P1 (1,0), D1 (2,0): out-and-back is 1 + 1 + 2
    const auto inst = build_pd_instance(coords, uniform_fleet(1.0, 1));
    const std::vector<int> visits{0, 1, 2, 0};
    CHECK(tour_cost(visits, inst.distances) == 4.0);
  }
  SUBCASE("empty depot loop") {
    const auto inst = tiny4(1.0);
    const std::vector<int> visits{0, 0};
    CHECK(tour_cost(visits, inst.distances) == 0.0);
  }
  SUBCASE("tiny4 full tour matches the brute-force oracle value") {
    const auto inst = tiny4(2.0);
    const std::vector<int> visits{0, 1, 3, 2, 4, 0};
    const double cost = tour_cost(visits, inst.distances);
    CHECK(cost == doctest::Approx(kTiny4Best).epsilon(1e-12));
    const auto oracle = brute_force_mpdtsp(inst, {1, 2}, 2.0);
    REQUIRE(oracle.has_value());
    CHECK(cost == doctest::Approx(oracle->cost).epsilon(1e-12));
  }
  SUBCASE("reversal invariance") {
    std::mt19937_64 rng(3);
    const auto inst = random_instance(rng, 4, uniform_fleet(4.0, 1));
    std::vector<int> visits{0, 3, 1, 7, 2, 0};
    std::vector<int> reversed(visits.rbegin(), visits.rend());
    CHECK(tour_cost(visits, inst.distances) == tour_cost(reversed, inst.distances));
  }
}

TEST_CASE("nnh_tour on tiny4") {
  SUBCASE("both tasks, capacity 2") {
    const auto inst = tiny4(2.0);
    const auto tour = nnh_tour(inst, {1, 2}, 2.0);
    CHECK(tour.visits == std::vector<int>{0, 1, 3, 2, 4, 0});
    CHECK(tour.cost == doctest::Approx(kTiny4Best).epsilon(1e-12));
    CHECK(check_tour_feasible(tour, inst, 2.0).empty());
  }
  SUBCASE("single task has the unique loop, cost 4") {
    const auto inst = tiny4(2.0);
    const auto tour = nnh_tour(inst, {1}, 2.0);
    CHECK(tour.visits == std::vector<int>{0, 1, 3, 0});
    CHECK(tour.cost == 4.0);
  }
  SUBCASE("capacity 1 forces deliver-after-pickup, same tour") {
    const auto inst = tiny4(1.0);
    const auto tour = nnh_tour(inst, {1, 2}, 1.0);
    CHECK(tour.cost == doctest::Approx(kTiny4Best).epsilon(1e-12));
    CHECK(check_tour_feasible(tour, inst, 1.0).empty());
  }
  SUBCASE("empty task set yields the empty loop") {
    const auto inst = tiny4(1.0);
    const auto tour = nnh_tour(inst, {}, 1.0);
    CHECK(tour.visits == std::vector<int>{0, 0});
    CHECK(tour.cost == 0.0);
  }
  SUBCASE("capacity below every mass is infeasible") {
    auto inst = tiny4(1.0);
    inst.tasks[0].mass = 2.0;
    inst.tasks[1].mass = 2.0;
    CHECK_THROWS_AS(nnh_tour(inst, {1, 2}, 1.0), InfeasibleError);
  }
}

TEST_CASE("nnh_tour tours are always feasible and never dead-end with unit masses") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> n_dist(1, 6);
  std::uniform_int_distribution<int> cap_dist(1, 3);
  for (int round = 0; round < 10000; ++round) {
    const int n = n_dist(rng);
    const double capacity = cap_dist(rng);
    const auto inst = random_instance(rng, n, uniform_fleet(capacity, 1));
    std::vector<int> tasks;
    for (int t = 1; t <= n; ++t)
      if (rng() % 2 == 0) tasks.push_back(t);
    if (tasks.empty()) tasks.push_back(1 + static_cast<int>(rng() % n));
    const auto tour = nnh_tour(inst, tasks, capacity);
    CHECK(check_tour_feasible(tour, inst, capacity).empty());
    CHECK(tour.visits.size() == 2 * tasks.size() + 2);
  }
}

TEST_CASE("nnh_tour never beats the brute-force optimum") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> n_dist(1, 4);
  std::uniform_int_distribution<int> cap_dist(1, 3);
  for (int round = 0; round < 200; ++round) {
    const int n = n_dist(rng);
    const double capacity = cap_dist(rng);
    const auto inst = random_instance(rng, n, uniform_fleet(capacity, 1));
    std::vector<int> tasks;
    for (int t = 1; t <= n; ++t) tasks.push_back(t);
    const auto heuristic = nnh_tour(inst, tasks, capacity);
    const auto exact = brute_force_mpdtsp(inst, tasks, capacity);
    REQUIRE(exact.has_value());
    CHECK(heuristic.cost >= exact->cost - 1e-9);
  }
}
