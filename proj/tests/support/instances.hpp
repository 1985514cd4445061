#pragma once

#include <random>
#include <vector>

#include "mpdvrp/instance.hpp"

namespace mpdvrp::testing {

inline FleetSpec uniform_fleet(double capacity, int count) {
  FleetSpec f;
  f.agent_types.push_back({1, capacity, count});
  return f;
}

// One single-agent type per capacity, type ids 1,2,...
inline FleetSpec fleet_caps(const std::vector<double>& capacities) {
  FleetSpec f;
  int type_id = 1;
  for (double c : capacities) f.agent_types.push_back({type_id++, c, 1});
  return f;
}

// The canonical 2-task instance used across the suites:
//   depot (0,0); P1 (1,0) -> D1 (2,0); P2 (0,1) -> D2 (0,2)
// Best single-agent tour [0,1,3,2,4,0] costs 5 + sqrt(5); splitting the
// tasks over two agents costs 4 + 4 = 8.
inline Instance tiny4(FleetSpec fleet) {
  const std::vector<Location> coords = {
      {0, 0, 0}, {1, 1, 0}, {2, 0, 1}, {3, 2, 0}, {4, 0, 2},
  };
  return build_pd_instance(coords, std::move(fleet));
}

inline Instance tiny4(double capacity, int agents = 1) {
  return tiny4(uniform_fleet(capacity, agents));
}

inline Instance random_instance(std::mt19937_64& rng, int n_tasks, FleetSpec fleet,
                                double box = 100.0) {
  std::uniform_real_distribution<double> coord(0.0, box);
  std::vector<Location> coords;
  coords.reserve(2 * n_tasks + 1);
  for (int i = 0; i < 2 * n_tasks + 1; ++i)
    coords.push_back({i, coord(rng), coord(rng)});
  return build_pd_instance(coords, std::move(fleet));
}

}  // namespace mpdvrp::testing
