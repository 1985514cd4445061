#pragma once

#include <vector>

#include "mpdvrp/instance.hpp"
#include "mpdvrp/routing.hpp"
#include "mpdvrp/search.hpp"

namespace mpdvrp {

struct ExactResult {
  double cost = 0.0;
  Assignment assignment;
  std::vector<Tour> tours;  // one per agent that executes at least one task
};

// Exact single-agent m-PDTSP by dynamic programming over (visited subset,
// last node); only precedence- and capacity-feasible transitions are
// expanded, and the on-board load is a function of the subset alone. Refuses
// task sets above `max_tasks` (CapError) and throws InfeasibleError when no
// tour exists. An empty task set yields the empty depot loop.
Tour exact_mpdtsp(const Instance& inst, const std::vector<int>& assigned_tasks, double capacity,
                  int max_tasks = 12);

// Exact m-PDVRP optimum: enumerates every complete assignment in
// lexicographic order, prices each agent with exact_mpdtsp and keeps the
// global minimum, so cost ties resolve to the lexicographically smallest
// assignment vector. Refuses instances above the caps.
ExactResult exact_solve(const Instance& inst, int max_tasks = 6, int max_agents = 3);

}  // namespace mpdvrp
