#pragma once

// Test-only oracles, deliberately independent of the library's solvers: a
// depth-first enumeration of every precedence- and capacity-feasible visit
// order, and an assignment enumerator on top of it. Exponential and happy
// about it.

#include <limits>
#include <optional>
#include <vector>

#include "mpdvrp/instance.hpp"

namespace mpdvrp::testing {

struct BruteTour {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<int> visits;
};

namespace detail {

inline void brute_dfs(const Instance& inst, double capacity, std::vector<int>& remaining,
                      std::vector<char>& on_board, double load, int current, double cost,
                      std::vector<int>& path, BruteTour& best) {
  if (remaining.empty()) {
    const double total = cost + inst.distances(current, Instance::depot);
    if (total < best.cost) {
      best.cost = total;
      best.visits.clear();
      best.visits.push_back(Instance::depot);
      best.visits.insert(best.visits.end(), path.begin(), path.end());
      best.visits.push_back(Instance::depot);
    }
    return;
  }
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    const int node = remaining[i];
    const int task = inst.task_of(node);
    const bool pickup = inst.is_pickup(node);
    if (pickup) {
      if (load + inst.task_mass(task) > capacity) continue;
    } else {
      if (!on_board[task]) continue;
    }
    const double step = inst.distances(current, node);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i));
    path.push_back(node);
    on_board[task] = pickup ? 1 : 0;
    const double new_load = pickup ? load + inst.task_mass(task) : load - inst.task_mass(task);
    brute_dfs(inst, capacity, remaining, on_board, new_load, node, cost + step, path, best);
    on_board[task] = pickup ? 0 : 1;
    path.pop_back();
    remaining.insert(remaining.begin() + static_cast<std::ptrdiff_t>(i), node);
  }
}

}  // namespace detail

// Exact m-PDTSP by exhaustive feasible-order enumeration; nullopt when no
// feasible tour exists.
inline std::optional<BruteTour> brute_force_mpdtsp(const Instance& inst,
                                                   const std::vector<int>& tasks,
                                                   double capacity) {
  if (tasks.empty()) return BruteTour{0.0, {Instance::depot, Instance::depot}};
  std::vector<int> remaining;
  for (int t : tasks) {
    remaining.push_back(inst.pickup_of(t));
    remaining.push_back(inst.delivery_of(t));
  }
  std::vector<char> on_board(inst.n_tasks() + 1, 0);
  std::vector<int> path;
  BruteTour best;
  detail::brute_dfs(inst, capacity, remaining, on_board, 0.0, Instance::depot, 0.0, path, best);
  if (best.visits.empty()) return std::nullopt;
  return best;
}

struct BruteSolve {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<int> assignment;  // task i+1 -> flat agent
};

// Exact m-PDVRP by enumerating all agent^n assignments in lexicographic
// order; nullopt when everything is infeasible.
inline std::optional<BruteSolve> brute_force_solve(const Instance& inst) {
  const int n = inst.n_tasks();
  const int agents = inst.n_agents();
  std::vector<int> assignment(n, 0);
  BruteSolve best;
  while (true) {
    double total = 0.0;
    bool feasible = true;
    for (int a = 0; a < agents && feasible; ++a) {
      std::vector<int> tasks;
      for (int t = 1; t <= n; ++t)
        if (assignment[t - 1] == a) tasks.push_back(t);
      if (tasks.empty()) continue;
      const auto tour = brute_force_mpdtsp(inst, tasks, inst.agent_capacity(a));
      if (!tour)
        feasible = false;
      else
        total += tour->cost;
    }
    if (feasible && total < best.cost) {
      best.cost = total;
      best.assignment = assignment;
    }
    int pos = n - 1;
    while (pos >= 0 && assignment[pos] == agents - 1) assignment[pos--] = 0;
    if (pos < 0) break;
    ++assignment[pos];
  }
  if (best.assignment.empty()) return std::nullopt;
  return best;
}

}  // namespace mpdvrp::testing
