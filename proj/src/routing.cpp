#include "mpdvrp/routing.hpp"

#include <algorithm>
#include <limits>

#include "mpdvrp/error.hpp"

namespace mpdvrp {

namespace {

bool admissible(const Instance& inst, int node, const std::vector<char>& on_board, double load,
                double capacity) {
  const int task = inst.task_of(node);
  if (inst.is_delivery(node)) return on_board[task];
  return load + inst.task_mass(task) <= capacity;
}

struct GreedyScratch {
  std::vector<int> remaining;
  std::vector<char> on_board;
  std::vector<int> visits;
};

}  // namespace

std::vector<int> feasible_next(const Instance& inst, const PayloadState& payload,
                               const std::vector<int>& remaining, double capacity) {
  std::vector<char> on_board(inst.n_tasks() + 1, 0);
  for (int task : payload.carried) on_board[task] = 1;
  std::vector<int> out;
  for (int node : remaining)
    if (admissible(inst, node, on_board, payload.load, capacity)) out.push_back(node);
  return out;
}

std::vector<TourViolation> check_tour_feasible(const Tour& tour, const Instance& inst,
                                               double capacity) {
  std::vector<TourViolation> violations;
  auto add = [&violations](int step, ViolationKind kind, std::string detail) {
    violations.push_back({step, kind, std::move(detail)});
  };

  const auto& v = tour.visits;
  if (v.size() < 2) {
    add(0, ViolationKind::structure, "tour has fewer than two visits");
    return violations;
  }
  if (v.front() != Instance::depot) add(0, ViolationKind::structure, "tour does not start at the depot");
  if (v.back() != Instance::depot)
    add(static_cast<int>(v.size()) - 1, ViolationKind::structure, "tour does not end at the depot");

  std::vector<char> visited(inst.n_nodes(), 0);
  std::vector<char> on_board(inst.n_tasks() + 1, 0);
  double load = 0.0;
  for (int step = 1; step + 1 < static_cast<int>(v.size()); ++step) {
    const int node = v[step];
    if (node < 0 || node >= inst.n_nodes()) {
      add(step, ViolationKind::structure, "node " + std::to_string(node) + " outside the instance");
      continue;
    }
    if (node == Instance::depot) {
      add(step, ViolationKind::structure, "interior depot visit");
      continue;
    }
    if (visited[node]) {
      add(step, ViolationKind::structure, "node " + std::to_string(node) + " visited twice");
      continue;
    }
    visited[node] = 1;
    const int task = inst.task_of(node);
    if (inst.is_pickup(node)) {
      load += inst.task_mass(task);
      on_board[task] = 1;
      if (load > capacity)
        add(step, ViolationKind::capacity,
            "load " + std::to_string(load) + " exceeds capacity at node " + std::to_string(node));
    } else {
      if (!on_board[task]) {
        add(step, ViolationKind::precedence,
            "delivery of task " + std::to_string(task) + " before its pickup");
      } else {
        on_board[task] = 0;
        load -= inst.task_mass(task);
      }
    }
  }
  for (int task = 1; task <= inst.n_tasks(); ++task)
    if (on_board[task])
      add(static_cast<int>(v.size()) - 1, ViolationKind::structure,
          "task " + std::to_string(task) + " picked up but never delivered");
  return violations;
}

double tour_cost(std::span<const int> visits, const DistanceMatrix& d) {
  double cost = 0.0;
  for (std::size_t i = 0; i + 1 < visits.size(); ++i) cost += d(visits[i], visits[i + 1]);
  return cost;
}

Tour nnh_tour(const Instance& inst, const std::vector<int>& assigned_tasks, double capacity) {
  if (assigned_tasks.empty()) return Tour{-1, {Instance::depot, Instance::depot}, 0.0};

  thread_local GreedyScratch scratch;
  const auto& d = inst.distances;

  std::vector<int> starts;  // pickup nodes that can legally open a tour
  starts.reserve(assigned_tasks.size());
  for (int task : assigned_tasks)
    if (inst.task_mass(task) <= capacity) starts.push_back(inst.pickup_of(task));
  std::sort(starts.begin(), starts.end());
  if (starts.empty())
    throw InfeasibleError("no assigned task fits capacity " + std::to_string(capacity));

  Tour best;
  best.cost = std::numeric_limits<double>::infinity();

  for (int start : starts) {
    auto& remaining = scratch.remaining;
    auto& on_board = scratch.on_board;
    auto& visits = scratch.visits;
    remaining.clear();
    on_board.assign(inst.n_tasks() + 1, 0);
    visits.clear();

    for (int task : assigned_tasks) {
      if (inst.pickup_of(task) != start) remaining.push_back(inst.pickup_of(task));
      remaining.push_back(inst.delivery_of(task));
    }
    visits.push_back(Instance::depot);
    visits.push_back(start);
    on_board[inst.task_of(start)] = 1;
    double load = inst.task_mass(inst.task_of(start));
    double cost = d(Instance::depot, start);
    int current = start;
    bool dead_end = false;

    while (!remaining.empty()) {
      // nearest admissible node, ties to the lowest node id
      int best_idx = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        const int node = remaining[i];
        if (!admissible(inst, node, on_board, load, capacity)) continue;
        const double dist = d(current, node);
        if (dist < best_dist || (dist == best_dist && node < remaining[best_idx])) {
          best_dist = dist;
          best_idx = static_cast<int>(i);
        }
      }
      if (best_idx < 0) {
        dead_end = true;  // possible only under non-uniform masses
        break;
      }
      const int node = remaining[best_idx];
      remaining[best_idx] = remaining.back();
      remaining.pop_back();
      const int task = inst.task_of(node);
      if (inst.is_pickup(node)) {
        load += inst.task_mass(task);
        on_board[task] = 1;
      } else {
        load -= inst.task_mass(task);
        on_board[task] = 0;
      }
      cost += best_dist;
      visits.push_back(node);
      current = node;
    }
    if (dead_end) continue;

    cost += d(current, Instance::depot);
    visits.push_back(Instance::depot);
    if (cost < best.cost) {
      best.cost = cost;
      best.visits.assign(visits.begin(), visits.end());
    }
  }

  if (best.visits.empty())
    throw InfeasibleError("every greedy start dead-ended for the assigned task set");
  return best;
}

}  // namespace mpdvrp
