#include "mpdvrp/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "mpdvrp/error.hpp"

namespace mpdvrp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-subset DP cell: best cost and predecessor for each possible last node.
struct DpCell {
  std::vector<double> best;
  std::vector<std::int8_t> prev;
  double load = 0.0;

  explicit DpCell(int width) : best(width, kInf), prev(width, -1) {}
};

}  // namespace

Tour exact_mpdtsp(const Instance& inst, const std::vector<int>& assigned_tasks, double capacity,
                  int max_tasks) {
  if (assigned_tasks.empty()) return Tour{-1, {Instance::depot, Instance::depot}, 0.0};
  const int m = static_cast<int>(assigned_tasks.size());
  if (m > max_tasks || m > 16)  // 16 pairs exhaust the 32-bit subset mask
    throw CapError("exact m-PDTSP limited to " + std::to_string(std::min(max_tasks, 16)) +
                   " tasks, got " + std::to_string(m));

  std::vector<int> tasks = assigned_tasks;
  std::sort(tasks.begin(), tasks.end());

  // position 0..m-1 = pickups, m..2m-1 = deliveries
  const int width = 2 * m;
  std::vector<int> node_of(width);
  std::vector<double> mass_of(m);
  for (int i = 0; i < m; ++i) {
    node_of[i] = inst.pickup_of(tasks[i]);
    node_of[m + i] = inst.delivery_of(tasks[i]);
    mass_of[i] = inst.task_mass(tasks[i]);
  }
  const auto& d = inst.distances;

  std::unordered_map<std::uint32_t, DpCell> dp;
  dp.reserve(1u << std::min(width, 20));

  auto cell_of = [&](std::uint32_t mask) -> DpCell& {
    auto [it, inserted] = dp.try_emplace(mask, width);
    if (inserted) {
      double load = 0.0;
      for (int i = 0; i < m; ++i)
        if ((mask & (1u << i)) && !(mask & (1u << (m + i)))) load += mass_of[i];
      it->second.load = load;
    }
    return it->second;
  };

  // seed: depot -> each pickup that fits an empty vehicle
  std::vector<std::uint32_t> layer;
  for (int i = 0; i < m; ++i) {
    if (mass_of[i] > capacity) continue;
    const std::uint32_t mask = 1u << i;
    auto& cell = cell_of(mask);
    cell.best[i] = d(Instance::depot, node_of[i]);
    layer.push_back(mask);
  }
  if (layer.empty())
    throw InfeasibleError("no assigned task fits capacity " + std::to_string(capacity));

  const std::uint32_t full = (width == 32) ? 0xffffffffu : ((1u << width) - 1);
  for (int filled = 1; filled < width; ++filled) {
    std::vector<std::uint32_t> next_layer;
    for (const std::uint32_t mask : layer) {
      const DpCell& cell = dp.at(mask);
      for (int last = 0; last < width; ++last) {
        const double base = cell.best[last];
        if (base == kInf) continue;
        for (int v = 0; v < width; ++v) {
          if (mask & (1u << v)) continue;
          if (v < m) {
            if (cell.load + mass_of[v] > capacity) continue;  // pickup over capacity
          } else {
            if (!(mask & (1u << (v - m)))) continue;  // delivery before pickup
          }
          const std::uint32_t next_mask = mask | (1u << v);
          const double cost = base + d(node_of[last], node_of[v]);
          const bool fresh = !dp.contains(next_mask);
          auto& next_cell = cell_of(next_mask);
          if (fresh) next_layer.push_back(next_mask);
          if (cost < next_cell.best[v]) {
            next_cell.best[v] = cost;
            next_cell.prev[v] = static_cast<std::int8_t>(last);
          }
        }
      }
    }
    layer = std::move(next_layer);
  }

  const auto full_it = dp.find(full);
  if (full_it == dp.end())
    throw InfeasibleError("no feasible tour for the assigned task set under capacity " +
                          std::to_string(capacity));
  const DpCell& final_cell = full_it->second;
  int best_last = -1;
  double best_cost = kInf;
  for (int last = 0; last < width; ++last) {
    if (final_cell.best[last] == kInf) continue;
    const double cost = final_cell.best[last] + d(node_of[last], Instance::depot);
    if (cost < best_cost) {
      best_cost = cost;
      best_last = last;
    }
  }
  if (best_last < 0) throw InfeasibleError("no feasible tour for the assigned task set");

  // walk predecessors back to the seed
  std::vector<int> order;
  std::uint32_t mask = full;
  int last = best_last;
  while (last >= 0) {
    order.push_back(node_of[last]);
    const int prev = dp.at(mask).prev[last];
    mask &= ~(1u << last);
    last = prev;
  }
  std::reverse(order.begin(), order.end());

  Tour tour;
  tour.visits.reserve(order.size() + 2);
  tour.visits.push_back(Instance::depot);
  tour.visits.insert(tour.visits.end(), order.begin(), order.end());
  tour.visits.push_back(Instance::depot);
  tour.cost = best_cost;
  return tour;
}

ExactResult exact_solve(const Instance& inst, int max_tasks, int max_agents) {
  const int n = inst.n_tasks();
  const int agents = inst.n_agents();
  if (n > max_tasks)
    throw CapError("exact solve limited to " + std::to_string(max_tasks) + " tasks, instance has " +
                   std::to_string(n));
  if (agents > max_agents)
    throw CapError("exact solve limited to " + std::to_string(max_agents) +
                   " agents, instance has " + std::to_string(agents));

  std::vector<int> assignment(n, 0);
  std::vector<std::vector<int>> buckets(agents);
  std::optional<ExactResult> best;

  while (true) {
    for (auto& b : buckets) b.clear();
    for (int task = 1; task <= n; ++task) buckets[assignment[task - 1]].push_back(task);

    bool feasible = true;
    double total = 0.0;
    for (int a = 0; a < agents && feasible; ++a) {
      if (buckets[a].empty()) continue;
      try {
        total += exact_mpdtsp(inst, buckets[a], inst.agent_capacity(a), max_tasks).cost;
      } catch (const InfeasibleError&) {
        feasible = false;
      }
    }
    if (feasible && (!best || total < best->cost)) {
      ExactResult res;
      res.cost = total;
      res.assignment.agent_of = assignment;
      best = std::move(res);
    }

    // next assignment vector in lexicographic (odometer) order
    int pos = n - 1;
    while (pos >= 0 && assignment[pos] == agents - 1) assignment[pos--] = 0;
    if (pos < 0) break;
    ++assignment[pos];
  }

  if (!best) throw InfeasibleError("every assignment is infeasible for this instance");

  // rebuild the winning tours
  for (auto& b : buckets) b.clear();
  for (int task = 1; task <= n; ++task) buckets[best->assignment.agent_of[task - 1]].push_back(task);
  for (int a = 0; a < agents; ++a) {
    if (buckets[a].empty()) continue;
    Tour t = exact_mpdtsp(inst, buckets[a], inst.agent_capacity(a), max_tasks);
    t.agent = a;
    best->tours.push_back(std::move(t));
  }
  return *best;
}

}  // namespace mpdvrp
