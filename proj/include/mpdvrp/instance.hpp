#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "mpdvrp/geometry.hpp"

namespace mpdvrp {

// One commodity: a pickup node paired with its delivery node. The pickup
// carries +mass, the delivery -mass, so the pair sums to zero.
struct TaskPair {
  int task_id = 0;  // 1..n
  int pickup_node = 0;
  int delivery_node = 0;
  double mass = 1.0;
};

struct AgentType {
  int type_id = 0;
  double capacity = 0.0;
  int count = 0;
};

struct FleetSpec {
  std::vector<AgentType> agent_types;

  int total_agents() const;
  // Capacities by flat agent index: types in declaration order, agents of a
  // type contiguous.
  std::vector<double> flat_capacities() const;
  const AgentType& type_of_flat(int flat_agent) const;
};

// Dense symmetric Euclidean distances over node ids.
class DistanceMatrix {
public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(const std::vector<Location>& points);

  double operator()(int i, int j) const {
    return d_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j)];
  }
  int size() const { return n_; }

private:
  int n_ = 0;
  std::vector<double> d_;
};

// Full m-PDVRP problem data. Node id space: 0 is the depot, pickups and
// deliveries fill 1..2n (by the standard construction pickup i sits at node
// i and its delivery at node n+i, but readers of the instance file format
// may permute that). Instances are immutable once built.
struct Instance {
  std::vector<Location> locations;       // indexed by node id
  std::vector<TaskPair> tasks;           // task_id i at index i-1
  FleetSpec fleet;
  std::vector<double> agent_capacities;  // flat index; may override the type capacity
  DistanceMatrix distances;
  // +t at task t's pickup node, -t at its delivery node, 0 at the depot.
  std::vector<int> node_task;

  static constexpr int depot = 0;

  int n_tasks() const { return static_cast<int>(tasks.size()); }
  int n_nodes() const { return static_cast<int>(locations.size()); }
  int n_agents() const { return static_cast<int>(agent_capacities.size()); }

  bool is_pickup(int node) const { return node_task[node] > 0; }
  bool is_delivery(int node) const { return node_task[node] < 0; }
  int task_of(int node) const { return std::abs(node_task[node]); }
  int pickup_of(int task) const { return tasks[task - 1].pickup_node; }
  int delivery_of(int task) const { return tasks[task - 1].delivery_node; }
  double task_mass(int task) const { return tasks[task - 1].mass; }
  double agent_capacity(int flat_agent) const { return agent_capacities[flat_agent]; }
  double max_task_mass() const;

  // Recompute node_task and the distance matrix from locations/tasks.
  // Capacity overrides are left alone.
  void rebuild_derived();
  void reset_capacities_from_fleet();
};

// Split an odd-sized coordinate list into depot + n in-order pickup/delivery
// pairs with unit masses. Throws ValidationError on an even count or a bad
// fleet.
Instance build_pd_instance(const std::vector<Location>& coords, FleetSpec fleet);

// Every invariant violation found, one human-readable line each; empty means
// the instance is well formed.
std::vector<std::string> validate_instance(const Instance& inst);

}  // namespace mpdvrp
