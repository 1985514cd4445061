#include "mpdvrp/instance.hpp"

#include <algorithm>
#include <cmath>

#include "mpdvrp/error.hpp"

namespace mpdvrp {

int FleetSpec::total_agents() const {
  int total = 0;
  for (const auto& t : agent_types) total += t.count;
  return total;
}

std::vector<double> FleetSpec::flat_capacities() const {
  std::vector<double> caps;
  caps.reserve(total_agents());
  for (const auto& t : agent_types)
    for (int i = 0; i < t.count; ++i) caps.push_back(t.capacity);
  return caps;
}

const AgentType& FleetSpec::type_of_flat(int flat_agent) const {
  int offset = 0;
  for (const auto& t : agent_types) {
    if (flat_agent < offset + t.count) return t;
    offset += t.count;
  }
  throw ValidationError("flat agent index " + std::to_string(flat_agent) + " out of range");
}

DistanceMatrix::DistanceMatrix(const std::vector<Location>& points)
    : n_(static_cast<int>(points.size())), d_(points.size() * points.size()) {
  for (int i = 0; i < n_; ++i) {
    d_[static_cast<std::size_t>(i) * n_ + i] = 0.0;
    for (int j = i + 1; j < n_; ++j) {
      const double dist = euclidean_distance(points[i], points[j]);
      d_[static_cast<std::size_t>(i) * n_ + j] = dist;
      d_[static_cast<std::size_t>(j) * n_ + i] = dist;
    }
  }
}

double Instance::max_task_mass() const {
  double m = 0.0;
  for (const auto& t : tasks) m = std::max(m, t.mass);
  return m;
}

void Instance::rebuild_derived() {
  node_task.assign(locations.size(), 0);
  for (const auto& t : tasks) {
    if (t.pickup_node >= 0 && t.pickup_node < n_nodes()) node_task[t.pickup_node] = t.task_id;
    if (t.delivery_node >= 0 && t.delivery_node < n_nodes()) node_task[t.delivery_node] = -t.task_id;
  }
  distances = DistanceMatrix(locations);
}

void Instance::reset_capacities_from_fleet() { agent_capacities = fleet.flat_capacities(); }

Instance build_pd_instance(const std::vector<Location>& coords, FleetSpec fleet) {
  if (coords.size() < 3 || coords.size() % 2 == 0)
    throw ValidationError("coordinate count must be odd and at least 3, got " +
                          std::to_string(coords.size()));
  if (fleet.agent_types.empty() || fleet.total_agents() < 1)
    throw ValidationError("fleet must contain at least one agent");
  for (const auto& t : fleet.agent_types) {
    if (t.capacity <= 0)
      throw ValidationError("nonpositive capacity, type " + std::to_string(t.type_id));
    if (t.count < 1) throw ValidationError("agent count < 1, type " + std::to_string(t.type_id));
  }

  const int n = static_cast<int>(coords.size() - 1) / 2;
  Instance inst;
  inst.locations.reserve(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i)
    inst.locations.push_back({static_cast<int>(i), coords[i].x, coords[i].y});
  inst.tasks.reserve(n);
  for (int t = 1; t <= n; ++t) inst.tasks.push_back({t, t, n + t, 1.0});
  inst.fleet = std::move(fleet);
  inst.reset_capacities_from_fleet();
  inst.rebuild_derived();
  return inst;
}

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> report;
  auto fail = [&report](std::string msg) { report.push_back(std::move(msg)); };

  const int n = inst.n_tasks();
  if (n < 1) fail("instance has no tasks");
  if (inst.n_nodes() != 2 * n + 1)
    fail("expected " + std::to_string(2 * n + 1) + " nodes, found " +
         std::to_string(inst.n_nodes()));

  for (int i = 0; i < inst.n_nodes(); ++i) {
    const auto& loc = inst.locations[i];
    if (loc.id != i) fail("location at index " + std::to_string(i) + " has id " + std::to_string(loc.id));
    if (!std::isfinite(loc.x) || !std::isfinite(loc.y))
      fail("non-finite coordinates, node " + std::to_string(i));
  }

  if (inst.fleet.agent_types.empty()) fail("fleet has no agent types");
  for (const auto& t : inst.fleet.agent_types) {
    if (t.capacity <= 0) fail("nonpositive capacity, type " + std::to_string(t.type_id));
    if (t.count < 1) fail("agent count < 1, type " + std::to_string(t.type_id));
  }
  if (inst.n_agents() != inst.fleet.total_agents())
    fail("capacity vector length " + std::to_string(inst.n_agents()) +
         " does not match fleet size " + std::to_string(inst.fleet.total_agents()));
  for (int a = 0; a < inst.n_agents(); ++a)
    if (inst.agent_capacities[a] <= 0) fail("nonpositive capacity, agent " + std::to_string(a));

  // Pickups and deliveries must tile the non-depot node ids exactly once.
  std::vector<int> seen(std::max(inst.n_nodes(), 1), 0);
  for (int t = 1; t <= n; ++t) {
    const auto& task = inst.tasks[t - 1];
    if (task.task_id != t) fail("task at index " + std::to_string(t - 1) + " has id " + std::to_string(task.task_id));
    if (task.mass <= 0) fail("nonpositive mass, task " + std::to_string(t));
    if (task.pickup_node == task.delivery_node)
      fail("pickup equals delivery, task " + std::to_string(t));
    for (int node : {task.pickup_node, task.delivery_node}) {
      if (node == Instance::depot) {
        fail("task " + std::to_string(t) + " uses the depot node");
      } else if (node < 0 || node >= inst.n_nodes()) {
        fail("task " + std::to_string(t) + " references node " + std::to_string(node) +
             " outside the instance");
      } else {
        ++seen[node];
      }
    }
  }
  for (int v = 1; v < inst.n_nodes(); ++v)
    if (seen[v] != 1)
      fail("node " + std::to_string(v) + " referenced by " + std::to_string(seen[v]) +
           " task endpoints");

  if (inst.distances.size() != inst.n_nodes()) {
    fail("distance matrix size " + std::to_string(inst.distances.size()) +
         " does not match node count");
  } else {
    for (int i = 0; i < inst.n_nodes(); ++i) {
      if (inst.distances(i, i) != 0.0) fail("nonzero self-distance, node " + std::to_string(i));
      for (int j = i + 1; j < inst.n_nodes(); ++j) {
        const double expect = euclidean_distance(inst.locations[i], inst.locations[j]);
        if (inst.distances(i, j) != inst.distances(j, i) || inst.distances(i, j) != expect) {
          fail("distance entry (" + std::to_string(i) + "," + std::to_string(j) +
               ") inconsistent with coordinates");
        }
      }
    }
  }

  return report;
}

}  // namespace mpdvrp
