#pragma once

#include <span>
#include <string>
#include <vector>

#include "mpdvrp/instance.hpp"

namespace mpdvrp {

// One agent's closed route. `visits` begins and ends at the depot; `cost` is
// the sum of consecutive-leg distances and can always be recomputed.
struct Tour {
  int agent = -1;  // flat agent index, -1 when unattached
  std::vector<int> visits;
  double cost = 0.0;
};

struct PayloadState {
  std::vector<int> carried;  // task ids currently on board
  double load = 0.0;
};

enum class ViolationKind { structure, precedence, capacity };

struct TourViolation {
  int step = 0;  // index into visits
  ViolationKind kind = ViolationKind::structure;
  std::string detail;
};

// Nodes from `remaining` admissible as the next visit: a delivery whose
// commodity is on board, or a pickup that still fits under `capacity`.
std::vector<int> feasible_next(const Instance& inst, const PayloadState& payload,
                               const std::vector<int>& remaining, double capacity);

// Empty result iff the tour starts/ends at the depot, visits distinct paired
// nodes, respects precedence at every step and never exceeds `capacity`.
std::vector<TourViolation> check_tour_feasible(const Tour& tour, const Instance& inst,
                                               double capacity);

double tour_cost(std::span<const int> visits, const DistanceMatrix& d);

// Adapted nearest-neighbor pricing of one agent's m-PDTSP: one greedy run per
// assigned pickup as the first visit, each extending with the nearest
// precedence- and capacity-feasible node, keeping the cheapest completed
// tour. An empty task set yields the empty depot loop; throws
// InfeasibleError when no start can complete.
Tour nnh_tour(const Instance& inst, const std::vector<int>& assigned_tasks, double capacity);

}  // namespace mpdvrp
