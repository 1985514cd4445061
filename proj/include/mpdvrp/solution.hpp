#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mpdvrp/instance.hpp"
#include "mpdvrp/oracle.hpp"
#include "mpdvrp/routing.hpp"
#include "mpdvrp/search.hpp"

namespace mpdvrp {

// A complete fleet policy as emitted by the CLI: assignment, per-agent tours
// and the total cost, or an explicit failure status.
struct Solution {
  enum class Status { ok, infeasible, no_solution };
  Status status = Status::no_solution;
  double cost = 0.0;
  Assignment assignment;
  std::vector<Tour> tours;
};

void write_solution(std::ostream& out, const Solution& sol);
Solution read_solution(std::istream& in);
void write_solution_file(const std::string& path, const Solution& sol);
Solution read_solution_file(const std::string& path);

// Rebuilds the incumbent's tours with the greedy router; the summed cost
// matches the incumbent cost bit for bit.
Solution solution_from_incumbent(const Instance& inst, const Incumbent& incumbent);
Solution solution_from_exact(const ExactResult& result);

// Empty iff every tour is feasible under its agent's capacity, the tours'
// task sets realize the assignment exactly, and the stated costs recompute
// within 1e-9 relative.
std::vector<std::string> validate_solution(const Instance& inst, const Solution& sol);

}  // namespace mpdvrp
