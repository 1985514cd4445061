#include "mpdvrp/solution.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "mpdvrp/error.hpp"
#include "mpdvrp/text_io.hpp"

namespace mpdvrp {

namespace {

const char* status_name(Solution::Status s) {
  switch (s) {
    case Solution::Status::ok: return "ok";
    case Solution::Status::infeasible: return "infeasible";
    case Solution::Status::no_solution: return "no_solution";
  }
  return "?";
}

Solution::Status status_from_name(const std::string& name) {
  if (name == "ok") return Solution::Status::ok;
  if (name == "infeasible") return Solution::Status::infeasible;
  if (name == "no_solution") return Solution::Status::no_solution;
  throw ParseError("unknown solution status '" + name + "'");
}

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

void write_solution(std::ostream& out, const Solution& sol) {
  out << "# mpdvrp solution\n";
  out << "status " << status_name(sol.status) << "\n";
  if (sol.status != Solution::Status::ok) return;
  out << "cost " << format_double(sol.cost) << "\n";
  out << "assignment";
  for (int a : sol.assignment.agent_of) out << " " << a;
  out << "\n";
  for (const auto& tour : sol.tours) {
    out << "tour " << tour.agent << " " << format_double(tour.cost);
    for (int v : tour.visits) out << " " << v;
    out << "\n";
  }
}

Solution read_solution(std::istream& in) {
  Solution sol;
  bool status_seen = false, cost_seen = false;
  std::string line;
  while (std::getline(in, line)) {
    const auto tok = tokenize_line(line);
    if (tok.empty()) continue;
    if (tok[0] == "status") {
      if (tok.size() != 2) throw ParseError("solution file: malformed status record");
      sol.status = status_from_name(tok[1]);
      status_seen = true;
    } else if (tok[0] == "cost") {
      if (tok.size() != 2) throw ParseError("solution file: malformed cost record");
      sol.cost = parse_double(tok[1], "cost");
      cost_seen = true;
    } else if (tok[0] == "assignment") {
      for (std::size_t i = 1; i < tok.size(); ++i)
        sol.assignment.agent_of.push_back(static_cast<int>(parse_int(tok[i], "agent index")));
    } else if (tok[0] == "tour") {
      if (tok.size() < 4) throw ParseError("solution file: malformed tour record");
      Tour tour;
      tour.agent = static_cast<int>(parse_int(tok[1], "tour agent"));
      tour.cost = parse_double(tok[2], "tour cost");
      for (std::size_t i = 3; i < tok.size(); ++i)
        tour.visits.push_back(static_cast<int>(parse_int(tok[i], "tour node")));
      sol.tours.push_back(std::move(tour));
    } else {
      throw ParseError("solution file: unknown record '" + tok[0] + "'");
    }
  }
  if (!status_seen) throw ParseError("solution file: missing status record");
  if (sol.status == Solution::Status::ok && !cost_seen)
    throw ParseError("solution file: ok status requires a cost record");
  return sol;
}

void write_solution_file(const std::string& path, const Solution& sol) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write solution file '" + path + "'");
  write_solution(out, sol);
  if (!out.flush()) throw IoError("failed writing solution file '" + path + "'");
}

Solution read_solution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open solution file '" + path + "'");
  return read_solution(in);
}

Solution solution_from_incumbent(const Instance& inst, const Incumbent& incumbent) {
  Solution sol;
  sol.status = Solution::Status::ok;
  sol.cost = incumbent.cost;
  sol.assignment = incumbent.assignment;
  sol.tours = assignment_tours(inst, incumbent.assignment);
  return sol;
}

Solution solution_from_exact(const ExactResult& result) {
  Solution sol;
  sol.status = Solution::Status::ok;
  sol.cost = result.cost;
  sol.assignment = result.assignment;
  sol.tours = result.tours;
  return sol;
}

std::vector<std::string> validate_solution(const Instance& inst, const Solution& sol) {
  std::vector<std::string> report;
  auto fail = [&report](std::string msg) { report.push_back(std::move(msg)); };
  if (sol.status != Solution::Status::ok) return report;

  if (static_cast<int>(sol.assignment.agent_of.size()) != inst.n_tasks())
    fail("assignment length does not match task count");

  double total = 0.0;
  std::vector<int> task_agent(inst.n_tasks() + 1, -1);
  for (const auto& tour : sol.tours) {
    if (tour.agent < 0 || tour.agent >= inst.n_agents()) {
      fail("tour for unknown agent " + std::to_string(tour.agent));
      continue;
    }
    const auto violations = check_tour_feasible(tour, inst, inst.agent_capacity(tour.agent));
    for (const auto& v : violations)
      fail("agent " + std::to_string(tour.agent) + " tour step " + std::to_string(v.step) + ": " +
           v.detail);
    const double recomputed = tour_cost(tour.visits, inst.distances);
    if (!close_rel(recomputed, tour.cost, 1e-9))
      fail("agent " + std::to_string(tour.agent) + " tour cost " + format_double(tour.cost) +
           " recomputes to " + format_double(recomputed));
    total += tour.cost;
    for (int node : tour.visits) {
      if (node == Instance::depot) continue;
      if (node < 0 || node >= inst.n_nodes()) continue;  // already reported
      if (inst.is_pickup(node)) task_agent[inst.task_of(node)] = tour.agent;
    }
  }
  if (!close_rel(total, sol.cost, 1e-9))
    fail("stated cost " + format_double(sol.cost) + " differs from tour sum " +
         format_double(total));

  if (static_cast<int>(sol.assignment.agent_of.size()) == inst.n_tasks()) {
    for (int task = 1; task <= inst.n_tasks(); ++task) {
      if (task_agent[task] < 0)
        fail("task " + std::to_string(task) + " appears in no tour");
      else if (task_agent[task] != sol.assignment.agent_of[task - 1])
        fail("task " + std::to_string(task) + " executed by agent " +
             std::to_string(task_agent[task]) + " but assigned to " +
             std::to_string(sol.assignment.agent_of[task - 1]));
    }
  }
  return report;
}

}  // namespace mpdvrp
