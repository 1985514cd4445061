#include "mpdvrp/instance_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mpdvrp/error.hpp"
#include "mpdvrp/text_io.hpp"

namespace mpdvrp {

void write_instance(std::ostream& out, const Instance& inst) {
  out << "# mpdvrp instance\n";
  out << "n " << inst.n_tasks() << "\n";
  for (const auto& t : inst.fleet.agent_types)
    out << "fleet " << t.type_id << " " << format_double(t.capacity) << " " << t.count << "\n";
  const auto defaults = inst.fleet.flat_capacities();
  for (int a = 0; a < inst.n_agents(); ++a)
    if (inst.agent_capacities[a] != defaults[a])
      out << "override " << a << " " << format_double(inst.agent_capacities[a]) << "\n";
  for (const auto& loc : inst.locations)
    out << "node " << loc.id << " " << format_double(loc.x) << " " << format_double(loc.y) << "\n";
  for (const auto& t : inst.tasks)
    out << "task " << t.task_id << " " << t.pickup_node << " " << t.delivery_node << " "
        << format_double(t.mass) << "\n";
}

Instance read_instance(std::istream& in) {
  Instance inst;
  int n = -1;
  std::vector<std::pair<int, double>> overrides;
  int line_no = 0;
  std::string line;

  auto require = [&line_no](bool ok, const std::string& why) {
    if (!ok) throw ParseError("instance file line " + std::to_string(line_no) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = tokenize_line(line);
    if (tok.empty()) continue;
    const std::string& kind = tok[0];
    if (kind == "n") {
      require(tok.size() == 2, "expected 'n <tasks>'");
      require(n < 0, "duplicate n record");
      n = static_cast<int>(parse_int(tok[1], "task count"));
      require(n >= 1, "task count must be >= 1");
    } else if (kind == "fleet") {
      require(tok.size() == 4, "expected 'fleet <type> <capacity> <count>'");
      AgentType t;
      t.type_id = static_cast<int>(parse_int(tok[1], "type id"));
      t.capacity = parse_double(tok[2], "capacity");
      t.count = static_cast<int>(parse_int(tok[3], "agent count"));
      inst.fleet.agent_types.push_back(t);
    } else if (kind == "override") {
      require(tok.size() == 3, "expected 'override <agent> <capacity>'");
      overrides.emplace_back(static_cast<int>(parse_int(tok[1], "agent index")),
                             parse_double(tok[2], "capacity"));
    } else if (kind == "node") {
      require(tok.size() == 4, "expected 'node <id> <x> <y>'");
      Location loc;
      loc.id = static_cast<int>(parse_int(tok[1], "node id"));
      loc.x = parse_double(tok[2], "x coordinate");
      loc.y = parse_double(tok[3], "y coordinate");
      require(loc.id == static_cast<int>(inst.locations.size()),
              "node ids must be consecutive from 0");
      inst.locations.push_back(loc);
    } else if (kind == "task") {
      require(tok.size() == 5, "expected 'task <id> <pickup> <delivery> <mass>'");
      TaskPair t;
      t.task_id = static_cast<int>(parse_int(tok[1], "task id"));
      t.pickup_node = static_cast<int>(parse_int(tok[2], "pickup node"));
      t.delivery_node = static_cast<int>(parse_int(tok[3], "delivery node"));
      t.mass = parse_double(tok[4], "mass");
      require(t.task_id == static_cast<int>(inst.tasks.size()) + 1,
              "task ids must be consecutive from 1");
      inst.tasks.push_back(t);
    } else {
      require(false, "unknown record '" + kind + "'");
    }
  }

  if (n < 0) throw ParseError("instance file: missing n record");
  if (inst.fleet.agent_types.empty()) throw ParseError("instance file: missing fleet record");
  if (static_cast<int>(inst.tasks.size()) != n)
    throw ParseError("instance file: expected " + std::to_string(n) + " tasks, found " +
                     std::to_string(inst.tasks.size()));
  if (static_cast<int>(inst.locations.size()) != 2 * n + 1)
    throw ParseError("instance file: expected " + std::to_string(2 * n + 1) + " nodes, found " +
                     std::to_string(inst.locations.size()));

  inst.reset_capacities_from_fleet();
  for (const auto& [agent, capacity] : overrides) {
    if (agent < 0 || agent >= inst.n_agents())
      throw ParseError("instance file: override for agent " + std::to_string(agent) +
                       " out of range");
    inst.agent_capacities[agent] = capacity;
  }
  inst.rebuild_derived();
  return inst;
}

void write_instance_file(const std::string& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write instance file '" + path + "'");
  write_instance(out, inst);
  if (!out.flush()) throw IoError("failed writing instance file '" + path + "'");
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file '" + path + "'");
  return read_instance(in);
}

}  // namespace mpdvrp
