#include "mpdvrp/tree_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mpdvrp/error.hpp"
#include "mpdvrp/text_io.hpp"

namespace mpdvrp {

void write_tree_snapshot(std::ostream& out, const SearchTree& tree) {
  out << "mpdvrp-tree 1\n";
  out << "n_tasks " << tree.n_tasks() << "\n";
  out << "n_agents " << tree.n_agents() << "\n";
  out << "task_order";
  for (int t : tree.task_order()) out << " " << t;
  out << "\n";
  if (tree.has_j_max())
    out << "j_max " << format_double(tree.j_max()) << "\n";
  else
    out << "j_max none\n";
  if (tree.incumbent()) {
    out << "incumbent " << format_double(tree.incumbent()->cost);
    for (int a : tree.incumbent()->assignment.agent_of) out << " " << a;
    out << "\n";
  } else {
    out << "incumbent none\n";
  }
  out << "rng " << tree.rng_state_text() << "\n";
  out << "nodes " << tree.size() << "\n";
  for (const auto& nd : tree.nodes())
    out << nd.id << " " << nd.parent << " " << nd.depth << " " << nd.agent_choice << " "
        << nd.visits << " " << format_double(nd.cost_sum) << "\n";
}

SearchTree read_tree_snapshot(std::istream& in) {
  std::string line;
  auto next_tokens = [&in, &line](const std::string& what) {
    while (std::getline(in, line)) {
      auto tok = tokenize_line(line);
      if (!tok.empty()) return tok;
    }
    throw ParseError("tree snapshot: unexpected end of file, expected " + what);
  };
  auto expect_key = [&next_tokens](const std::string& key) {
    auto tok = next_tokens(key);
    if (tok[0] != key) throw ParseError("tree snapshot: expected '" + key + "', got '" + tok[0] + "'");
    if (tok.size() < 2) throw ParseError("tree snapshot: '" + key + "' record has no value");
    return tok;
  };

  auto magic = next_tokens("header");
  if (magic.size() != 2 || magic[0] != "mpdvrp-tree" || magic[1] != "1")
    throw ParseError("tree snapshot: bad header");
  auto tok = expect_key("n_tasks");
  const int n_tasks = static_cast<int>(parse_int(tok[1], "n_tasks"));
  tok = expect_key("n_agents");
  const int n_agents = static_cast<int>(parse_int(tok[1], "n_agents"));

  SearchTree tree(n_tasks, n_agents, 0);

  tok = expect_key("task_order");
  if (static_cast<int>(tok.size()) != n_tasks + 1)
    throw ParseError("tree snapshot: task_order length mismatch");
  std::vector<int> order;
  for (int i = 1; i <= n_tasks; ++i)
    order.push_back(static_cast<int>(parse_int(tok[i], "task order entry")));
  tree.set_task_order(std::move(order));

  tok = expect_key("j_max");
  if (tok[1] == "none")
    tree.set_j_max(std::nullopt);
  else
    tree.set_j_max(parse_double(tok[1], "j_max"));

  tok = expect_key("incumbent");
  if (tok[1] == "none") {
    tree.set_incumbent(std::nullopt);
  } else {
    if (static_cast<int>(tok.size()) != n_tasks + 2)
      throw ParseError("tree snapshot: incumbent assignment length mismatch");
    Incumbent inc;
    inc.cost = parse_double(tok[1], "incumbent cost");
    for (int i = 0; i < n_tasks; ++i) {
      const int agent = static_cast<int>(parse_int(tok[2 + i], "incumbent agent"));
      if (agent < 0 || agent >= n_agents)
        throw ParseError("tree snapshot: incumbent agent out of range");
      inc.assignment.agent_of.push_back(agent);
    }
    tree.set_incumbent(std::move(inc));
  }

  // the RNG state is the remainder of its line after the key
  if (!std::getline(in, line)) throw ParseError("tree snapshot: missing rng line");
  {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key != "rng") throw ParseError("tree snapshot: expected 'rng', got '" + key + "'");
    std::string state;
    std::getline(ls, state);
    tree.set_rng_state_text(state);
  }

  tok = expect_key("nodes");
  const auto node_count = parse_int(tok[1], "node count");
  if (node_count < 1) throw ParseError("tree snapshot: node count must be >= 1");

  for (std::int64_t i = 0; i < node_count; ++i) {
    tok = next_tokens("node record");
    if (tok.size() != 6) throw ParseError("tree snapshot: node record needs 6 fields");
    const auto id = static_cast<NodeId>(parse_int(tok[0], "node id"));
    const auto parent = static_cast<NodeId>(parse_int(tok[1], "parent id"));
    const auto depth = static_cast<std::int32_t>(parse_int(tok[2], "depth"));
    const int agent_choice = static_cast<int>(parse_int(tok[3], "agent choice"));
    const auto visits = parse_int(tok[4], "visit count");
    const double cost_sum = parse_double(tok[5], "cost sum");

    if (id != static_cast<NodeId>(i)) throw ParseError("tree snapshot: node ids must be consecutive");
    if (i == 0) {
      if (parent != kNoNode || depth != 0)
        throw ParseError("tree snapshot: malformed root record");
    } else {
      if (parent < 0 || parent >= id)
        throw ParseError("tree snapshot: node " + std::to_string(id) + " has bad parent");
      if (agent_choice < 0 || agent_choice >= n_agents)
        throw ParseError("tree snapshot: node " + std::to_string(id) + " has bad agent choice");
      const NodeId created = tree.add_child(parent, agent_choice);
      if (created != id) throw ParseError("tree snapshot: node ordering corrupt");
      if (tree.node(id).depth != depth)
        throw ParseError("tree snapshot: node " + std::to_string(id) + " depth mismatch");
    }
    tree.node(id).visits = visits;
    tree.node(id).cost_sum = cost_sum;
  }

  // recover per-node direct completions from the conservation identity
  for (const auto& nd : tree.nodes()) {
    std::int64_t through_children = 0;
    for (NodeId c : nd.children) through_children += tree.node(c).visits;
    if (through_children > nd.visits)
      throw ParseError("tree snapshot: visit counts violate conservation at node " +
                       std::to_string(nd.id));
    tree.node(nd.id).direct_completions = nd.visits - through_children;
  }
  return tree;
}

void write_tree_snapshot_file(const std::string& path, const SearchTree& tree) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write tree snapshot '" + path + "'");
  write_tree_snapshot(out, tree);
  if (!out.flush()) throw IoError("failed writing tree snapshot '" + path + "'");
}

SearchTree read_tree_snapshot_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open tree snapshot '" + path + "'");
  return read_tree_snapshot(in);
}

}  // namespace mpdvrp
