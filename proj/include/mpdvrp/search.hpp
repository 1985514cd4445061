#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mpdvrp/instance.hpp"
#include "mpdvrp/routing.hpp"
#include "mpdvrp/trace.hpp"

namespace mpdvrp {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

// agent_of[i] is the flat agent executing task i+1, -1 while unassigned.
struct Assignment {
  std::vector<int> agent_of;

  bool complete() const {
    for (int a : agent_of)
      if (a < 0) return false;
    return !agent_of.empty();
  }
  bool operator==(const Assignment&) const = default;
};

struct Incumbent {
  double cost = 0.0;
  Assignment assignment;
};

// Iteration and/or wall-clock cap; whichever fires first stops the loop.
struct Budget {
  std::optional<std::int64_t> iterations;
  std::optional<std::int64_t> wall_ms;
};

struct SearchParams {
  double gamma = 0.7071067811865476;  // sqrt(0.5)
  int rollouts = 20;
  Budget budget;
  std::uint64_t seed = 0;
};

struct TreeNode {
  NodeId id = 0;
  NodeId parent = kNoNode;
  std::int32_t depth = 0;       // tasks assigned on the path from the root
  std::int32_t agent_choice = -1;
  std::vector<NodeId> children;  // agent-index order; empty until expanded
  std::int64_t visits = 0;       // N: priced completions routed through here
  double cost_sum = 0.0;         // J: their summed costs
  // in-memory bookkeeping, not part of the snapshot format
  std::int64_t direct_completions = 0;  // completions priced at this node
  std::int32_t failed_batches = 0;
  bool dead = false;  // pruned: provably or persistently infeasible below
};

// Task-assignment tree. One level per task in task_order; a node at depth d
// fixes agents for the first d tasks. Single-writer: all mutation happens on
// the search thread.
class SearchTree {
public:
  SearchTree(int n_tasks, int n_agents, std::uint64_t seed);

  NodeId root() const { return 0; }
  int n_tasks() const { return n_tasks_; }
  int n_agents() const { return n_agents_; }
  std::size_t size() const { return nodes_.size(); }
  const TreeNode& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  TreeNode& node(NodeId id) { return nodes_[static_cast<std::size_t>(id)]; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  bool is_terminal(NodeId id) const { return node(id).depth == n_tasks_; }

  const std::vector<int>& task_order() const { return task_order_; }
  bool has_j_max() const { return j_max_.has_value(); }
  double j_max() const { return *j_max_; }
  const std::optional<Incumbent>& incumbent() const { return incumbent_; }

  NodeId add_child(NodeId parent, int agent_choice);

  // Partial assignment fixed on the path from the root to `id`.
  Assignment assignment_prefix(NodeId id) const;

  // Fold one priced completion into J_max and the incumbent; true when the
  // incumbent improved.
  bool record_completion(double cost, const Assignment& assignment);

  std::uint64_t rng_next() { return rng_(); }
  std::size_t rng_below(std::size_t bound);

  // snapshot plumbing
  std::string rng_state_text() const;
  void set_rng_state_text(const std::string& text);
  void set_j_max(std::optional<double> v) { j_max_ = v; }
  void set_incumbent(std::optional<Incumbent> v) { incumbent_ = std::move(v); }
  void set_task_order(std::vector<int> order);

private:
  int n_tasks_ = 0;
  int n_agents_ = 0;
  std::vector<int> task_order_;
  std::vector<TreeNode> nodes_;
  std::optional<double> j_max_;
  std::optional<Incumbent> incumbent_;
  std::mt19937_64 rng_;
};

// Pluggable pricing of a complete assignment; the default routes every
// agent's task set through nnh_tour.
using PricingFn = std::function<double(const Instance&, const Assignment&)>;

// Sum of per-agent nnh_tour costs; agents without tasks contribute 0.
// Propagates InfeasibleError from routing.
double assignment_cost(const Instance& inst, const Assignment& assignment);
// The tours behind assignment_cost, one per agent (empty loop when idle).
std::vector<Tour> assignment_tours(const Instance& inst, const Assignment& assignment);

// LCB exploitation/exploration score of a child with statistics (j, n) under
// a parent with parent_n visits.
double lcb_score(double j, std::int64_t n, std::int64_t parent_n, double j_max, double gamma);

// Child of `s` minimizing the LCB score; unvisited children score -inf and
// win first. Ties break uniformly at random from the tree RNG. Dead children
// are skipped. Throws std::logic_error when `s` has no selectable child.
NodeId lcb_select(SearchTree& tree, NodeId s, double gamma);

// Adds one child per flat agent, in agent order. Throws std::logic_error on
// a terminal or already-expanded node.
std::vector<NodeId> expand(SearchTree& tree, NodeId s);

struct RolloutResult {
  std::vector<double> costs;  // priced completions in draw order
  std::optional<Incumbent> best;
  std::int64_t failed = 0;
};

// r random completions of the partial assignment at `s`, each remaining task
// drawn uniformly over agents, priced with `pricing`. Infeasible completions
// are discarded and counted. Updates J_max and the incumbent.
RolloutResult rollout(SearchTree& tree, const Instance& inst, NodeId s, int r,
                      const PricingFn& pricing = {});

// N += |costs| and J += sum(costs) for `leaf` and every ancestor.
void backpropagate(SearchTree& tree, NodeId leaf, std::span<const double> costs);

struct MctsStats {
  std::int64_t iterations = 0;
  std::int64_t completions = 0;
  std::int64_t failed_completions = 0;
};

struct MctsOptions {
  ConvergenceTrace* trace = nullptr;
  Phase phase = Phase::nominal;
  std::int64_t iteration_offset = 0;
  std::int64_t elapsed_offset_ns = 0;
  PricingFn pricing;  // empty -> assignment_cost
};

// The main loop: select from the root, then price a terminal, roll out an
// unvisited leaf, or expand a visited leaf and roll out one new child;
// backpropagate after each. Runs until the budget fires; incumbent
// improvements are appended to opts.trace.
MctsStats run_mcts(SearchTree& tree, const Instance& inst, const SearchParams& params,
                   const MctsOptions& opts = {});

}  // namespace mpdvrp
