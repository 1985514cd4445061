#include "mpdvrp/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mpdvrp/error.hpp"

namespace mpdvrp {

namespace {

constexpr std::int32_t kDeadBatchLimit = 32;

// Walk up from a node whose subtree turned out infeasible, killing every
// ancestor whose children are all dead.
void mark_dead_upward(SearchTree& tree, NodeId id) {
  tree.node(id).dead = true;
  NodeId cur = tree.node(id).parent;
  while (cur != kNoNode) {
    auto& nd = tree.node(cur);
    const bool all_dead = std::all_of(nd.children.begin(), nd.children.end(),
                                      [&tree](NodeId c) { return tree.node(c).dead; });
    if (!all_dead) break;
    nd.dead = true;
    cur = nd.parent;
  }
}

double price_with(const PricingFn& pricing, const Instance& inst, const Assignment& a) {
  return pricing ? pricing(inst, a) : assignment_cost(inst, a);
}

}  // namespace

SearchTree::SearchTree(int n_tasks, int n_agents, std::uint64_t seed)
    : n_tasks_(n_tasks), n_agents_(n_agents), rng_(seed) {
  if (n_tasks < 1) throw ValidationError("search tree needs at least one task");
  if (n_agents < 1) throw ValidationError("search tree needs at least one agent");
  task_order_.resize(n_tasks);
  std::iota(task_order_.begin(), task_order_.end(), 1);
  TreeNode root;
  root.id = 0;
  nodes_.push_back(std::move(root));
}

NodeId SearchTree::add_child(NodeId parent, int agent_choice) {
  const NodeId id = static_cast<NodeId>(nodes_.size());
  TreeNode child;
  child.id = id;
  child.parent = parent;
  child.depth = node(parent).depth + 1;
  child.agent_choice = agent_choice;
  nodes_.push_back(std::move(child));
  node(parent).children.push_back(id);
  return id;
}

Assignment SearchTree::assignment_prefix(NodeId id) const {
  Assignment a;
  a.agent_of.assign(n_tasks_, -1);
  NodeId cur = id;
  while (cur != kNoNode) {
    const auto& nd = node(cur);
    if (nd.parent != kNoNode) a.agent_of[task_order_[nd.depth - 1] - 1] = nd.agent_choice;
    cur = nd.parent;
  }
  return a;
}

bool SearchTree::record_completion(double cost, const Assignment& assignment) {
  if (!j_max_ || cost > *j_max_) j_max_ = cost;
  if (!incumbent_ || cost < incumbent_->cost) {
    incumbent_ = Incumbent{cost, assignment};
    return true;
  }
  return false;
}

std::size_t SearchTree::rng_below(std::size_t bound) {
  // rejection sampling keeps the draw unbiased
  const std::uint64_t span = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = span - span % bound;
  std::uint64_t v;
  do {
    v = rng_();
  } while (v >= limit);
  return static_cast<std::size_t>(v % bound);
}

std::string SearchTree::rng_state_text() const {
  std::ostringstream out;
  out << rng_;
  return out.str();
}

void SearchTree::set_rng_state_text(const std::string& text) {
  std::istringstream in(text);
  in >> rng_;
  if (in.fail()) throw ParseError("malformed RNG state");
}

void SearchTree::set_task_order(std::vector<int> order) {
  if (static_cast<int>(order.size()) != n_tasks_)
    throw ValidationError("task order length does not match task count");
  task_order_ = std::move(order);
}

double assignment_cost(const Instance& inst, const Assignment& assignment) {
  thread_local std::vector<std::vector<int>> buckets;
  buckets.resize(inst.n_agents());
  for (auto& b : buckets) b.clear();
  for (int task = 1; task <= inst.n_tasks(); ++task) {
    const int agent = assignment.agent_of[task - 1];
    buckets[agent].push_back(task);
  }
  double total = 0.0;
  for (int a = 0; a < inst.n_agents(); ++a)
    if (!buckets[a].empty()) total += nnh_tour(inst, buckets[a], inst.agent_capacity(a)).cost;
  return total;
}

std::vector<Tour> assignment_tours(const Instance& inst, const Assignment& assignment) {
  std::vector<std::vector<int>> buckets(inst.n_agents());
  for (int task = 1; task <= inst.n_tasks(); ++task)
    buckets[assignment.agent_of[task - 1]].push_back(task);
  std::vector<Tour> tours;
  tours.reserve(inst.n_agents());
  for (int a = 0; a < inst.n_agents(); ++a) {
    Tour t = nnh_tour(inst, buckets[a], inst.agent_capacity(a));
    t.agent = a;
    tours.push_back(std::move(t));
  }
  return tours;
}

double lcb_score(double j, std::int64_t n, std::int64_t parent_n, double j_max, double gamma) {
  const double exploit = j_max > 0 ? j / (static_cast<double>(n) * j_max) : 0.0;
  const double explore =
      gamma * std::sqrt(std::log(static_cast<double>(parent_n)) / static_cast<double>(n));
  return exploit - explore;
}

NodeId lcb_select(SearchTree& tree, NodeId s, double gamma) {
  const auto& nd = tree.node(s);
  if (nd.children.empty()) throw std::logic_error("lcb_select on a childless node");

  thread_local std::vector<NodeId> ties;
  ties.clear();

  // unvisited children score -inf and win outright
  for (NodeId c : nd.children)
    if (!tree.node(c).dead && tree.node(c).visits == 0) ties.push_back(c);

  if (ties.empty()) {
    double best = std::numeric_limits<double>::infinity();
    const double j_max = tree.has_j_max() ? tree.j_max() : 0.0;
    for (NodeId c : nd.children) {
      const auto& child = tree.node(c);
      if (child.dead) continue;
      const double score = lcb_score(child.cost_sum, child.visits, nd.visits, j_max, gamma);
      if (score < best) {
        best = score;
        ties.clear();
        ties.push_back(c);
      } else if (score == best) {
        ties.push_back(c);
      }
    }
  }

  if (ties.empty()) throw std::logic_error("lcb_select with every child dead");
  if (ties.size() == 1) return ties[0];
  return ties[tree.rng_below(ties.size())];
}

std::vector<NodeId> expand(SearchTree& tree, NodeId s) {
  if (tree.is_terminal(s)) throw std::logic_error("expand on a terminal node");
  if (!tree.node(s).children.empty()) throw std::logic_error("expand on an expanded node");
  std::vector<NodeId> created;
  created.reserve(tree.n_agents());
  for (int a = 0; a < tree.n_agents(); ++a) created.push_back(tree.add_child(s, a));
  return created;
}

RolloutResult rollout(SearchTree& tree, const Instance& inst, NodeId s, int r,
                      const PricingFn& pricing) {
  if (tree.is_terminal(s)) throw std::logic_error("rollout on a terminal node");
  RolloutResult result;
  result.costs.reserve(r);
  const Assignment prefix = tree.assignment_prefix(s);
  const auto& order = tree.task_order();
  const int depth = tree.node(s).depth;

  Assignment completion = prefix;
  for (int run = 0; run < r; ++run) {
    completion.agent_of = prefix.agent_of;
    for (int level = depth; level < tree.n_tasks(); ++level)
      completion.agent_of[order[level] - 1] = static_cast<int>(tree.rng_below(tree.n_agents()));
    double cost;
    try {
      cost = price_with(pricing, inst, completion);
    } catch (const InfeasibleError&) {
      ++result.failed;
      continue;
    }
    result.costs.push_back(cost);
    tree.record_completion(cost, completion);
    if (!result.best || cost < result.best->cost) result.best = Incumbent{cost, completion};
  }
  return result;
}

void backpropagate(SearchTree& tree, NodeId leaf, std::span<const double> costs) {
  if (costs.empty()) return;
  const auto count = static_cast<std::int64_t>(costs.size());
  const double sum = std::accumulate(costs.begin(), costs.end(), 0.0);
  tree.node(leaf).direct_completions += count;
  NodeId cur = leaf;
  while (cur != kNoNode) {
    auto& nd = tree.node(cur);
    nd.visits += count;
    nd.cost_sum += sum;
    cur = nd.parent;
  }
}

MctsStats run_mcts(SearchTree& tree, const Instance& inst, const SearchParams& params,
                   const MctsOptions& opts) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  MctsStats stats;

  auto elapsed_ns = [&start] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - start).count();
  };
  auto out_of_budget = [&] {
    if (params.budget.iterations && stats.iterations >= *params.budget.iterations) return true;
    if (params.budget.wall_ms && elapsed_ns() >= *params.budget.wall_ms * 1'000'000) return true;
    return false;
  };
  auto trace_row = [&](double cost) {
    if (opts.trace)
      opts.trace->add(opts.iteration_offset + stats.iterations,
                      opts.elapsed_offset_ns + elapsed_ns(), cost, opts.phase);
  };
  // Price a terminal node once and backpropagate; false when it proved
  // infeasible and got pruned.
  auto price_terminal = [&](NodeId id) {
    const Assignment assignment = tree.assignment_prefix(id);
    double cost;
    try {
      cost = price_with(opts.pricing, inst, assignment);
    } catch (const InfeasibleError&) {
      ++stats.failed_completions;
      mark_dead_upward(tree, id);
      return false;
    }
    ++stats.completions;
    if (tree.record_completion(cost, assignment)) trace_row(cost);
    const double costs[1] = {cost};
    backpropagate(tree, id, costs);
    return true;
  };

  while (!out_of_budget()) {
    if (tree.node(tree.root()).dead) break;  // nothing feasible remains

    // selection: descend while the current node has live children
    NodeId cur = tree.root();
    bool restart = false;
    while (!tree.node(cur).children.empty()) {
      const auto& children = tree.node(cur).children;
      const bool any_alive = std::any_of(children.begin(), children.end(),
                                         [&tree](NodeId c) { return !tree.node(c).dead; });
      if (!any_alive) {
        mark_dead_upward(tree, cur);
        restart = true;
        break;
      }
      cur = lcb_select(tree, cur, params.gamma);
    }
    if (restart) continue;

    ++stats.iterations;

    if (tree.is_terminal(cur)) {
      price_terminal(cur);
      continue;
    }
    if (tree.node(cur).visits > 0) {
      expand(tree, cur);
      cur = lcb_select(tree, cur, params.gamma);
      if (tree.is_terminal(cur)) {
        price_terminal(cur);
        continue;
      }
    }

    const double before = tree.incumbent() ? tree.incumbent()->cost
                                           : std::numeric_limits<double>::infinity();
    auto res = rollout(tree, inst, cur, params.rollouts, opts.pricing);
    stats.completions += static_cast<std::int64_t>(res.costs.size());
    stats.failed_completions += res.failed;
    // rollout already folded improvements into the incumbent; replay the
    // descents here so the trace sees every one of them
    double running = before;
    for (double cost : res.costs)
      if (cost < running) {
        running = cost;
        trace_row(cost);
      }
    if (res.costs.empty()) {
      auto& nd = tree.node(cur);
      if (++nd.failed_batches >= kDeadBatchLimit) mark_dead_upward(tree, cur);
      continue;
    }
    backpropagate(tree, cur, std::span<const double>(res.costs));
  }

  return stats;
}

}  // namespace mpdvrp
