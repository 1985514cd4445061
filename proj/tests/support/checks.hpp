#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <vector>

#include "mpdvrp/oracle.hpp"
#include "mpdvrp/search.hpp"

namespace mpdvrp::testing {

// N(s) must equal the completions priced at s plus those routed through its
// children, at every node.
inline bool conservation_holds(const SearchTree& tree) {
  for (const auto& nd : tree.nodes()) {
    std::int64_t through = nd.direct_completions;
    for (NodeId c : nd.children) through += tree.node(c).visits;
    if (nd.visits != through) return false;
  }
  return true;
}

// Exact assignment pricing (per-agent exact m-PDTSP sum) with a memo cache,
// for oracle-agreement runs.
inline PricingFn exact_pricing() {
  auto cache = std::make_shared<std::map<std::vector<int>, double>>();
  return [cache](const Instance& inst, const Assignment& a) {
    if (auto it = cache->find(a.agent_of); it != cache->end()) return it->second;
    double total = 0.0;
    std::vector<std::vector<int>> buckets(inst.n_agents());
    for (int t = 1; t <= inst.n_tasks(); ++t) buckets[a.agent_of[t - 1]].push_back(t);
    for (int agent = 0; agent < inst.n_agents(); ++agent)
      if (!buckets[agent].empty())
        total += exact_mpdtsp(inst, buckets[agent], inst.agent_capacity(agent)).cost;
    (*cache)[a.agent_of] = total;
    return total;
  };
}

// Runs MCTS in chunks until the incumbent reaches `target` (1e-9 relative)
// or `max_iters` iterations pass; true on convergence.
inline bool converges_to(SearchTree& tree, const Instance& inst, SearchParams sp,
                         const PricingFn& pricing, double target, std::int64_t max_iters,
                         std::int64_t chunk = 200) {
  MctsOptions opts;
  opts.pricing = pricing;
  std::int64_t done = 0;
  while (done < max_iters) {
    sp.budget.iterations = std::min(chunk, max_iters - done);
    sp.budget.wall_ms.reset();
    run_mcts(tree, inst, sp, opts);
    done += *sp.budget.iterations;
    if (tree.incumbent() &&
        std::abs(tree.incumbent()->cost - target) <= 1e-9 * std::max(1.0, std::abs(target)))
      return true;
  }
  return false;
}

}  // namespace mpdvrp::testing
