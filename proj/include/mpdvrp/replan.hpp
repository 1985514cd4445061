#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpdvrp/instance.hpp"
#include "mpdvrp/search.hpp"
#include "mpdvrp/trace.hpp"

namespace mpdvrp {

// Declarative description of one problem perturbation: an independent
// uniform coordinate jitter within +-xi times the coordinate range per axis,
// or a capacity override for one agent.
struct PerturbationSpec {
  enum class Kind { spatial, capacity };
  Kind kind = Kind::spatial;
  // spatial
  double xi = 0.0;
  std::uint64_t seed = 0;
  bool pin_depot = false;  // keep the depot fixed while jittering the rest
  // capacity
  int agent = -1;  // flat agent index
  double new_capacity = 0.0;
};

// Single-line `key=value` format:
//   kind=spatial xi=<fraction> seed=<u64> [pin_depot=1]
//   kind=capacity agent=<idx> capacity=<value>
PerturbationSpec read_perturbation_spec(std::istream& in);
void write_perturbation_spec(std::ostream& out, const PerturbationSpec& spec);
PerturbationSpec read_perturbation_spec_file(const std::string& path);
void write_perturbation_spec_file(const std::string& path, const PerturbationSpec& spec);

// Jitters every coordinate by independent uniform draws in
// [-xi*range_x, +xi*range_x] x [-xi*range_y, +xi*range_y] and rebuilds the
// distance matrix; pairing, masses and fleet are untouched. xi = 0 returns a
// bit-exact copy.
Instance apply_spatial_perturbation(const Instance& inst, double xi, std::uint64_t seed,
                                    bool pin_depot = false);

// Changes one agent's capacity, everything else untouched.
Instance apply_capacity_perturbation(const Instance& inst, int agent, double new_capacity);

Instance apply_perturbation(const Instance& inst, const PerturbationSpec& spec);

// Visited leaves (childless nodes with N > 0) ordered by ascending average
// cost J/N, ties by node id. Throws on a never-searched tree.
std::vector<NodeId> rank_leaves(const SearchTree& tree);

// Structural copy with every N and J zeroed, J_max unset, incumbent cleared,
// and a fresh RNG stream.
SearchTree clone_topology(const SearchTree& tree, std::uint64_t seed);

struct ReplanParams {
  double k = 0.05;    // fraction of ranked leaves to re-evaluate
  int rollouts = 20;  // per non-terminal leaf
};

// ceil(k * count) with a guard against the float product landing one ulp
// above an integer.
std::size_t percentile_count(double k, std::size_t count);

struct LeafRepricing {
  NodeId leaf = kNoNode;
  bool terminal = false;
  std::int64_t priced = 0;
  std::int64_t failed = 0;
  double best_cost = 0.0;  // NaN when nothing priced
};

struct ReevaluateResult {
  std::int64_t leaves_processed = 0;
  std::int64_t completions = 0;
  std::int64_t failed_completions = 0;
  std::vector<LeafRepricing> repricings;
};

// Processes the cheapest ceil(k*|ranked|) leaves in order: terminal leaves
// are priced exactly once, non-terminal leaves get r random rollouts, all
// under the (perturbed) instance, with costs backpropagated through `tree`.
// Failed completions are discarded and recorded per leaf. One leaf counts as
// one trace iteration.
ReevaluateResult reevaluate_leaves(SearchTree& tree, const Instance& inst,
                                   std::span<const NodeId> ranked, double k, int r,
                                   ConvergenceTrace* trace = nullptr,
                                   const PricingFn& pricing = {});

struct ReplanResult {
  std::optional<Incumbent> incumbent;
  ConvergenceTrace trace;  // reevaluation rows then search rows, one timeline
  SearchTree tree;
  ReevaluateResult reevaluation;
  MctsStats search_stats;
};

// The full warm-restart pipeline: rank nominal leaves, clone the topology
// with zeroed statistics, re-price the cheapest percentile under the
// perturbed instance, then resume MCTS on the warmed tree. Rejects
// perturbations that changed the task or agent count.
ReplanResult replan(const SearchTree& nominal_tree, const Instance& perturbed_inst,
                    const ReplanParams& rp, const SearchParams& sp, const PricingFn& pricing = {});

}  // namespace mpdvrp
