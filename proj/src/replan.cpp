#include "mpdvrp/replan.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "mpdvrp/error.hpp"
#include "mpdvrp/text_io.hpp"

namespace mpdvrp {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double price_with(const PricingFn& pricing, const Instance& inst, const Assignment& a) {
  return pricing ? pricing(inst, a) : assignment_cost(inst, a);
}

}  // namespace

PerturbationSpec read_perturbation_spec(std::istream& in) {
  PerturbationSpec spec;
  bool kind_seen = false;
  std::string line;
  while (std::getline(in, line)) {
    for (const auto& tok : tokenize_line(line)) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw ParseError("perturbation spec: expected key=value, got '" + tok + "'");
      const std::string key = tok.substr(0, eq);
      const std::string value = tok.substr(eq + 1);
      if (key == "kind") {
        kind_seen = true;
        if (value == "spatial")
          spec.kind = PerturbationSpec::Kind::spatial;
        else if (value == "capacity")
          spec.kind = PerturbationSpec::Kind::capacity;
        else
          throw ParseError("perturbation spec: unknown kind '" + value + "'");
      } else if (key == "xi") {
        spec.xi = parse_double(value, "xi");
      } else if (key == "seed") {
        spec.seed = parse_uint(value, "seed");
      } else if (key == "pin_depot") {
        spec.pin_depot = parse_int(value, "pin_depot") != 0;
      } else if (key == "agent") {
        spec.agent = static_cast<int>(parse_int(value, "agent"));
      } else if (key == "capacity") {
        spec.new_capacity = parse_double(value, "capacity");
      } else {
        throw ParseError("perturbation spec: unknown key '" + key + "'");
      }
    }
  }
  if (!kind_seen) throw ParseError("perturbation spec: missing kind");
  if (spec.kind == PerturbationSpec::Kind::spatial && spec.xi < 0)
    throw ParseError("perturbation spec: xi must be >= 0");
  if (spec.kind == PerturbationSpec::Kind::capacity && spec.new_capacity <= 0)
    throw ParseError("perturbation spec: capacity must be > 0");
  return spec;
}

void write_perturbation_spec(std::ostream& out, const PerturbationSpec& spec) {
  if (spec.kind == PerturbationSpec::Kind::spatial) {
    out << "kind=spatial xi=" << format_double(spec.xi) << " seed=" << spec.seed;
    if (spec.pin_depot) out << " pin_depot=1";
    out << "\n";
  } else {
    out << "kind=capacity agent=" << spec.agent
        << " capacity=" << format_double(spec.new_capacity) << "\n";
  }
}

PerturbationSpec read_perturbation_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open perturbation spec '" + path + "'");
  return read_perturbation_spec(in);
}

void write_perturbation_spec_file(const std::string& path, const PerturbationSpec& spec) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write perturbation spec '" + path + "'");
  write_perturbation_spec(out, spec);
  if (!out.flush()) throw IoError("failed writing perturbation spec '" + path + "'");
}

Instance apply_spatial_perturbation(const Instance& inst, double xi, std::uint64_t seed,
                                    bool pin_depot) {
  if (xi < 0) throw ValidationError("xi must be >= 0");
  Instance out = inst;
  if (xi == 0) return out;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = xmax;
  for (const auto& loc : inst.locations) {
    xmin = std::min(xmin, loc.x);
    xmax = std::max(xmax, loc.x);
    ymin = std::min(ymin, loc.y);
    ymax = std::max(ymax, loc.y);
  }
  const double range_x = xmax - xmin;
  const double range_y = ymax - ymin;

  std::mt19937_64 rng(seed);
  for (auto& loc : out.locations) {
    if (pin_depot && loc.id == Instance::depot) continue;
    loc.x += (2.0 * uniform01(rng) - 1.0) * xi * range_x;
    loc.y += (2.0 * uniform01(rng) - 1.0) * xi * range_y;
  }
  out.distances = DistanceMatrix(out.locations);
  return out;
}

Instance apply_capacity_perturbation(const Instance& inst, int agent, double new_capacity) {
  if (agent < 0 || agent >= inst.n_agents())
    throw ValidationError("agent index " + std::to_string(agent) + " out of range");
  if (new_capacity <= 0) throw ValidationError("capacity must be > 0");
  Instance out = inst;
  out.agent_capacities[agent] = new_capacity;
  return out;
}

Instance apply_perturbation(const Instance& inst, const PerturbationSpec& spec) {
  if (spec.kind == PerturbationSpec::Kind::spatial)
    return apply_spatial_perturbation(inst, spec.xi, spec.seed, spec.pin_depot);
  return apply_capacity_perturbation(inst, spec.agent, spec.new_capacity);
}

std::vector<NodeId> rank_leaves(const SearchTree& tree) {
  std::vector<NodeId> leaves;
  for (const auto& nd : tree.nodes())
    if (nd.children.empty() && nd.visits > 0) leaves.push_back(nd.id);
  if (leaves.empty()) throw Error("tree has no visited leaves; was it ever searched?");
  std::sort(leaves.begin(), leaves.end(), [&tree](NodeId a, NodeId b) {
    const auto& na = tree.node(a);
    const auto& nb = tree.node(b);
    const double avg_a = na.cost_sum / static_cast<double>(na.visits);
    const double avg_b = nb.cost_sum / static_cast<double>(nb.visits);
    if (avg_a != avg_b) return avg_a < avg_b;
    return a < b;
  });
  return leaves;
}

SearchTree clone_topology(const SearchTree& tree, std::uint64_t seed) {
  SearchTree clone(tree.n_tasks(), tree.n_agents(), seed);
  clone.set_task_order(tree.task_order());
  for (const auto& nd : tree.nodes()) {
    if (nd.parent == kNoNode) continue;
    const NodeId id = clone.add_child(nd.parent, nd.agent_choice);
    if (id != nd.id) throw Error("tree nodes are not in creation order");
  }
  return clone;
}

std::size_t percentile_count(double k, std::size_t count) {
  if (count == 0) return 0;
  const double product = k * static_cast<double>(count);
  auto m = static_cast<std::size_t>(std::ceil(std::nextafter(product, 0.0)));
  return std::clamp<std::size_t>(m, 1, count);
}

ReevaluateResult reevaluate_leaves(SearchTree& tree, const Instance& inst,
                                   std::span<const NodeId> ranked, double k, int r,
                                   ConvergenceTrace* trace, const PricingFn& pricing) {
  if (ranked.empty()) throw Error("reevaluate_leaves: ranked leaf list is empty");
  if (!(k > 0.0 && k <= 1.0)) throw ValidationError("k must lie in (0, 1]");

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed_ns = [&start] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - start).count();
  };

  ReevaluateResult result;
  const std::size_t m = percentile_count(k, ranked.size());

  for (std::size_t i = 0; i < m; ++i) {
    const NodeId leaf = ranked[i];
    ++result.leaves_processed;
    LeafRepricing rep;
    rep.leaf = leaf;
    rep.terminal = tree.is_terminal(leaf);
    rep.best_cost = std::numeric_limits<double>::quiet_NaN();

    const double before = tree.incumbent() ? tree.incumbent()->cost
                                           : std::numeric_limits<double>::infinity();
    std::vector<double> costs;
    if (rep.terminal) {
      try {
        const Assignment assignment = tree.assignment_prefix(leaf);
        const double cost = price_with(pricing, inst, assignment);
        tree.record_completion(cost, assignment);
        costs.push_back(cost);
      } catch (const InfeasibleError&) {
        rep.failed = 1;
        tree.node(leaf).dead = true;
      }
    } else {
      auto rollout_result = rollout(tree, inst, leaf, r, pricing);
      costs = std::move(rollout_result.costs);
      rep.failed = rollout_result.failed;
    }

    rep.priced = static_cast<std::int64_t>(costs.size());
    if (!costs.empty()) rep.best_cost = *std::min_element(costs.begin(), costs.end());
    result.completions += rep.priced;
    result.failed_completions += rep.failed;

    double running = before;
    for (double cost : costs)
      if (cost < running) {
        running = cost;
        if (trace)
          trace->add(static_cast<std::int64_t>(i) + 1, elapsed_ns(), cost, Phase::reevaluation);
      }
    backpropagate(tree, leaf, std::span<const double>(costs));
    result.repricings.push_back(std::move(rep));
  }
  return result;
}

ReplanResult replan(const SearchTree& nominal_tree, const Instance& perturbed_inst,
                    const ReplanParams& rp, const SearchParams& sp, const PricingFn& pricing) {
  if (perturbed_inst.n_tasks() != nominal_tree.n_tasks())
    throw TopologyError("perturbed instance has " + std::to_string(perturbed_inst.n_tasks()) +
                        " tasks but the nominal tree was built for " +
                        std::to_string(nominal_tree.n_tasks()));
  if (perturbed_inst.n_agents() != nominal_tree.n_agents())
    throw TopologyError("perturbed instance has " + std::to_string(perturbed_inst.n_agents()) +
                        " agents but the nominal tree was built for " +
                        std::to_string(nominal_tree.n_agents()));

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  const auto ranked = rank_leaves(nominal_tree);
  SearchTree warm = clone_topology(nominal_tree, sp.seed);

  ConvergenceTrace trace;
  ReevaluateResult reevaluation =
      reevaluate_leaves(warm, perturbed_inst, ranked, rp.k, rp.rollouts, &trace, pricing);

  MctsOptions opts;
  opts.trace = &trace;
  opts.phase = Phase::search;
  opts.iteration_offset = reevaluation.leaves_processed;
  opts.elapsed_offset_ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - start).count();
  opts.pricing = pricing;
  MctsStats search_stats = run_mcts(warm, perturbed_inst, sp, opts);

  return ReplanResult{warm.incumbent(), std::move(trace), std::move(warm),
                      std::move(reevaluation), search_stats};
}

}  // namespace mpdvrp
