#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpdvrp/error.hpp"
#include "mpdvrp/instance.hpp"
#include "mpdvrp/instance_io.hpp"
#include "mpdvrp/oracle.hpp"
#include "mpdvrp/replan.hpp"
#include "mpdvrp/search.hpp"
#include "mpdvrp/solution.hpp"
#include "mpdvrp/text_io.hpp"
#include "mpdvrp/trace.hpp"
#include "mpdvrp/tree_io.hpp"
#include "mpdvrp/tsplib.hpp"

namespace {

using namespace mpdvrp;

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 2,
  exit_io = 3,
  exit_validation = 4,
  exit_infeasible = 5,
  exit_cap = 6,
};

struct CommonOpts {
  std::string in_path;
  std::string out_prefix;
  double gamma = 0.7071067811865476;
  int rollouts = 20;
  double k = 0.05;
  std::int64_t budget_iters = -1;
  std::int64_t budget_ms = -1;
  std::uint64_t seed = 0;
  bool timing = false;
};

struct PerturbOpts {
  std::string spec_path;
  double xi = -1.0;
  std::uint64_t seed = 0;
  bool pin_depot = false;
  std::string capacity;  // "agent=value"
};

void add_search_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--gamma", o.gamma, "LCB exploration constant");
  cmd->add_option("--rollouts", o.rollouts, "rollouts per evaluation")->check(CLI::PositiveNumber);
  cmd->add_option("--budget-iters", o.budget_iters, "iteration budget");
  cmd->add_option("--budget-ms", o.budget_ms, "wall-clock budget in milliseconds");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_flag("--timing", o.timing, "record real elapsed time in trace files (nondeterministic)");
}

void add_perturb_flags(CLI::App* cmd, PerturbOpts& p) {
  cmd->add_option("--spec", p.spec_path, "perturbation spec file");
  cmd->add_option("--xi", p.xi, "box-uncertainty fraction for a spatial perturbation");
  cmd->add_option("--perturb-seed", p.seed, "spatial draw seed");
  cmd->add_flag("--pin-depot", p.pin_depot, "keep the depot fixed under spatial perturbation");
  cmd->add_option("--capacity", p.capacity, "capacity override as <agent>=<value>");
}

Budget make_budget(const CommonOpts& o) {
  Budget b;
  if (o.budget_iters >= 0) b.iterations = o.budget_iters;
  if (o.budget_ms >= 0) b.wall_ms = o.budget_ms;
  if (!b.iterations && !b.wall_ms)
    throw CLI::ValidationError("budget", "one of --budget-iters/--budget-ms is required");
  return b;
}

SearchParams make_search_params(const CommonOpts& o) {
  SearchParams sp;
  sp.gamma = o.gamma;
  sp.rollouts = o.rollouts;
  sp.budget = make_budget(o);
  sp.seed = o.seed;
  return sp;
}

PerturbationSpec make_perturbation(const PerturbOpts& p) {
  const bool has_spatial = p.xi >= 0.0;
  const bool has_capacity = !p.capacity.empty();
  const bool has_file = !p.spec_path.empty();
  if (has_file + has_spatial + has_capacity != 1)
    throw CLI::ValidationError("perturbation",
                               "give exactly one of --spec, --xi or --capacity");
  if (has_file) return read_perturbation_spec_file(p.spec_path);
  PerturbationSpec spec;
  if (has_spatial) {
    spec.kind = PerturbationSpec::Kind::spatial;
    spec.xi = p.xi;
    spec.seed = p.seed;
    spec.pin_depot = p.pin_depot;
  } else {
    const auto eq = p.capacity.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--capacity", "expected <agent>=<value>");
    spec.kind = PerturbationSpec::Kind::capacity;
    spec.agent = static_cast<int>(parse_int(p.capacity.substr(0, eq), "agent index"));
    spec.new_capacity = parse_double(p.capacity.substr(eq + 1), "capacity");
  }
  return spec;
}

FleetSpec parse_fleet(const std::string& text) {
  FleetSpec fleet;
  std::size_t start = 0;
  int type_id = 1;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    const std::string group =
        text.substr(start, comma == std::string::npos ? comma : comma - start);
    const auto x = group.find('x');
    if (x == std::string::npos)
      throw CLI::ValidationError("--fleet", "expected <capacity>x<count>[,...], got '" + group + "'");
    AgentType t;
    t.type_id = type_id++;
    t.capacity = parse_double(group.substr(0, x), "fleet capacity");
    t.count = static_cast<int>(parse_int(group.substr(x + 1), "fleet count"));
    fleet.agent_types.push_back(t);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fleet;
}

Instance load_instance_checked(const std::string& path) {
  Instance inst = read_instance_file(path);
  const auto report = validate_instance(inst);
  if (!report.empty()) {
    std::string msg = "instance '" + path + "' is invalid:";
    for (const auto& line : report) msg += "\n  " + line;
    throw ValidationError(msg);
  }
  return inst;
}

void ensure_output_dir(const std::string& prefix) {
  const auto parent = std::filesystem::path(prefix).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

void write_run_outputs(const std::string& prefix, const Instance& inst,
                       const std::optional<Incumbent>& incumbent, const ConvergenceTrace& trace,
                       bool timing) {
  Solution sol;
  if (incumbent) sol = solution_from_incumbent(inst, *incumbent);
  write_solution_file(prefix + ".solution", sol);
  write_trace_csv_file(prefix + ".trace.csv", trace, timing);
  if (incumbent)
    std::cout << "cost " << format_double(incumbent->cost) << "\n";
  else
    std::cout << "no solution found\n";
}

std::vector<std::int64_t> checkpoint_grid(std::int64_t budget) {
  std::vector<std::int64_t> grid;
  for (std::int64_t decade = 1; decade <= budget; decade *= 10)
    for (std::int64_t mult : {1, 2, 5}) {
      const std::int64_t c = decade * mult;
      if (c <= budget) grid.push_back(c);
    }
  if (grid.empty() || grid.back() != budget) grid.push_back(budget);
  return grid;
}

int cmd_gen(const std::string& in, const std::string& fleet_text, const std::string& prefix) {
  std::vector<std::string> warnings;
  const auto coords = parse_tsplib_file(in, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  const Instance inst = build_pd_instance(coords, parse_fleet(fleet_text));
  ensure_output_dir(prefix);
  write_instance_file(prefix + ".instance", inst);
  std::cout << "wrote " << prefix << ".instance (" << inst.n_tasks() << " tasks, "
            << inst.n_agents() << " agents)\n";
  return exit_ok;
}

int cmd_solve(const CommonOpts& o) {
  const Instance inst = load_instance_checked(o.in_path);
  SearchTree tree(inst.n_tasks(), inst.n_agents(), o.seed);
  ConvergenceTrace trace;
  MctsOptions opts;
  opts.trace = &trace;
  opts.phase = Phase::nominal;
  run_mcts(tree, inst, make_search_params(o), opts);
  ensure_output_dir(o.out_prefix);
  write_tree_snapshot_file(o.out_prefix + ".tree", tree);
  write_run_outputs(o.out_prefix, inst, tree.incumbent(), trace, o.timing);
  return exit_ok;
}

int cmd_perturb(const CommonOpts& o, const PerturbOpts& p) {
  const Instance inst = load_instance_checked(o.in_path);
  const PerturbationSpec spec = make_perturbation(p);
  const Instance perturbed = apply_perturbation(inst, spec);
  ensure_output_dir(o.out_prefix);
  write_instance_file(o.out_prefix + ".instance", perturbed);
  write_perturbation_spec_file(o.out_prefix + ".spec", spec);
  std::cout << "wrote " << o.out_prefix << ".instance\n";
  return exit_ok;
}

int cmd_replan(const CommonOpts& o, const PerturbOpts& p, const std::string& tree_path) {
  const Instance inst = load_instance_checked(o.in_path);
  const SearchTree nominal = read_tree_snapshot_file(tree_path);
  if (nominal.n_tasks() != inst.n_tasks() || nominal.n_agents() != inst.n_agents())
    throw TopologyError("tree snapshot '" + tree_path + "' does not match instance '" +
                        o.in_path + "'");
  const Instance perturbed = apply_perturbation(inst, make_perturbation(p));

  ReplanParams rp;
  rp.k = o.k;
  rp.rollouts = o.rollouts;
  ReplanResult result = replan(nominal, perturbed, rp, make_search_params(o));

  ensure_output_dir(o.out_prefix);
  write_tree_snapshot_file(o.out_prefix + ".tree", result.tree);
  write_run_outputs(o.out_prefix, perturbed, result.incumbent, result.trace, o.timing);
  return exit_ok;
}

int cmd_restart(const CommonOpts& o, const PerturbOpts& p) {
  Instance inst = load_instance_checked(o.in_path);
  const bool has_perturbation = !p.spec_path.empty() || p.xi >= 0.0 || !p.capacity.empty();
  if (has_perturbation) inst = apply_perturbation(inst, make_perturbation(p));

  SearchTree tree(inst.n_tasks(), inst.n_agents(), o.seed);
  ConvergenceTrace trace;
  MctsOptions opts;
  opts.trace = &trace;
  opts.phase = Phase::nominal;
  run_mcts(tree, inst, make_search_params(o), opts);
  ensure_output_dir(o.out_prefix);
  write_run_outputs(o.out_prefix, inst, tree.incumbent(), trace, o.timing);
  return exit_ok;
}

int cmd_compare(const CommonOpts& o, const std::string& tree_path, const PerturbOpts& p,
                std::vector<std::uint64_t> seeds, std::string checkpoints_text) {
  if (seeds.empty()) throw CLI::ValidationError("--seeds", "at least one seed is required");
  if (o.budget_iters < 0)
    throw CLI::ValidationError("--budget-iters", "compare needs an iteration budget");
  const bool spatial = p.xi >= 0.0;
  if (!spatial && p.capacity.empty())
    throw CLI::ValidationError("perturbation", "compare needs --xi or --capacity");

  const Instance inst = load_instance_checked(o.in_path);
  const SearchTree nominal = read_tree_snapshot_file(tree_path);
  if (nominal.n_tasks() != inst.n_tasks() || nominal.n_agents() != inst.n_agents())
    throw TopologyError("tree snapshot '" + tree_path + "' does not match instance '" +
                        o.in_path + "'");

  std::vector<std::int64_t> checkpoints;
  if (checkpoints_text.empty()) {
    checkpoints = checkpoint_grid(o.budget_iters);
  } else {
    std::size_t start = 0;
    while (start <= checkpoints_text.size()) {
      auto comma = checkpoints_text.find(',', start);
      checkpoints.push_back(parse_int(
          checkpoints_text.substr(start, comma == std::string::npos ? comma : comma - start),
          "checkpoint"));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }

  // re-evaluation consumes part of the warm method's budget
  std::size_t visited_leaves = 0;
  for (const auto& nd : nominal.nodes())
    if (nd.children.empty() && nd.visits > 0) ++visited_leaves;
  const auto reeval_iters =
      static_cast<std::int64_t>(percentile_count(o.k, visited_leaves));

  ensure_output_dir(o.out_prefix);
  std::vector<ConvergenceTrace> warm_traces, cold_traces;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::uint64_t seed = seeds[i];
    PerturbOpts per_seed = p;
    per_seed.seed = seed;
    const Instance perturbed = apply_perturbation(inst, make_perturbation(per_seed));

    CommonOpts warm_opts = o;
    warm_opts.seed = seed;
    warm_opts.budget_iters = std::max<std::int64_t>(0, o.budget_iters - reeval_iters);
    ReplanParams rp;
    rp.k = o.k;
    rp.rollouts = o.rollouts;
    ReplanResult warm = replan(nominal, perturbed, rp, make_search_params(warm_opts));

    SearchTree cold_tree(perturbed.n_tasks(), perturbed.n_agents(), seed);
    ConvergenceTrace cold_trace;
    MctsOptions cold_run;
    cold_run.trace = &cold_trace;
    cold_run.phase = Phase::nominal;
    CommonOpts cold_opts = o;
    cold_opts.seed = seed;
    run_mcts(cold_tree, perturbed, make_search_params(cold_opts), cold_run);

    const std::string seed_prefix = o.out_prefix + ".seed" + std::to_string(seed);
    write_trace_csv_file(seed_prefix + ".warm.trace.csv", warm.trace, o.timing);
    write_trace_csv_file(seed_prefix + ".cold.trace.csv", cold_trace, o.timing);
    warm_traces.push_back(std::move(warm.trace));
    cold_traces.push_back(std::move(cold_trace));
  }

  std::ofstream agg(o.out_prefix + ".aggregate.csv");
  if (!agg) throw IoError("cannot write aggregate file");
  agg << "checkpoint,warm_q25,warm_median,warm_q75,cold_q25,cold_median,cold_q75\n";
  for (const std::int64_t c : checkpoints) {
    auto collect = [c](const std::vector<ConvergenceTrace>& traces) {
      std::vector<double> values;
      for (const auto& t : traces) {
        const double v = incumbent_at(t, c);
        if (!std::isnan(v)) values.push_back(v);
      }
      return values;
    };
    const auto warm_vals = collect(warm_traces);
    const auto cold_vals = collect(cold_traces);
    agg << c << "," << format_double(quantile(warm_vals, 0.25)) << ","
        << format_double(quantile(warm_vals, 0.5)) << ","
        << format_double(quantile(warm_vals, 0.75)) << ","
        << format_double(quantile(cold_vals, 0.25)) << ","
        << format_double(quantile(cold_vals, 0.5)) << ","
        << format_double(quantile(cold_vals, 0.75)) << "\n";
  }
  if (!agg.flush()) throw IoError("failed writing aggregate file");
  std::cout << "wrote " << o.out_prefix << ".aggregate.csv (" << seeds.size() << " seeds)\n";
  return exit_ok;
}

int cmd_oracle(const CommonOpts& o, int max_tasks, int max_agents) {
  const Instance inst = load_instance_checked(o.in_path);
  ensure_output_dir(o.out_prefix);
  Solution sol;
  try {
    sol = solution_from_exact(exact_solve(inst, max_tasks, max_agents));
  } catch (const InfeasibleError& e) {
    sol.status = Solution::Status::infeasible;
    write_solution_file(o.out_prefix + ".solution", sol);
    std::cout << "infeasible: " << e.what() << "\n";
    return exit_ok;
  }
  write_solution_file(o.out_prefix + ".solution", sol);
  std::cout << "cost " << format_double(sol.cost) << "\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anytime m-PDVRP solver with warm-restart replanning"};
  app.require_subcommand(1);

  CommonOpts opts;
  PerturbOpts perturb;
  std::string fleet_text = "10x2";
  std::string tree_path;
  std::string checkpoints_text;
  std::vector<std::uint64_t> seeds;
  int max_tasks = 6, max_agents = 3;

  auto* gen = app.add_subcommand("gen", "convert a TSPLIB file into an instance file");
  gen->add_option("--in", opts.in_path, "TSPLIB file")->required();
  gen->add_option("--fleet", fleet_text, "fleet as <capacity>x<count>[,...]");
  gen->add_option("--out-prefix", opts.out_prefix, "output prefix")->required();

  auto* solve = app.add_subcommand("solve", "solve an instance with MCTS from a fresh tree");
  solve->add_option("--in", opts.in_path, "instance file")->required();
  solve->add_option("--out-prefix", opts.out_prefix)->required();
  add_search_flags(solve, opts);

  auto* pert = app.add_subcommand("perturb", "apply a perturbation to an instance");
  pert->add_option("--in", opts.in_path, "instance file")->required();
  pert->add_option("--out-prefix", opts.out_prefix)->required();
  add_perturb_flags(pert, perturb);

  auto* rep = app.add_subcommand("replan", "warm-restart on a perturbed problem from a snapshot");
  rep->add_option("--in", opts.in_path, "nominal instance file")->required();
  rep->add_option("--tree", tree_path, "nominal tree snapshot")->required();
  rep->add_option("--out-prefix", opts.out_prefix)->required();
  rep->add_option("--k", opts.k, "leaf percentile to re-evaluate");
  add_perturb_flags(rep, perturb);
  add_search_flags(rep, opts);

  auto* res = app.add_subcommand("restart", "solve a perturbed problem from scratch");
  res->add_option("--in", opts.in_path, "instance file (perturbed, or nominal with a spec)")
      ->required();
  res->add_option("--out-prefix", opts.out_prefix)->required();
  add_perturb_flags(res, perturb);
  add_search_flags(res, opts);

  auto* cmp = app.add_subcommand("compare", "replan vs restart over a seed list");
  cmp->add_option("--in", opts.in_path, "nominal instance file")->required();
  cmp->add_option("--tree", tree_path, "nominal tree snapshot")->required();
  cmp->add_option("--out-prefix", opts.out_prefix)->required();
  cmp->add_option("--seeds", seeds, "perturbation/solver seeds")->required()->delimiter(',');
  cmp->add_option("--k", opts.k, "leaf percentile to re-evaluate");
  cmp->add_option("--checkpoints", checkpoints_text, "comma-separated iteration checkpoints");
  add_perturb_flags(cmp, perturb);
  add_search_flags(cmp, opts);

  auto* orc = app.add_subcommand("oracle", "exact solve of a small instance");
  orc->add_option("--in", opts.in_path, "instance file")->required();
  orc->add_option("--out-prefix", opts.out_prefix)->required();
  orc->add_option("--max-tasks", max_tasks, "task cap");
  orc->add_option("--max-agents", max_agents, "agent cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (gen->parsed()) return cmd_gen(opts.in_path, fleet_text, opts.out_prefix);
    if (solve->parsed()) return cmd_solve(opts);
    if (pert->parsed()) return cmd_perturb(opts, perturb);
    if (rep->parsed()) return cmd_replan(opts, perturb, tree_path);
    if (res->parsed()) return cmd_restart(opts, perturb);
    if (cmp->parsed()) return cmd_compare(opts, tree_path, perturb, seeds, checkpoints_text);
    if (orc->parsed()) return cmd_oracle(opts, max_tasks, max_agents);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const CapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_cap;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_infeasible;
  } catch (const TopologyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_ok;
}
