#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mpdvrp/error.hpp"
#include "mpdvrp/instance.hpp"
#include "mpdvrp/instance_io.hpp"
#include "mpdvrp/oracle.hpp"
#include "mpdvrp/replan.hpp"
#include "mpdvrp/routing.hpp"
#include "mpdvrp/search.hpp"
#include "mpdvrp/solution.hpp"
#include "mpdvrp/trace.hpp"
#include "mpdvrp/tree_io.hpp"
#include "mpdvrp/tsplib.hpp"

namespace py = pybind11;
using namespace mpdvrp;

namespace {

SearchParams make_params(double gamma, int rollouts, std::optional<std::int64_t> budget_iters,
                         std::optional<std::int64_t> budget_ms, std::uint64_t seed) {
  SearchParams sp;
  sp.gamma = gamma;
  sp.rollouts = rollouts;
  sp.budget.iterations = budget_iters;
  sp.budget.wall_ms = budget_ms;
  sp.seed = seed;
  return sp;
}

py::list trace_rows(const ConvergenceTrace& trace) {
  py::list rows;
  for (const auto& r : trace.rows)
    rows.append(py::make_tuple(r.iteration, r.elapsed_ns, r.incumbent_cost, phase_name(r.phase)));
  return rows;
}

}  // namespace

PYBIND11_MODULE(_mpdvrp, m) {
  m.doc() = "m-PDVRP solver: MCTS task assignment, greedy routing, warm-restart replanning";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception<TopologyError>(m, "TopologyError", PyExc_ValueError);
  py::register_exception<CapError>(m, "CapError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<Location>(m, "Location")
      .def(py::init<int, double, double>(), py::arg("id"), py::arg("x"), py::arg("y"))
      .def_readwrite("id", &Location::id)
      .def_readwrite("x", &Location::x)
      .def_readwrite("y", &Location::y)
      .def("__repr__", [](const Location& l) {
        std::ostringstream s;
        s << "Location(" << l.id << ", " << l.x << ", " << l.y << ")";
        return s.str();
      });

  py::class_<TaskPair>(m, "TaskPair")
      .def_readonly("task_id", &TaskPair::task_id)
      .def_readonly("pickup_node", &TaskPair::pickup_node)
      .def_readonly("delivery_node", &TaskPair::delivery_node)
      .def_readonly("mass", &TaskPair::mass);

  py::class_<AgentType>(m, "AgentType")
      .def(py::init<int, double, int>(), py::arg("type_id"), py::arg("capacity"), py::arg("count"))
      .def_readwrite("type_id", &AgentType::type_id)
      .def_readwrite("capacity", &AgentType::capacity)
      .def_readwrite("count", &AgentType::count);

  py::class_<FleetSpec>(m, "FleetSpec")
      .def(py::init([](const std::vector<AgentType>& types) {
             FleetSpec f;
             f.agent_types = types;
             return f;
           }),
           py::arg("agent_types"))
      .def_readwrite("agent_types", &FleetSpec::agent_types)
      .def("total_agents", &FleetSpec::total_agents);

  py::class_<Instance>(m, "Instance")
      .def_readonly("locations", &Instance::locations)
      .def_readonly("tasks", &Instance::tasks)
      .def_readonly("fleet", &Instance::fleet)
      .def_readonly("agent_capacities", &Instance::agent_capacities)
      .def_property_readonly("n_tasks", &Instance::n_tasks)
      .def_property_readonly("n_nodes", &Instance::n_nodes)
      .def_property_readonly("n_agents", &Instance::n_agents)
      .def("distance", [](const Instance& i, int a, int b) { return i.distances(a, b); },
           py::arg("i"), py::arg("j"))
      .def("pickup_of", &Instance::pickup_of, py::arg("task"))
      .def("delivery_of", &Instance::delivery_of, py::arg("task"));

  py::class_<Tour>(m, "Tour")
      .def_readonly("agent", &Tour::agent)
      .def_readonly("visits", &Tour::visits)
      .def_readonly("cost", &Tour::cost);

  py::class_<Assignment>(m, "Assignment")
      .def(py::init([](const std::vector<int>& agent_of) {
             Assignment a;
             a.agent_of = agent_of;
             return a;
           }),
           py::arg("agent_of"))
      .def_readonly("agent_of", &Assignment::agent_of)
      .def("complete", &Assignment::complete);

  py::class_<Incumbent>(m, "Incumbent")
      .def_readonly("cost", &Incumbent::cost)
      .def_readonly("assignment", &Incumbent::assignment);

  py::class_<SearchTree>(m, "SearchTree")
      .def_property_readonly("n_tasks", &SearchTree::n_tasks)
      .def_property_readonly("n_agents", &SearchTree::n_agents)
      .def_property_readonly("size", &SearchTree::size)
      .def_property_readonly("incumbent",
                             [](const SearchTree& t) -> std::optional<Incumbent> {
                               return t.incumbent();
                             })
      .def("save", [](const SearchTree& t, const std::string& path) {
        write_tree_snapshot_file(path, t);
      });

  py::class_<PerturbationSpec>(m, "PerturbationSpec")
      .def_static("spatial",
                  [](double xi, std::uint64_t seed, bool pin_depot) {
                    PerturbationSpec s;
                    s.kind = PerturbationSpec::Kind::spatial;
                    s.xi = xi;
                    s.seed = seed;
                    s.pin_depot = pin_depot;
                    return s;
                  },
                  py::arg("xi"), py::arg("seed"), py::arg("pin_depot") = false)
      .def_static("capacity", [](int agent, double new_capacity) {
        PerturbationSpec s;
        s.kind = PerturbationSpec::Kind::capacity;
        s.agent = agent;
        s.new_capacity = new_capacity;
        return s;
      });

  m.def("parse_tsplib",
        [](const std::string& text) {
          std::istringstream in(text);
          return parse_tsplib(in);
        },
        py::arg("text"), "Parse TSPLIB EUC_2D text into a list of locations.");
  m.def("parse_tsplib_file",
        [](const std::string& path) { return parse_tsplib_file(path); }, py::arg("path"));
  m.def("build_pd_instance", &build_pd_instance, py::arg("coords"), py::arg("fleet"));
  m.def("validate_instance", &validate_instance, py::arg("instance"));
  m.def("read_instance_file", &read_instance_file, py::arg("path"));
  m.def("write_instance_file", &write_instance_file, py::arg("path"), py::arg("instance"));

  m.def("tour_cost",
        [](const std::vector<int>& visits, const Instance& inst) {
          return tour_cost(visits, inst.distances);
        },
        py::arg("visits"), py::arg("instance"));
  m.def("nnh_tour", &nnh_tour, py::arg("instance"), py::arg("assigned_tasks"),
        py::arg("capacity"));
  m.def("check_tour_feasible",
        [](const Tour& tour, const Instance& inst, double capacity) {
          std::vector<std::string> out;
          for (const auto& v : check_tour_feasible(tour, inst, capacity))
            out.push_back("step " + std::to_string(v.step) + ": " + v.detail);
          return out;
        },
        py::arg("tour"), py::arg("instance"), py::arg("capacity"));

  m.def("assignment_cost",
        [](const Instance& inst, const std::vector<int>& agent_of) {
          Assignment a;
          a.agent_of = agent_of;
          return assignment_cost(inst, a);
        },
        py::arg("instance"), py::arg("agent_of"));

  m.def("solve",
        [](const Instance& inst, double gamma, int rollouts,
           std::optional<std::int64_t> budget_iters, std::optional<std::int64_t> budget_ms,
           std::uint64_t seed) {
          SearchTree tree(inst.n_tasks(), inst.n_agents(), seed);
          ConvergenceTrace trace;
          MctsOptions opts;
          opts.trace = &trace;
          opts.phase = Phase::nominal;
          run_mcts(tree, inst, make_params(gamma, rollouts, budget_iters, budget_ms, seed), opts);
          py::dict out;
          out["incumbent"] = tree.incumbent();
          out["trace"] = trace_rows(trace);
          out["tree"] = py::cast(std::move(tree));
          return out;
        },
        py::arg("instance"), py::arg("gamma") = 0.7071067811865476, py::arg("rollouts") = 20,
        py::arg("budget_iters") = std::nullopt, py::arg("budget_ms") = std::nullopt,
        py::arg("seed") = 0,
        "Run MCTS from a fresh tree; returns dict with incumbent, trace rows and the tree.");

  m.def("load_tree", &read_tree_snapshot_file, py::arg("path"));
  m.def("apply_perturbation", &apply_perturbation, py::arg("instance"), py::arg("spec"));
  m.def("apply_spatial_perturbation", &apply_spatial_perturbation, py::arg("instance"),
        py::arg("xi"), py::arg("seed"), py::arg("pin_depot") = false);
  m.def("apply_capacity_perturbation", &apply_capacity_perturbation, py::arg("instance"),
        py::arg("agent"), py::arg("new_capacity"));

  m.def("replan",
        [](const SearchTree& nominal, const Instance& perturbed, double k, int rollouts,
           double gamma, std::optional<std::int64_t> budget_iters,
           std::optional<std::int64_t> budget_ms, std::uint64_t seed) {
          ReplanParams rp;
          rp.k = k;
          rp.rollouts = rollouts;
          ReplanResult result = replan(nominal, perturbed, rp,
                                       make_params(gamma, rollouts, budget_iters, budget_ms, seed));
          py::dict out;
          out["incumbent"] = result.incumbent;
          out["trace"] = trace_rows(result.trace);
          out["reeval_leaves"] = result.reevaluation.leaves_processed;
          out["tree"] = py::cast(std::move(result.tree));
          return out;
        },
        py::arg("nominal_tree"), py::arg("perturbed_instance"), py::arg("k") = 0.05,
        py::arg("rollouts") = 20, py::arg("gamma") = 0.7071067811865476,
        py::arg("budget_iters") = std::nullopt, py::arg("budget_ms") = std::nullopt,
        py::arg("seed") = 0,
        "Warm-restart pipeline on a perturbed instance; returns dict with incumbent and trace.");

  m.def("exact_mpdtsp",
        [](const Instance& inst, const std::vector<int>& tasks, double capacity, int max_tasks) {
          return exact_mpdtsp(inst, tasks, capacity, max_tasks);
        },
        py::arg("instance"), py::arg("assigned_tasks"), py::arg("capacity"),
        py::arg("max_tasks") = 12);
  m.def("exact_solve",
        [](const Instance& inst, int max_tasks, int max_agents) {
          const ExactResult res = exact_solve(inst, max_tasks, max_agents);
          py::dict out;
          out["cost"] = res.cost;
          out["assignment"] = res.assignment.agent_of;
          out["tours"] = res.tours;
          return out;
        },
        py::arg("instance"), py::arg("max_tasks") = 6, py::arg("max_agents") = 3);
}
