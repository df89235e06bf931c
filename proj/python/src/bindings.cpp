#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "spa/advise.hpp"
#include "spa/bench.hpp"
#include "spa/blocks.hpp"
#include "spa/engine.hpp"
#include "spa/io.hpp"
#include "spa/library.hpp"
#include "spa/retract.hpp"

namespace py = pybind11;
using namespace spa;

namespace {

std::vector<std::string> strs(const std::vector<Literal>& ls) {
  std::vector<std::string> out;
  for (const auto& l : ls) out.push_back(l.str());
  return out;
}

struct Outcome {
  std::optional<Plan> plan;
  SearchStats stats;
  bool limit_reached = false;
  std::optional<std::string> retrieved;
  std::optional<PlanLibrary> library;
};

Outcome solve(const PlanningProblem& problem, const std::optional<PlanLibrary>& library, const std::string& mode,
              const std::string& hooks, const std::string& strategy, const std::string& fit,
              std::size_t depth_bound, std::size_t node_limit, bool store_solution) {
  SearchOptions opts;
  if (strategy == "dfid")
    opts.strategy = Strategy::IterativeDeepening;
  else if (strategy != "bfs")
    throw ValidationError("strategy must be bfs or dfid");
  opts.depth_bound = depth_bound;
  opts.node_limit = node_limit;
  const ControlHooks h = hooks_by_name(hooks);
  Outcome out;
  py::gil_scoped_release release;
  if (mode == "generative") {
    auto r = plan_generatively(problem, h, opts);
    out.plan = std::move(r.solution);
    out.stats = r.stats;
    out.limit_reached = r.limit_reached;
  } else if (mode == "adaptive") {
    AdaptOptions a;
    if (fit == "conservative")
      a.fit = FitMode::Conservative;
    else if (fit != "generous")
      throw ValidationError("fit must be conservative or generous");
    a.store = store_solution ? StorePolicy::Always : StorePolicy::Never;
    auto r = plan_adaptively(problem, library.value_or(PlanLibrary{}), h, opts, a);
    out.plan = std::move(r.search.solution);
    out.stats = r.search.stats;
    out.limit_reached = r.search.limit_reached;
    out.retrieved = r.retrieved;
    out.library = std::move(r.library);
  } else {
    throw ValidationError("mode must be generative or adaptive");
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Plan-space planning with plan adaptation by retraction and refinement";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const ContractError& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  py::class_<ActionSchema>(m, "ActionSchema")
      .def_property_readonly("head", [](const ActionSchema& a) { return a.head.str(); })
      .def_property_readonly("preconds", [](const ActionSchema& a) { return strs(a.preconds); })
      .def_property_readonly("adds", [](const ActionSchema& a) { return strs(a.adds); })
      .def_property_readonly("deletes", [](const ActionSchema& a) { return strs(a.deletes); })
      .def("__repr__", [](const ActionSchema& a) { return "<ActionSchema " + a.head.str() + ">"; });

  py::class_<PlanningProblem>(m, "Problem")
      .def_readonly("name", &PlanningProblem::name)
      .def_property_readonly("initial", [](const PlanningProblem& p) { return strs(p.initial); })
      .def_property_readonly("goal", [](const PlanningProblem& p) { return strs(p.goal); })
      .def_readonly("actions", &PlanningProblem::actions)
      .def("serialize", &serialize_problem)
      .def("__repr__", [](const PlanningProblem& p) { return "<Problem " + p.name + ">"; });

  py::class_<Plan>(m, "Plan")
      .def_property_readonly("inner_step_count", &Plan::inner_step_count)
      .def("is_solution", &is_solution)
      .def("linearize", [](const Plan& p) { return strs(linearize(p)); },
           "Step heads in one order consistent with the plan, bindings applied")
      .def("canonical_form", &canonical_form)
      .def("hash", &plan_hash)
      .def("isomorphic", &plans_isomorphic)
      .def("__str__", [](const Plan& p) { return serialize_plan(p); })
      .def("__repr__", [](const Plan& p) {
        return "<Plan " + std::to_string(p.inner_step_count()) + " steps " + plan_hash(p) + ">";
      });

  py::class_<PlanLibrary>(m, "Library")
      .def(py::init<>())
      .def("__len__", [](const PlanLibrary& l) { return l.entries.size(); })
      .def_property_readonly("names", [](const PlanLibrary& l) {
        std::vector<std::string> out;
        for (const auto& e : l.entries) out.push_back(e.name);
        return out;
      })
      .def("add", [](const PlanLibrary& l, const Plan& solution, const PlanningProblem& p) {
        return store(l, solution, p, StorePolicy::Always);
      }, py::arg("solution"), py::arg("problem"), "Return a new library with the variabilized solution appended")
      .def("serialize", &serialize_library);

  py::class_<Outcome>(m, "Result")
      .def_readonly("plan", &Outcome::plan)
      .def_property_readonly("solved", [](const Outcome& o) { return o.plan.has_value(); })
      .def_property_readonly("nodes", [](const Outcome& o) { return o.stats.nodes; })
      .def_property_readonly("refinements", [](const Outcome& o) { return o.stats.refinements; })
      .def_property_readonly("retractions", [](const Outcome& o) { return o.stats.retractions; })
      .def_property_readonly("ms", [](const Outcome& o) { return o.stats.ms; })
      .def_readonly("limit_reached", &Outcome::limit_reached)
      .def_readonly("retrieved", &Outcome::retrieved)
      .def_readonly("library", &Outcome::library);

  m.def("blocks_domain_text", &blocks_domain_text);
  m.def("generate_bs", &generate_bs, py::arg("x"));
  m.def("generate_bs1", &generate_bs1, py::arg("x"));
  m.def("problem_by_name", &problem_by_name, py::arg("name"));
  m.def("parse_domain", [](const std::string& text) { return parse_domain(text); }, py::arg("text"));
  m.def("parse_problem", [](const std::string& text, const std::string& domain) {
    return parse_problem(text, parse_domain(domain));
  }, py::arg("text"), py::arg("domain_text"));
  m.def("parse_library", [](const std::string& text) { return parse_library(text); }, py::arg("text"));

  m.def("solve", &solve, py::arg("problem"), py::arg("library") = std::nullopt, py::arg("mode") = "generative",
        py::arg("hooks") = "default", py::arg("strategy") = "bfs", py::arg("fit") = "generous",
        py::arg("depth_bound") = 0, py::arg("node_limit") = 0, py::arg("store") = false,
        "Solve generatively, or adaptively from `library` when mode='adaptive'");

  m.def("advisability", [](double b, double n, double k) { return advisability({b, n, k}); }, py::arg("b"),
        py::arg("n"), py::arg("k"), "True when (b+1)^k < b^n");
  m.def("break_even_ratio", &break_even_ratio, py::arg("b"));

  m.def("run_benchmark", [](const std::string& config) {
    auto c = parse_bench_config(config);
    std::vector<BenchmarkRow> rows;
    {
      py::gil_scoped_release release;
      rows = run_benchmark(c);
    }
    return write_csv(rows);
  }, py::arg("config_text"), "Run a (bench ...) configuration and return the CSV text");
}
