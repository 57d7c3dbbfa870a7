#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "intertwine/driver.hpp"
#include "intertwine/eqfile.hpp"
#include "intertwine/errors.hpp"
#include "intertwine/frontend.hpp"
#include "intertwine/wto.hpp"

namespace py = pybind11;
using namespace intertwine;

namespace {

struct Options {
  std::string box = "warrow";
  std::size_t budget = 100000;
  std::optional<std::string> query;
  std::optional<std::vector<std::string>> box_points;
  std::optional<int> switch_bound;
  std::string policy = "lifo";
  bool trace = false;

  SolverConfig config() const {
    SolverConfig c;
    c.box = parse_box(box);
    c.budget = budget;
    if (policy != "lifo" && policy != "fifo") throw InvalidConfig("policy must be lifo or fifo");
    c.worklist_policy = policy == "fifo" ? WorklistPolicy::Fifo : WorklistPolicy::Lifo;
    if (box_points) {
      c.box_points.emplace();
      for (const auto& x : *box_points) c.box_points->insert(Unknown(x));
    }
    c.switch_bound = switch_bound;
    c.record_trace = trace;
    return c;
  }
};

void check_solver(const std::string& name) {
  const auto& names = solver_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) throw InvalidConfig("unknown solver " + name);
}

py::dict report(const std::string& solver, const EquationSystem& sys, const SolveOutcome& out) {
  py::dict values;
  for (const auto& [x, v] : out.assignment.values()) values[py::str(x.str())] = sys.domain.show(v);
  py::list trace;
  for (const auto& t : out.trace) {
    trace.append(py::make_tuple(t.eval, t.x.str(), sys.domain.show(t.old_value), sys.domain.show(t.new_value)));
  }
  py::dict d;
  d["solver"] = solver;
  d["status"] = status_name(out.status);
  d["rhs_evals"] = out.stats.rhs_evals;
  d["updates"] = out.stats.updates;
  d["values"] = values;
  d["trace"] = trace;
  return d;
}

py::dict run(const std::string& solver, const EquationSystem& sys, std::optional<Unknown> query, const Options& o) {
  check_solver(solver);
  if (o.query) query = Unknown(*o.query);
  return report(solver, sys, run_solver(solver, sys, query, o.config()));
}

frontend::GlobalInit parse_init(const std::string& s) {
  if (s == "before-main") return frontend::GlobalInit::BeforeMain;
  if (s == "at-main-entry") return frontend::GlobalInit::AtMainEntry;
  throw InvalidConfig("init must be before-main or at-main-entry");
}

Options options(const std::string& box, std::size_t budget, std::optional<std::string> query,
                std::optional<std::vector<std::string>> box_points, std::optional<int> switch_bound,
                const std::string& policy, bool trace) {
  return Options{box, budget, std::move(query), std::move(box_points), switch_bound, policy, trace};
}

}  // namespace

PYBIND11_MODULE(_intertwine, m) {
  m.doc() = "Fixpoint solvers with combined widening and narrowing";

  auto base = py::register_exception<Error>(m, "IntertwineError");
  py::register_exception<SyntaxError>(m, "ParseError", base);

  m.def("solver_names", &solver_names);

  m.def(
      "solve",
      [](const std::string& text, const std::string& solver, const std::string& box, std::size_t budget,
         std::optional<std::string> query, std::optional<std::vector<std::string>> box_points,
         std::optional<int> switch_bound, const std::string& policy, bool trace) {
        const EquationSystem sys = parse_equation_file(text);
        return run(solver, sys, std::nullopt, options(box, budget, query, box_points, switch_bound, policy, trace));
      },
      "Solve an equation system given as text.", py::arg("text"), py::arg("solver") = "sw",
      py::arg("box") = "warrow", py::arg("budget") = 100000, py::arg("query") = py::none(),
      py::arg("box_points") = py::none(), py::arg("switch_bound") = py::none(), py::arg("policy") = "lifo",
      py::arg("trace") = false);

  m.def(
      "analyze",
      [](const std::string& source, const std::string& solver, const std::string& init, const std::string& box,
         std::size_t budget, std::optional<std::string> query, bool trace) {
        const auto gi = parse_init(init);
        const frontend::Cfg cfg = frontend::build_cfg(frontend::parse(source));
        const EquationSystem sys = frontend::equations_with_globals(cfg, gi);
        return run(solver, sys, frontend::default_query(cfg, gi),
                   options(box, budget, query, std::nullopt, std::nullopt, "lifo", trace));
      },
      "Interval analysis of a program given as source text.", py::arg("source"), py::arg("solver") = "slr3",
      py::arg("init") = "before-main", py::arg("box") = "warrow", py::arg("budget") = 100000,
      py::arg("query") = py::none(), py::arg("trace") = false);

  m.def(
      "compare",
      [](const std::string& source, const std::string& a, const std::string& b, std::size_t budget) {
        check_solver(a);
        check_solver(b);
        const frontend::Cfg cfg = frontend::build_cfg(frontend::parse(source));
        const EquationSystem sys = frontend::equations_with_globals(cfg);
        SolverConfig c;
        c.budget = budget;
        c.record_trace = false;
        const auto q = frontend::default_query(cfg);
        const SolveOutcome ra = run_solver(a, sys, q, c);
        const SolveOutcome rb = run_solver(b, sys, q, c);
        const Comparison cmp = compare_assignments(sys.domain, ra.assignment, rb.assignment, program_points(sys));
        py::dict d;
        d["points"] = cmp.points;
        d["better"] = cmp.better;
        d["equal"] = cmp.equal;
        d["worse"] = cmp.worse;
        d["incomparable"] = cmp.incomparable;
        d["rhs_evals"] = py::make_tuple(ra.stats.rhs_evals, rb.stats.rhs_evals);
        return d;
      },
      "Pointwise precision of solver a against b on a program.", py::arg("source"), py::arg("a"), py::arg("b"),
      py::arg("budget") = 100000);

  m.def(
      "build_wto",
      [](const std::string& text) {
        const EquationSystem sys = parse_equation_file(text);
        return build_wto(sys.declared_or_throw(), sys.deps_or_throw()).str();
      },
      "Weak topological ordering of an equation system given as text.", py::arg("text"));

  m.def(
      "check_wto",
      [](const std::string& ordering, const std::string& text) {
        const EquationSystem sys = parse_equation_file(text);
        return check_wto(Wto::parse(ordering), sys.deps_or_throw());
      },
      py::arg("ordering"), py::arg("text"));

  py::class_<Wto>(m, "Wto")
      .def(py::init(&Wto::parse), py::arg("text"))
      .def("head", [](const Wto& w, const std::string& x) { return w.head(Unknown(x)); })
      .def("next", [](const Wto& w, const std::string& x) -> std::optional<std::string> {
        const auto y = w.next(Unknown(x));
        return y ? std::optional<std::string>(y->str()) : std::nullopt;
      })
      .def("nextinc", [](const Wto& w, const std::string& x) -> std::optional<std::string> {
        const auto y = w.nextinc(Unknown(x));
        return y ? std::optional<std::string>(y->str()) : std::nullopt;
      })
      .def("skip", [](const Wto& w, const std::string& x) -> std::optional<std::string> {
        const auto y = w.skip(Unknown(x));
        return y ? std::optional<std::string>(y->str()) : std::nullopt;
      })
      .def("heads", [](const Wto& w) {
        std::vector<std::string> out;
        for (const auto& h : w.heads()) out.push_back(h.str());
        return out;
      })
      .def("__str__", &Wto::str)
      .def("__len__", &Wto::size);
}
