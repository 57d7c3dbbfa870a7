// Command-line driver: solve equation files, analyze programs, compare
// solvers, print w.t.o.s. Exit codes: 0 solved, 1 input error, 2 budget.

#include <CLI11.hpp>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "intertwine/driver.hpp"
#include "intertwine/eqfile.hpp"
#include "intertwine/errors.hpp"
#include "intertwine/frontend.hpp"
#include "intertwine/wto.hpp"

using namespace intertwine;

namespace {

struct Common {
  std::string solver;
  std::string box = "warrow";
  std::size_t budget = 100000;
  std::string policy = "lifo";
  std::vector<std::string> box_points;
  int switch_bound = 0;
  std::string query;
  bool trace = false;

  SolverConfig config() const {
    SolverConfig c;
    c.box = parse_box(box);
    c.budget = budget;
    c.worklist_policy = policy == "fifo" ? WorklistPolicy::Fifo : WorklistPolicy::Lifo;
    if (!box_points.empty()) {
      c.box_points.emplace();
      for (const auto& x : box_points) c.box_points->insert(Unknown(x));
    }
    if (switch_bound > 0) c.switch_bound = switch_bound;
    c.record_trace = trace;
    return c;
  }
  std::optional<Unknown> query_unknown() const {
    if (query.empty()) return std::nullopt;
    return Unknown(query);
  }
};

bool is_program(const std::string& path) {
  return path.size() > 2 && path.compare(path.size() - 2, 2, ".c") == 0;
}

int report(const std::string& solver, const EquationSystem& sys, const SolveOutcome& out, bool trace) {
  std::cout << "# " << solver << ' ' << status_name(out.status) << " rhs_evals=" << out.stats.rhs_evals
            << " updates=" << out.stats.updates << '\n';
  std::cout << format_values(sys.domain, out.assignment);
  if (trace) {
    std::cout << "# trace\n";
    std::istringstream lines(format_trace(sys.domain, out.trace));
    for (std::string l; std::getline(lines, l);) std::cout << "# " << l << '\n';
  }
  return out.status == Status::Solved ? 0 : 2;
}

void add_solver_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--box", c.box, "join, widen, narrow or warrow")
      ->check(CLI::IsMember({"join", "widen", "narrow", "warrow"}));
  cmd->add_option("--budget", c.budget, "Right-hand side evaluations before giving up");
  cmd->add_option("--query", c.query, "Start unknown for local solvers");
  cmd->add_flag("--trace", c.trace, "Print every update");
}

EquationSystem program_system(const std::string& path, frontend::GlobalInit init, frontend::Cfg* cfg_out = nullptr) {
  const frontend::Cfg cfg = frontend::build_cfg(frontend::load(path));
  if (cfg_out) *cfg_out = cfg;
  return frontend::equations_with_globals(cfg, init);
}

void print_cfg(const frontend::Cfg& cfg) {
  for (std::size_t n = 0; n < cfg.nodes.size(); ++n) {
    const auto& node = cfg.nodes[n];
    std::cout << "# node " << node.name << " line=" << node.line << " depth=" << node.loops.size() << '\n';
  }
  for (const auto& e : cfg.edges) {
    std::cout << "# edge " << cfg.nodes[e.src].name << " -> " << cfg.nodes[e.dst].name << "  "
              << e.label.str(cfg.vars) << '\n';
  }
}

std::string percent(std::size_t k, std::size_t n) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1) << (n ? 100.0 * static_cast<double>(k) / static_cast<double>(n) : 100.0);
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixpoint solvers with combined widening and narrowing"};
  app.require_subcommand(1);

  Common solve_opts;
  std::string solve_file;
  solve_opts.solver = "sw";
  auto* solve = app.add_subcommand("solve", "Solve an equation file");
  solve->add_option("file", solve_file)->required();
  solve->add_option("--solver", solve_opts.solver)->check(CLI::IsMember(solver_names()));
  add_solver_flags(solve, solve_opts);
  solve->add_option("--policy", solve_opts.policy)->check(CLI::IsMember({"lifo", "fifo"}));
  solve->add_option("--box-points", solve_opts.box_points, "Apply the box operator only here")->delimiter(',');
  solve->add_option("--switch-bound", solve_opts.switch_bound, "Freeze narrowing after this many switches");

  Common an_opts;
  std::string an_file;
  std::string an_init = "before-main";
  bool an_cfg = false;
  an_opts.solver = "slr3";
  auto* analyze = app.add_subcommand("analyze", "Interval analysis of a program");
  analyze->add_option("program", an_file)->required();
  analyze->add_option("--solver", an_opts.solver)->check(CLI::IsMember(solver_names()));
  add_solver_flags(analyze, an_opts);
  analyze->add_option("--init", an_init, "Where global initializers are evaluated")
      ->check(CLI::IsMember({"before-main", "at-main-entry"}));
  analyze->add_flag("--cfg", an_cfg, "Print nodes and edges first");

  Common cmp_opts;
  std::string cmp_file;
  std::vector<std::string> cmp_solvers;
  auto* compare = app.add_subcommand("compare", "Compare solvers pointwise");
  compare->add_option("input", cmp_file, "Equation file or .c program")->required();
  compare->add_option("--solvers", cmp_solvers)->delimiter(',')->required()->check(CLI::IsMember(solver_names()));
  compare->add_option("--budget", cmp_opts.budget);
  compare->add_option("--query", cmp_opts.query);

  std::string wto_file;
  auto* wto_cmd = app.add_subcommand("wto", "Print a weak topological ordering of an equation file");
  wto_cmd->add_option("file", wto_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*solve) {
      const EquationSystem sys = load_equation_file(solve_file);
      const auto out = run_solver(solve_opts.solver, sys, solve_opts.query_unknown(), solve_opts.config());
      return report(solve_opts.solver, sys, out, solve_opts.trace);
    }
    if (*analyze) {
      const auto init = an_init == "before-main" ? frontend::GlobalInit::BeforeMain : frontend::GlobalInit::AtMainEntry;
      frontend::Cfg cfg;
      const EquationSystem sys = program_system(an_file, init, &cfg);
      if (an_cfg) print_cfg(cfg);
      std::optional<Unknown> q = an_opts.query_unknown();
      if (!q) q = frontend::default_query(cfg, init);
      const auto out = run_solver(an_opts.solver, sys, q, an_opts.config());
      return report(an_opts.solver, sys, out, an_opts.trace);
    }
    if (*compare) {
      EquationSystem sys;
      std::optional<Unknown> q = cmp_opts.query_unknown();
      if (is_program(cmp_file)) {
        frontend::Cfg cfg;
        sys = program_system(cmp_file, frontend::GlobalInit::BeforeMain, &cfg);
        if (!q) q = frontend::default_query(cfg);
      } else {
        sys = load_equation_file(cmp_file);
      }
      SolverConfig config = cmp_opts.config();
      config.record_trace = false;
      std::vector<SolveOutcome> outs;
      int code = 0;
      for (const auto& s : cmp_solvers) {
        outs.push_back(run_solver(s, sys, q, config));
        std::cout << s << '\t' << status_name(outs.back().status) << "\trhs_evals=" << outs.back().stats.rhs_evals
                  << '\n';
        if (outs.back().status != Status::Solved) code = 2;
      }
      const auto points = program_points(sys);
      for (std::size_t i = 0; i < outs.size(); ++i) {
        for (std::size_t j = i + 1; j < outs.size(); ++j) {
          const Comparison c = compare_assignments(sys.domain, outs[i].assignment, outs[j].assignment, points);
          std::cout << cmp_solvers[i] << " vs " << cmp_solvers[j] << "\tbetter=" << percent(c.better, c.points)
                    << "%\tequal=" << percent(c.equal, c.points) << "%\tworse=" << percent(c.worse, c.points)
                    << "%\tincomparable=" << percent(c.incomparable, c.points) << "%\n";
        }
      }
      return code;
    }
    if (*wto_cmd) {
      const EquationSystem sys = load_equation_file(wto_file);
      std::cout << build_wto(sys.declared_or_throw(), sys.deps_or_throw()).str() << '\n';
      return 0;
    }
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
