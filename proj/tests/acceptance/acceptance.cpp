// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "intertwine/driver.hpp"
#include "intertwine/eqfile.hpp"
#include "intertwine/frontend.hpp"
#include "intertwine/wto.hpp"
#include "oracles.hpp"

using namespace intertwine;
namespace fe = intertwine::frontend;

namespace {

struct Result {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

const Unknown x1("x1"), x2("x2"), x3("x3");
const NatInf kInf = NatInf::inf();
using Column = std::vector<NatInf>;

std::string corpus(const std::string& name) { return std::string(INTERTWINE_CORPUS) + "/" + name; }

Assignment zeros(const EquationSystem& sys) {
  Assignment rho;
  for (const auto& x : *sys.declared) rho.set(x, NatInf(0));
  return rho;
}

Column column(const std::function<Value(const Unknown&)>& peek, const std::vector<Unknown>& xs) {
  Column out;
  for (const auto& x : xs) out.push_back(as_natinf(peek(x)));
  return out;
}

// (updated unknown, x1..x3 after) for each update of a run.
std::vector<std::pair<Unknown, Column>> updates(const SolveOutcome& out, const EquationSystem& sys) {
  std::map<Unknown, NatInf> cur;
  for (const auto& x : *sys.declared) cur[x] = NatInf(0);
  std::vector<std::pair<Unknown, Column>> seq;
  for (const auto& t : out.trace) {
    cur[t.x] = as_natinf(t.new_value);
    Column col;
    for (const auto& x : *sys.declared) col.push_back(cur[x]);
    seq.emplace_back(t.x, col);
  }
  return seq;
}

bool has_prefix(const std::vector<std::pair<Unknown, Column>>& got,
                const std::vector<std::pair<Unknown, Column>>& want) {
  if (got.size() < want.size()) return false;
  return std::equal(want.begin(), want.end(), got.begin());
}

Interval iv(std::int64_t a, std::int64_t b) { return {Bound(a), Bound(b)}; }
const Interval kFromZero(Bound(0), Bound::pos_inf());
const Interval kFromOne(Bound(1), Bound::pos_inf());

Interval var_at(const fe::Cfg& cfg, const SolveOutcome& out, int node, const std::string& var) {
  const Env e = as_env(out.assignment.read(Unknown(cfg.nodes[node].name), Env::bottom()));
  const auto slot = std::find(cfg.vars.begin(), cfg.vars.end(), var) - cfg.vars.begin();
  return e.is_bottom() ? Interval::bottom() : e.at(static_cast<std::size_t>(slot));
}

Result term_example() {
  Result r;
  const EquationSystem sys = load_equation_file(corpus("e_term.eq"));
  SolverConfig cfg;
  cfg.budget = 1000;
  std::vector<Column> passes;
  std::size_t evals = 0;
  cfg.on_step = [&](const StepInfo& s) {
    if (++evals % 3 == 0) passes.push_back(column(s.peek, {x1, x2, x3}));
  };
  const SolveOutcome rr = solve_rr(sys, zeros(sys), cfg);
  r.require(rr.status == Status::BudgetExhausted, "RR terminated");
  const std::vector<Column> table = {{0, kInf, 0}, {kInf, 1, kInf}, {1, kInf, 1}, {kInf, 2, kInf}, {2, kInf, 2}};
  r.require(passes.size() >= table.size() && std::equal(table.begin(), table.end(), passes.begin()),
            "RR pass columns differ");

  const SolveOutcome srr = solve_srr(sys, zeros(sys));
  r.require(srr.status == Status::Solved, "SRR did not terminate");
  const std::vector<std::pair<Unknown, Column>> srr_table = {
      {x2, {0, kInf, 0}}, {x1, {kInf, kInf, 0}}, {x2, {kInf, 1, 0}},       {x1, {1, 1, 0}},
      {x3, {1, 1, kInf}}, {x2, {1, kInf, kInf}}, {x1, {kInf, kInf, kInf}},
  };
  r.require(updates(srr, sys) == srr_table, "SRR update sequence differs");
  return r;
}

Result worklist_example() {
  Result r;
  const EquationSystem sys = load_equation_file(corpus("e_w.eq"));
  using Col = std::pair<std::vector<Unknown>, Column>;
  std::vector<Col> cols;
  SolverConfig cfg;
  cfg.budget = 200;
  cfg.on_step = [&](const StepInfo& s) { cols.emplace_back(s.pending, column(s.peek, {x1, x2})); };
  const SolveOutcome w = solve_w(sys, zeros(sys), cfg);
  r.require(w.status == Status::BudgetExhausted, "W terminated");
  const std::vector<Col> w_table = {
      {{x1, x2}, {kInf, 0}}, {{x1, x2}, {1, 0}}, {{x2}, {1, 0}},       {{x2, x1}, {1, kInf}},
      {{x2, x1}, {1, 2}},    {{x1}, {1, 2}},     {{x1, x2}, {kInf, 2}},
  };
  r.require(cols.size() >= w_table.size() && std::equal(w_table.begin(), w_table.end(), cols.begin()),
            "W trace prefix differs");

  cols.clear();
  cfg.budget = 100000;
  const SolveOutcome sw = solve_sw(sys, zeros(sys), cfg);
  r.require(sw.status == Status::Solved, "SW did not terminate");
  const std::vector<Col> sw_table = {
      {{x1, x2}, {kInf, 0}},    {{x1, x2}, {1, 0}},   {{x2}, {1, 0}},     {{x1, x2}, {1, kInf}},
      {{x1, x2}, {kInf, kInf}}, {{x2}, {kInf, kInf}}, {{}, {kInf, kInf}},
  };
  r.require(cols == sw_table, "SW table differs");
  return r;
}

Result box_points() {
  Result r;
  const EquationSystem sys = load_equation_file(corpus("e_term.eq"));
  SolverConfig at_x2;
  at_x2.box_points = std::set<Unknown>{x2};
  at_x2.budget = 500;
  const SolveOutcome bad = solve_srr(sys, zeros(sys), at_x2);
  r.require(bad.status == Status::BudgetExhausted, "box points {x2} terminated");
  r.require(has_prefix(updates(bad, sys), {{x2, {0, kInf, 0}},
                                           {x1, {kInf, kInf, 0}},
                                           {x2, {kInf, 1, 0}},
                                           {x1, {1, 1, 0}},
                                           {x3, {1, 1, 1}},
                                           {x2, {1, kInf, 1}},
                                           {x1, {kInf, kInf, 1}},
                                           {x2, {kInf, 2, 1}},
                                           {x1, {2, 2, 1}}}),
            "box points {x2} trace differs");

  SolverConfig at_x3;
  at_x3.box_points = std::set<Unknown>{x3};
  const SolveOutcome good = solve_srr(sys, zeros(sys), at_x3);
  r.require(good.status == Status::Solved, "box points {x3} diverged");
  r.require(updates(good, sys) == std::vector<std::pair<Unknown, Column>>{{x2, {0, 1, 0}},
                                                                        {x1, {1, 1, 0}},
                                                                        {x3, {1, 1, kInf}},
                                                                        {x2, {1, kInf, kInf}},
                                                                        {x1, {kInf, kInf, kInf}}},
            "box points {x3} trace differs");
  r.require(!check_admissible(sys, {x2}), "{x2} reported admissible");
  r.require(check_admissible(sys, {x3}), "{x3} reported inadmissible");
  return r;
}

Result local_example() {
  Result r;
  std::set<Unknown> touched;
  EquationSystem sys;
  sys.domain = natinf_ops();
  sys.rhs = [&](const Unknown& y, const Getter& get, const SideEmitter&) -> Value {
    const std::uint64_t k = std::stoull(y.name().substr(1));
    touched.insert(y);
    const auto at = [](std::uint64_t i) { return Unknown("y" + std::to_string(i)); };
    if (k % 2 == 1) return get(at(3 * (k - 1) + 4));
    const NatInf v = as_natinf(get(y));
    return std::max(as_natinf(get(at(v.value()))), NatInf(k / 2));
  };
  SolverConfig cfg;
  cfg.box = BoxOp::Join;
  const SolveOutcome out = solve_slr1(sys, {}, Unknown("y1"), cfg);
  r.require(out.status == Status::Solved, "SLR1 did not terminate");
  std::map<std::string, NatInf> got;
  for (const auto& [x, v] : out.assignment.values()) got[x.str()] = as_natinf(v);
  r.require(got == std::map<std::string, NatInf>{{"y0", 0}, {"y1", 2}, {"y2", 2}, {"y4", 2}}, "values differ");
  r.require(touched == std::set<Unknown>{Unknown("y0"), Unknown("y1"), Unknown("y2"), Unknown("y4")},
            "touched " + std::to_string(touched.size()) + " unknowns");
  return r;
}

Result nested_program() {
  Result r;
  const fe::Cfg cfg = fe::build_cfg(fe::load(corpus("nested.c")));
  const EquationSystem sys = fe::equations_with_globals(cfg);
  const auto q = fe::default_query(cfg);
  const auto inner = cfg.inner_loop_nodes();
  r.require(!inner.empty(), "no inner loop nodes");
  const SolveOutcome s1 = run_solver("slr1", sys, q);
  const SolveOutcome s2 = run_solver("slr2", sys, q);
  const SolveOutcome s3 = run_solver("slr3", sys, q);
  for (int n : inner) {
    r.require(var_at(cfg, s1, n, "i") == kFromZero, "SLR1 at " + cfg.nodes[n].name);
    r.require(var_at(cfg, s2, n, "i") == kFromZero, "SLR2 at " + cfg.nodes[n].name);
    r.require(var_at(cfg, s3, n, "i") == iv(0, 99), "SLR3 at " + cfg.nodes[n].name);
  }
  return r;
}

Result hybrid_program() {
  Result r;
  const fe::Cfg cfg = fe::build_cfg(fe::load(corpus("hybrid.c")));
  const EquationSystem sys = fe::equations_with_globals(cfg);
  const auto q = fe::default_query(cfg);
  const auto inner = cfg.inner_loop_nodes();
  r.require(!inner.empty(), "no inner loop nodes");
  const SolveOutcome s3 = run_solver("slr3", sys, q);
  const SolveOutcome s4 = run_solver("slr4", sys, q);
  for (int n : inner) {
    r.require(var_at(cfg, s3, n, "i") == kFromOne, "SLR3 at " + cfg.nodes[n].name);
    r.require(var_at(cfg, s4, n, "i") == iv(1, 10), "SLR4 at " + cfg.nodes[n].name);
  }
  return r;
}

Result side_effects() {
  Result r;
  const fe::Cfg cfg = fe::build_cfg(fe::load(corpus("globals.c")));
  const EquationSystem sys = fe::equations_with_globals(cfg);
  for (const char* solver : {"slr1plus", "slr3plus"}) {
    const SolveOutcome out = run_solver(solver, sys, fe::default_query(cfg));
    r.require(out.status == Status::Solved, std::string(solver) + " diverged");
    r.require(as_interval(out.assignment.read(Unknown("g"), Interval())) == iv(0, 3), std::string(solver) + " g");
    bool widened = false;
    for (const auto& t : out.trace) widened = widened || (t.x == Unknown("g") && as_interval(t.new_value) == kFromZero);
    r.require(widened, std::string(solver) + " trace lacks g = [0,inf]");
  }

  const fe::Cfg inc = fe::build_cfg(fe::load(corpus("gincr.c")));
  const EquationSystem first = fe::equations_with_globals(inc, fe::GlobalInit::BeforeMain);
  const SolveOutcome ok = run_solver("slr1plus", first, fe::default_query(inc, fe::GlobalInit::BeforeMain));
  r.require(ok.status == Status::Solved, "initializer first diverged");
  r.require(as_interval(ok.assignment.read(Unknown("g"), Interval())) == kFromZero, "initializer first g");
  SolverConfig small;
  small.budget = 2000;
  const EquationSystem late = fe::equations_with_globals(inc, fe::GlobalInit::AtMainEntry);
  const SolveOutcome bad = run_solver("slr1plus", late, fe::default_query(inc, fe::GlobalInit::AtMainEntry), small);
  r.require(bad.status == Status::BudgetExhausted, "low priority g terminated");
  return r;
}

Result non_monotone() {
  Result r;
  const EquationSystem sys = load_equation_file(corpus("e_non.eq"));
  SolverConfig cfg;
  cfg.budget = 40;
  const SolveOutcome out = solve_sw(sys, {}, cfg);
  r.require(out.status == Status::BudgetExhausted, "terminated without switch bound");
  r.require(out.trace.size() >= 6, "short trace");
  for (std::size_t i = 0; i < out.trace.size(); ++i) {
    r.require(as_natinf(out.trace[i].new_value) == (i % 2 == 0 ? kInf : NatInf(0)), "no oscillation");
  }
  cfg.budget = 1000;
  cfg.switch_bound = 2;
  const SolveOutcome bounded = solve_sw(sys, {}, cfg);
  r.require(bounded.status == Status::Solved, "switch bound did not stop it");
  r.require(is_post_solution(sys, bounded.assignment), "not a post solution");
  return r;
}

Result wto_checks() {
  Result r;
  const std::optional<Unknown> none;
  const Wto w = Wto::parse("x1 (x2 x3 x5 (x6 x7 x9) x8 x10) x4");
  r.require(w.next(x1) == Unknown("x2"), "next(x1)");
  r.require(w.nextinc(Unknown("x9")) == none, "nextinc(x9)");
  r.require(w.nextinc(Unknown("x10")) == none, "nextinc(x10)");
  r.require(w.skip(x1) == Unknown("x4"), "skip(x1)");
  r.require(w.skip(Unknown("x5")) == Unknown("x8"), "skip(x5)");
  const Wto v = Wto::parse("1 2 (3 (4 5)) 6");
  r.require(v.skip(Unknown("2")) == Unknown("6"), "skip(2)");
  r.require(v.skip(Unknown("3")) == none, "skip(3)");

  std::mt19937 rng(2024);
  for (int t = 0; t < 200; ++t) {
    const int n = std::uniform_int_distribution<int>(1, 50)(rng);
    std::vector<Unknown> xs;
    for (int i = 0; i < n; ++i) xs.emplace_back("v" + std::to_string(i));
    DepMap deps;
    for (const auto& x : xs) {
      auto& d = deps[x];
      for (int k = std::uniform_int_distribution<int>(0, 3)(rng); k > 0; --k) {
        const Unknown& y = xs[std::uniform_int_distribution<int>(0, n - 1)(rng)];
        if (std::find(d.begin(), d.end(), y) == d.end()) d.push_back(y);
      }
    }
    const Wto built = build_wto(xs, deps);
    r.require(built.size() == xs.size() && check_wto(built, deps), "invalid ordering for graph " + std::to_string(t));
  }
  return r;
}

Result complexity_bounds() {
  Result r;
  std::mt19937 rng(10);
  SolverConfig cfg;
  cfg.box = BoxOp::Join;
  cfg.budget = 1000000;
  for (int t = 0; t < 200; ++t) {
    const int n = std::uniform_int_distribution<int>(1, 30)(rng);
    const std::uint64_t h = std::uniform_int_distribution<std::uint64_t>(1, 8)(rng);
    auto rs = oracle::random_chain_system(rng, n, h);
    const Assignment lfp = kleene_oracle(rs.system, 1000000);
    const SolveOutcome srr = solve_srr(rs.system, {}, cfg);
    const SolveOutcome sw = solve_sw(rs.system, {}, cfg);
    const std::size_t srr_bound = static_cast<std::size_t>(n) + h * n * (n + 1) / 2;
    const std::size_t sw_bound = h * rs.size;
    const std::string tag = " on system " + std::to_string(t);
    r.require(srr.status == Status::Solved && srr.stats.rhs_evals <= srr_bound,
              "SRR used " + std::to_string(srr.stats.rhs_evals) + " > " + std::to_string(srr_bound) + tag);
    r.require(sw.status == Status::Solved && sw.stats.rhs_evals <= sw_bound,
              "SW used " + std::to_string(sw.stats.rhs_evals) + " > " + std::to_string(sw_bound) + tag);
    for (const auto& x : rs.unknowns) {
      const NatInf want = as_natinf(lfp.read(x, NatInf(0)));
      r.require(as_natinf(srr.assignment.read(x, NatInf(0))) == want, "SRR differs from least solution" + tag);
      r.require(as_natinf(sw.assignment.read(x, NatInf(0))) == want, "SW differs from least solution" + tag);
    }
  }
  return r;
}

Result soundness() {
  Result r;
  std::mt19937 rng(11);
  SolverConfig cfg;
  cfg.budget = 1000000;
  cfg.record_trace = false;
  for (int t = 0; t < 500; ++t) {
    const int n = std::uniform_int_distribution<int>(1, 20)(rng);
    auto rs = oracle::random_interval_system(rng, n);
    const BoxFn box = box_fn(BoxOp::Warrow, rs.system.domain);
    const Unknown q = rs.unknowns.back();
    const std::vector<std::pair<std::string, SolveOutcome>> runs = {
        {"srr", solve_srr(rs.system, {}, cfg)},
        {"sw", solve_sw(rs.system, {}, cfg)},
        {"slr1", solve_slr1(rs.system, {}, q, cfg)},
        {"slr3", solve_slr3(rs.system, {}, q, cfg)},
        {"rec", solve_rec(rs.system, {}, build_wto(rs.unknowns, rs.deps), cfg)},
    };
    for (const auto& [name, out] : runs) {
      const std::string tag = name + " on system " + std::to_string(t);
      r.require(out.status == Status::Solved, tag + " exhausted its budget");
      if (out.status != Status::Solved) continue;
      r.require(is_post_solution(rs.system, out.assignment), tag + " is not a post solution");
      r.require(is_box_solution(rs.system, out.assignment, box), tag + " is not a box solution");
    }
  }
  return r;
}

Result precision_direction() {
  Result r;
  std::ostringstream summary;
  for (const char* prog : {"nested.c", "hybrid.c", "globals.c", "gincr.c"}) {
    const fe::Cfg cfg = fe::build_cfg(fe::load(corpus(prog)));
    const EquationSystem sys = fe::equations_with_globals(cfg);
    const auto q = fe::default_query(cfg);
    SolverConfig c;
    c.record_trace = false;
    const SolveOutcome s1 = run_solver("slr1", sys, q, c);
    const SolveOutcome s2 = run_solver("slr2", sys, q, c);
    const SolveOutcome s3 = run_solver("slr3", sys, q, c);
    const SolveOutcome tp = run_solver("two-phase", sys, q, c);
    for (const auto* o : {&s1, &s2, &s3, &tp}) r.require(o->status == Status::Solved, std::string(prog) + " diverged");
    const auto points = program_points(sys);
    const Comparison a = compare_assignments(sys.domain, s3.assignment, s2.assignment, points);
    const Comparison b = compare_assignments(sys.domain, s2.assignment, tp.assignment, points);
    r.require(a.worse == 0 && a.incomparable == 0, std::string(prog) + ": slr3 not at least as precise as slr2");
    r.require(b.worse == 0 && b.incomparable == 0, std::string(prog) + ": slr2 not at least as precise as two-phase");
    if (std::string(prog) == "nested.c" || std::string(prog) == "hybrid.c") {
      r.require(s2.stats.rhs_evals <= s1.stats.rhs_evals, std::string(prog) + ": slr2 evaluates more than slr1");
      summary << prog << " slr2/slr1 evals " << s2.stats.rhs_evals << '/' << s1.stats.rhs_evals << "; ";
    }
  }
  if (r.ok) r.detail = summary.str() + "corpus-scale percentages not reproduced";
  return r;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Result()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "x1=x2, x2=x3+1, x3=x1: RR diverges with the expected passes, SRR terminates with the expected updates", 1, term_example},
      {2, "min system: W (lifo) diverges with the expected prefix, SW terminates with the expected steps", 1, worklist_example},
      {3, "box-point localization and admissibility", 1, box_points},
      {4, "infinite system: SLR1 values and touched unknowns", 1, local_example},
      {5, "nested: SLR1/SLR2 i:[0,inf], SLR3 i:[0,99] in the inner loop", 1, nested_program},
      {6, "hybrid: SLR3 i:[1,inf], SLR4 i:[1,10] in the inner loop", 1, hybrid_program},
      {7, "side effects: g=[0,3] with [0,inf] step; g=g+1 priority scenarios", 1, side_effects},
      {8, "non-monotone system: oscillation and switch bound", 1, non_monotone},
      {9, "w.t.o. operators and 200 random orderings", 5, wto_checks},
      {10, "SRR/SW evaluation bounds and least solution on 200 chain systems", 30, complexity_bounds},
      {11, "500 interval systems: SRR/SW/SLR1/SLR3/REC terminate with post and box solutions", 60, soundness},
      {12, "corpus precision order slr3 >= slr2 >= two-phase, slr2 evals <= slr1", 5, precision_direction},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Result res;
    try {
      res = c.check();
    } catch (const std::exception& e) {
      res.ok = false;
      res.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (res.ok && secs >= c.limit_s) {
      res.ok = false;
      res.detail = "took longer than " + std::to_string(c.limit_s) + " s";
    }
    if (!res.ok) ++failed;
    std::cout << (res.ok ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name << "  (" << std::fixed
              << std::setprecision(3) << secs << " s)";
    if (!res.detail.empty()) std::cout << "  " << res.detail;
    std::cout << '\n';
  }
  return failed == 0 ? 0 : 1;
}
