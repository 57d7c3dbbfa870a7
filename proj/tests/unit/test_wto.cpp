#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "intertwine/eqfile.hpp"
#include "intertwine/errors.hpp"
#include "intertwine/wto.hpp"
#include "oracles.hpp"

using namespace intertwine;

namespace {

std::optional<Unknown> u(const std::string& s) { return Unknown(s); }
const std::optional<Unknown> kNone;

EquationSystem ex_wto() { return load_equation_file(std::string(INTERTWINE_CORPUS) + "/ex_wto.eq"); }

// Reads the printed form token by token and checks every dependence edge
// against the definition directly: forward, or backward to the head of a
// component enclosing the source.
bool valid_by_text(const std::string& text, const DepMap& deps) {
  std::map<Unknown, std::size_t> pos;
  std::map<Unknown, std::vector<Unknown>> enclosing;  // heads of components around x
  std::vector<Unknown> open;
  bool want_head = false;
  std::string tok;
  std::string spaced;
  for (char c : text) {
    if (c == '(' || c == ')') {
      spaced += ' ';
      spaced += c;
      spaced += ' ';
    } else {
      spaced += c;
    }
  }
  std::istringstream in(spaced);
  while (in >> tok) {
    if (tok == "(") {
      want_head = true;
    } else if (tok == ")") {
      open.pop_back();
    } else {
      const Unknown x(tok);
      pos[x] = pos.size();
      if (want_head) open.push_back(x);
      want_head = false;
      enclosing[x] = open;
    }
  }
  for (const auto& [v, us] : deps) {
    for (const auto& w : us) {
      if (pos.at(w) < pos.at(v)) continue;
      const auto& hs = enclosing.at(w);
      if (std::find(hs.begin(), hs.end(), v) == hs.end()) return false;
    }
  }
  return true;
}

std::pair<std::vector<Unknown>, DepMap> random_graph(std::mt19937& rng) {
  std::uniform_int_distribution<int> size(1, 50);
  const int n = size(rng);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> degree(0, 3);
  std::vector<Unknown> xs;
  for (int i = 0; i < n; ++i) xs.emplace_back("v" + std::to_string(i));
  DepMap deps;
  for (const auto& x : xs) {
    auto& d = deps[x];
    for (int k = degree(rng); k > 0; --k) {
      const Unknown& y = xs[pick(rng)];
      if (std::find(d.begin(), d.end(), y) == d.end()) d.push_back(y);
    }
  }
  return {xs, deps};
}

}  // namespace

TEST(Wto, OperatorsOnTheLoopExample) {
  const Wto w = Wto::parse("x1 (x2 x3 x5 (x6 x7 x9) x8 x10) x4");
  EXPECT_EQ(w.next(Unknown("x1")), u("x2"));
  EXPECT_EQ(w.next(Unknown("x4")), kNone);
  EXPECT_EQ(w.next(Unknown("x10")), u("x4"));
  EXPECT_EQ(w.nextinc(Unknown("x9")), kNone);
  EXPECT_EQ(w.nextinc(Unknown("x10")), kNone);
  EXPECT_EQ(w.nextinc(Unknown("x7")), u("x9"));
  EXPECT_EQ(w.skip(Unknown("x1")), u("x4"));
  EXPECT_EQ(w.skip(Unknown("x5")), u("x8"));
  EXPECT_EQ(w.heads(), (std::vector<Unknown>{Unknown("x2"), Unknown("x6")}));
  EXPECT_EQ(w.omega(Unknown("x7")), (std::vector<Unknown>{Unknown("x2"), Unknown("x6")}));
  EXPECT_EQ(w.omega(Unknown("x4")), std::vector<Unknown>{});
  EXPECT_EQ(w.str(), "x1 (x2 x3 x5 (x6 x7 x9) x8 x10) x4");
}

TEST(Wto, SkipOutOfNestedComponents) {
  const Wto w = Wto::parse("1 2 (3 (4 5)) 6");
  EXPECT_EQ(w.skip(Unknown("2")), u("6"));
  EXPECT_EQ(w.skip(Unknown("3")), kNone);
  EXPECT_TRUE(w.head(Unknown("3")));
  EXPECT_TRUE(w.head(Unknown("4")));
  EXPECT_FALSE(w.head(Unknown("5")));
}

TEST(Wto, FlatOrdering) {
  const Wto w = Wto::parse("a b c d");
  for (const auto& x : w.elements()) {
    EXPECT_FALSE(w.head(x));
    EXPECT_EQ(w.skip(x), kNone);
    EXPECT_EQ(w.nextinc(x), w.next(x));
  }
}

TEST(Wto, ParseErrors) {
  EXPECT_THROW(Wto::parse("a ((b c))"), SyntaxError);
  EXPECT_THROW(Wto::parse("a ()"), SyntaxError);
  EXPECT_THROW(Wto::parse("a (b"), SyntaxError);
  EXPECT_THROW(Wto::parse("a b)"), SyntaxError);
  EXPECT_THROW(Wto::parse("a b a"), SyntaxError);
}

TEST(Wto, BuildOnTheLoopExample) {
  const EquationSystem sys = ex_wto();
  const Wto w = build_wto(sys.declared_or_throw(), sys.deps_or_throw());
  EXPECT_EQ(w.str(), "x1 (x2 x3 x5 (x6 x7 x9) x8 x10) x4");
  EXPECT_TRUE(check_wto(w, sys.deps_or_throw()));
  EXPECT_TRUE(valid_by_text(w.str(), sys.deps_or_throw()));
  EXPECT_FALSE(check_wto(Wto::parse("x1 x2 x3 x4 x5 x6 x7 x8 x9 x10"), sys.deps_or_throw()));
}

TEST(Wto, SelfLoopFormsAComponent) {
  const EquationSystem sys = parse_equation_file("domain natinf\na = 1\nb = join(a, b)\n");
  EXPECT_EQ(build_wto(sys.declared_or_throw(), sys.deps_or_throw()).str(), "a (b)");
}

TEST(WtoProperty, BuiltOrderingsAreValid) {
  std::mt19937 rng(23);
  for (int t = 0; t < 200; ++t) {
    const auto [xs, deps] = random_graph(rng);
    const Wto w = build_wto(xs, deps);
    ASSERT_EQ(w.size(), xs.size());
    const std::string text = w.str();
    EXPECT_TRUE(check_wto(w, deps)) << text;
    EXPECT_TRUE(valid_by_text(text, deps)) << text;
    EXPECT_EQ(Wto::parse(text).str(), text);
    for (const auto& x : xs) {
      for (const auto& h : w.omega(x)) EXPECT_LE(w.position(h), w.position(x));
      if (w.head(x)) {
        const auto om = w.omega(x);
        EXPECT_TRUE(std::find(om.begin(), om.end(), x) != om.end());
      }
    }
  }
}

TEST(Rec, LoopExampleIsAPostSolution) {
  const EquationSystem sys = ex_wto();
  const Wto w = build_wto(sys.declared_or_throw(), sys.deps_or_throw());
  const SolveOutcome rec = solve_rec(sys, {}, w);
  ASSERT_EQ(rec.status, Status::Solved);
  EXPECT_TRUE(oracle::post_solution(sys, rec.assignment));
  EXPECT_TRUE(is_box_solution(sys, rec.assignment, box_fn(BoxOp::Warrow, sys.domain)));
  // Concretely the outer loop leaves with x = 10, after inner rounds with y in [0,9].
  const Env exit = as_env(rec.assignment.read(Unknown("x4"), sys.domain.bottom));
  EXPECT_TRUE(oracle::contains(exit.at(0), 10));
  const Env inner = as_env(rec.assignment.read(Unknown("x7"), sys.domain.bottom));
  for (std::int64_t y = 0; y < 10; ++y) EXPECT_TRUE(oracle::contains(inner.at(1), y));
}

TEST(Rec, RejectsInvalidOrderings) {
  const EquationSystem sys = ex_wto();
  EXPECT_THROW(solve_rec(sys, {}, Wto::parse("x1 x2 x3 x4 x5 x6 x7 x8 x9 x10")), RequiresValidWto);
  EXPECT_THROW(solve_rec(sys, {}, Wto::parse("x1 (x2 x3)")), RequiresValidWto);
}

TEST(Rec, FlatOrderingOnAcyclicSystemIsOnePass) {
  const EquationSystem sys = parse_equation_file("domain natinf\na = 1\nb = a + 1\nc = join(a, b)\n");
  const SolveOutcome out = solve_rec(sys, {}, Wto::parse("a b c"));
  ASSERT_EQ(out.status, Status::Solved);
  EXPECT_EQ(out.stats.rhs_evals, 3u);
  EXPECT_EQ(as_natinf(out.assignment.read(Unknown("c"), NatInf(0))), NatInf(2));
}

TEST(Rec, FullyNestedOrderingVisitsLikeRoundRobin) {
  const EquationSystem sys = parse_equation_file("domain natinf\nx1 = x2\nx2 = x3 + 1\nx3 = x1\n");
  const Wto w = Wto::parse("(x3 (x2 (x1)))");
  ASSERT_TRUE(check_wto(w, sys.deps_or_throw()));
  SolverConfig cfg;
  std::vector<Unknown> order;
  cfg.on_step = [&](const StepInfo& s) { order.push_back(s.x); };
  const SolveOutcome out = solve_rec(sys, {}, w, cfg);
  ASSERT_EQ(out.status, Status::Solved);
  ASSERT_GE(order.size(), 3u);
  EXPECT_EQ((std::vector<Unknown>(order.begin(), order.begin() + 3)),
            (std::vector<Unknown>{Unknown("x3"), Unknown("x2"), Unknown("x1")}));
  EXPECT_TRUE(oracle::post_solution(sys, out.assignment));
}

TEST(RecProperty, JoinEqualsLeastSolution) {
  std::mt19937 rng(29);
  SolverConfig cfg;
  cfg.box = BoxOp::Join;
  for (int t = 0; t < 100; ++t) {
    auto rs = oracle::random_chain_system(rng, 15, 8);
    const Wto w = build_wto(rs.unknowns, rs.deps);
    const SolveOutcome out = solve_rec(rs.system, {}, w, cfg);
    ASSERT_EQ(out.status, Status::Solved);
    const auto want = oracle::jacobi_lfp(rs.system, 1000);
    ASSERT_TRUE(want);
    for (const auto& [x, v] : *want) EXPECT_EQ(oracle::nat(out.assignment.read(x, NatInf(0))), oracle::nat(v));
  }
}
