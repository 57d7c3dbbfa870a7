#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <sstream>

#include "intertwine/eqfile.hpp"
#include "intertwine/wto.hpp"

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun cli(const std::string& args) {
  const std::string cmd = std::string(INTERTWINE_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string corpus(const std::string& name) { return std::string(INTERTWINE_CORPUS) + "/" + name; }

std::map<std::string, std::string> values(const std::string& out) {
  std::map<std::string, std::string> m;
  std::istringstream in(out);
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    m[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return m;
}

}  // namespace

TEST(Cli, SolveExitCodes) {
  const CliRun rr = cli("solve " + corpus("e_term.eq") + " --solver rr --box warrow --budget 1000");
  EXPECT_EQ(rr.code, 2);
  EXPECT_NE(rr.out.find("BudgetExhausted"), std::string::npos);

  const CliRun srr = cli("solve " + corpus("e_term.eq") + " --solver srr --box warrow");
  EXPECT_EQ(srr.code, 0);
  EXPECT_EQ(values(srr.out), (std::map<std::string, std::string>{{"x1", "inf"}, {"x2", "inf"}, {"x3", "inf"}}));

  const CliRun empty = cli("solve " + corpus("empty.eq") + " --solver sw");
  EXPECT_EQ(empty.code, 0);
  EXPECT_TRUE(values(empty.out).empty());
}

TEST(Cli, InputErrorsExitOne) {
  EXPECT_EQ(cli("solve " + corpus("missing.eq")).code, 1);
  EXPECT_EQ(cli("solve " + corpus("nested.c")).code, 1);
  EXPECT_EQ(cli("solve " + corpus("e_term.eq") + " --solver nope").code, 1);
  EXPECT_EQ(cli("").code, 1);
}

TEST(Cli, BoxPointsAndSwitchBound) {
  EXPECT_EQ(cli("solve " + corpus("e_term.eq") + " --solver srr --box-points x3").code, 0);
  EXPECT_EQ(cli("solve " + corpus("e_term.eq") + " --solver srr --box-points x2 --budget 500").code, 2);
  EXPECT_EQ(cli("solve " + corpus("e_non.eq") + " --solver sw --budget 100").code, 2);
  EXPECT_EQ(cli("solve " + corpus("e_non.eq") + " --solver sw --switch-bound 2").code, 0);
}

TEST(Cli, AnalyzePrograms) {
  const auto nested = values(cli("analyze " + corpus("nested.c") + " --solver slr3").out);
  EXPECT_EQ(nested.at("main@4"), "{i:[0,99], j:[0,9]}");
  const auto hybrid = values(cli("analyze " + corpus("hybrid.c") + " --solver slr4").out);
  EXPECT_NE(hybrid.at("main@5").find("i:[1,10]"), std::string::npos);
  const auto globals = values(cli("analyze " + corpus("globals.c") + " --solver slr1plus").out);
  EXPECT_EQ(globals.at("g"), "[0,3]");
  EXPECT_EQ(cli("analyze " + corpus("gincr.c") + " --solver slr1plus --init at-main-entry --budget 2000").code, 2);
}

TEST(Cli, TraceLinesAreComments) {
  const CliRun r = cli("solve " + corpus("e_term.eq") + " --solver srr --trace");
  EXPECT_NE(r.out.find("# trace\n"), std::string::npos);
  EXPECT_NE(r.out.find("# 2\tx2\t0 -> inf"), std::string::npos);
}

TEST(Cli, Compare) {
  const CliRun same = cli("compare " + corpus("nested.c") + " --solvers slr3,slr3");
  EXPECT_EQ(same.code, 0);
  EXPECT_NE(same.out.find("slr3 vs slr3\tbetter=0.0%\tequal=100.0%\tworse=0.0%"), std::string::npos);
  const CliRun n = cli("compare " + corpus("nested.c") + " --solvers slr3,slr1");
  EXPECT_NE(n.out.find("worse=0.0%"), std::string::npos);
  EXPECT_EQ(n.out.find("better=0.0%"), std::string::npos);
  const CliRun h = cli("compare " + corpus("hybrid.c") + " --solvers slr4,slr3");
  EXPECT_NE(h.out.find("worse=0.0%"), std::string::npos);
  EXPECT_EQ(h.out.find("better=0.0%"), std::string::npos);
}

TEST(Cli, Wto) {
  const CliRun r = cli("wto " + corpus("ex_wto.eq"));
  EXPECT_EQ(r.code, 0);
  const auto sys = intertwine::load_equation_file(corpus("ex_wto.eq"));
  std::string text = r.out.substr(0, r.out.find('\n'));
  const intertwine::Wto w = intertwine::Wto::parse(text);
  EXPECT_TRUE(intertwine::check_wto(w, sys.deps_or_throw()));
  EXPECT_EQ(w.heads(), (std::vector<intertwine::Unknown>{intertwine::Unknown("x2"), intertwine::Unknown("x6")}));
  EXPECT_EQ(cli("wto " + corpus("e_term.eq")).out, "(x1 x3 x2)\n");
}

TEST(Cli, OutputIsDeterministic) {
  for (const std::string args : {"analyze " + corpus("hybrid.c") + " --solver slr4 --trace",
                                 "compare " + corpus("globals.c") + " --solvers slr1,slr3,two-phase,rec",
                                 "solve " + corpus("ex_wto.eq") + " --solver w --policy fifo --trace"}) {
    const CliRun a = cli(args);
    const CliRun b = cli(args);
    EXPECT_EQ(a.code, b.code) << args;
    EXPECT_EQ(a.out, b.out) << args;
    EXPECT_FALSE(a.out.empty()) << args;
  }
}
