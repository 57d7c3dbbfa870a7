#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "intertwine/equations.hpp"

namespace intertwine::frontend {

/// Affine integer expression. Var nodes carry a resolved reference once they
/// sit on a CFG edge: an env slot, or a global read.
struct Expr {
  enum class Kind { Const, Var, Neg, Add, Sub, Scale };
  Kind kind = Kind::Const;
  std::int64_t value = 0;  // Const, or the factor of Scale
  std::string name;
  int slot = -1;
  bool global = false;
  std::vector<Expr> kids;

  static Expr constant(std::int64_t k);
  static Expr var(std::string name);
  bool is_const() const { return kind == Kind::Const; }
  std::string str() const;
};

/// `var cmp k`; True/False for constant conditions.
struct Cond {
  enum class Kind { True, False, Test };
  Kind kind = Kind::True;
  Expr var;
  Cmp cmp = Cmp::Ne;
  std::int64_t k = 0;
  int line = 0;
  std::string str() const;
};

struct Stmt {
  enum class Kind { Assign, If, While, Call, Return };
  Kind kind = Kind::Assign;
  int line = 0;
  std::string target;  // Assign
  Expr value;          // Assign
  Cond cond;           // If, While
  std::vector<Stmt> body;
  std::vector<Stmt> orelse;
  std::string callee;  // Call
  std::vector<Expr> args;
};

struct Function {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> locals;  // declared `int x;`, params excluded
  std::vector<Stmt> body;
  int line = 0;
};

struct Global {
  std::string name;
  std::int64_t init = 0;
};

struct Program {
  std::vector<Global> globals;
  std::vector<Function> functions;
  const Function& main() const;
  const Function* find(const std::string& name) const;
};

/// A source file without function definitions is taken as the body of main.
Program parse(const std::string& source);
Program load(const std::string& path);

struct Label {
  enum class Kind { Assign, GuardTrue, GuardFalse, Call, GlobalWrite, Skip };
  Kind kind = Kind::Skip;
  int slot = -1;        // Assign
  std::string global;   // GlobalWrite
  Expr value;           // Assign, GlobalWrite
  Cond cond;            // guards
  std::vector<int> reset;  // Call: callee slots set to top
  std::vector<std::pair<int, Expr>> bind;  // Call: parameter slots and arguments
  std::string str(const std::vector<std::string>& vars) const;
};

struct CfgEdge {
  int src;
  int dst;
  Label label;
};

struct CfgNode {
  std::string name;  // `main@3`, `f#1@0`
  std::string function;
  int line = 0;
  /// Loops containing the node, outermost first; a head belongs to its loop.
  std::vector<int> loops;
};

struct Loop {
  int head;
  int parent;  // -1 for outermost
  bool has_inner = false;
};

struct Cfg {
  std::vector<CfgNode> nodes;
  std::vector<CfgEdge> edges;
  std::vector<Loop> loops;
  /// Env layout: main's locals unqualified, other functions' as `f.x`.
  std::vector<std::string> vars;
  std::vector<Global> globals;
  int entry = 0;
  int exit = 0;

  /// Incoming edge indices per node, in creation order.
  std::vector<std::vector<int>> preds() const;
  std::vector<std::vector<int>> succs() const;
  int find(const std::string& node) const;
  /// Nodes whose innermost loop contains no further loop.
  std::vector<int> inner_loop_nodes() const;
  std::vector<int> loop_heads() const;
};

/// Calls are inlined per call site; recursion is rejected.
Cfg build_cfg(const Program& program);

using GlobalReader = std::function<Interval(const std::string&)>;

Interval eval_expr(const Expr& e, const Env& env, const GlobalReader& read_global = {});
/// Bottom stays bottom. Global writes leave the env unchanged.
Env transfer(const Label& label, const Env& env, const GlobalReader& read_global = {});

/// One unknown per node; entry starts from all variables at top.
EquationSystem equations_from_cfg(const Cfg& cfg);

enum class GlobalInit {
  /// A root unknown `$init` emits the initializers, then demands main's exit.
  BeforeMain,
  /// Main's entry emits the initializers.
  AtMainEntry,
};

/// Globals become interval unknowns fed by side effects; global reads are
/// gets. Without globals this is equations_from_cfg.
EquationSystem equations_with_globals(const Cfg& cfg, GlobalInit init = GlobalInit::BeforeMain);

/// Where a local solver should start on equations_with_globals(cfg, init).
Unknown default_query(const Cfg& cfg, GlobalInit init = GlobalInit::BeforeMain);

inline const char* const kInitUnknown = "$init";

}  // namespace intertwine::frontend
