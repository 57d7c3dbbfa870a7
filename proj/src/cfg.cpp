#include <algorithm>
#include <map>
#include <unordered_map>

#include "intertwine/errors.hpp"
#include "intertwine/frontend.hpp"

namespace intertwine::frontend {

std::vector<std::vector<int>> Cfg::preds() const {
  std::vector<std::vector<int>> out(nodes.size());
  for (std::size_t e = 0; e < edges.size(); ++e) out[edges[e].dst].push_back(static_cast<int>(e));
  return out;
}

std::vector<std::vector<int>> Cfg::succs() const {
  std::vector<std::vector<int>> out(nodes.size());
  for (std::size_t e = 0; e < edges.size(); ++e) out[edges[e].src].push_back(static_cast<int>(e));
  return out;
}

int Cfg::find(const std::string& node) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].name == node) return static_cast<int>(i);
  }
  return -1;
}

std::vector<int> Cfg::inner_loop_nodes() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].loops.empty() && !loops[nodes[i].loops.back()].has_inner) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> Cfg::loop_heads() const {
  std::vector<int> out;
  for (const auto& l : loops) out.push_back(l.head);
  return out;
}

std::string Label::str(const std::vector<std::string>& vars) const {
  switch (kind) {
    case Kind::Assign:
      return vars[slot] + " = " + value.str();
    case Kind::GlobalWrite:
      return global + " = " + value.str();
    case Kind::GuardTrue:
      return "[" + cond.str() + "]";
    case Kind::GuardFalse:
      return "[!(" + cond.str() + ")]";
    case Kind::Call: {
      std::string out = "call(";
      for (std::size_t i = 0; i < bind.size(); ++i) {
        if (i) out += ", ";
        out += vars[bind[i].first] + " = " + bind[i].second.str();
      }
      return out + ")";
    }
    case Kind::Skip:
      return "skip";
  }
  return {};
}

namespace {

class Builder {
 public:
  explicit Builder(const Program& p) : p_(p) {
    const auto add = [&](const Function& f, const std::string& prefix) {
      auto& scope = slots_[f.name];
      for (const auto* names : {&f.params, &f.locals}) {
        for (const auto& v : *names) {
          scope[v] = static_cast<int>(cfg_.vars.size());
          cfg_.vars.push_back(prefix + v);
        }
      }
    };
    add(p.main(), "");
    for (const auto& f : p.functions) {
      if (f.name != "main") add(f, f.name + ".");
    }
    cfg_.globals = p.globals;
  }

  Cfg build() {
    Instance main{&p_.main(), "main", 0, {}};
    cfg_.entry = node(main, p_.main().line);
    cfg_.exit = body_of(main, cfg_.entry);
    return std::move(cfg_);
  }

 private:
  struct Instance {
    const Function* fn;
    std::string prefix;
    int counter = 0;
    std::vector<int> returns;
  };

  int node(Instance& inst, int line) {
    cfg_.nodes.push_back({inst.prefix + "@" + std::to_string(inst.counter++), inst.fn->name, line, loop_stack_});
    return static_cast<int>(cfg_.nodes.size()) - 1;
  }

  void edge(int src, int dst, Label label) { cfg_.edges.push_back({src, dst, std::move(label)}); }

  Expr resolve(const Instance& inst, Expr e) const {
    if (e.kind == Expr::Kind::Var) {
      const auto& scope = slots_.at(inst.fn->name);
      auto it = scope.find(e.name);
      if (it != scope.end()) {
        e.slot = it->second;
      } else {
        e.global = true;
      }
    }
    for (auto& k : e.kids) k = resolve(inst, std::move(k));
    return e;
  }

  Cond resolve(const Instance& inst, Cond c) const {
    if (c.kind == Cond::Kind::Test) c.var = resolve(inst, std::move(c.var));
    return c;
  }

  Label guard(const Instance& inst, const Cond& c, bool taken) const {
    Label l;
    l.kind = taken ? Label::Kind::GuardTrue : Label::Kind::GuardFalse;
    l.cond = resolve(inst, c);
    return l;
  }

  // Returns the exit node of the function instance.
  int body_of(Instance& inst, int entry) {
    const int end = block(inst, inst.fn->body, entry);
    if (inst.returns.empty()) return end;
    const int exit = node(inst, inst.fn->line);
    for (int r : inst.returns) edge(r, exit, {});
    if (end >= 0) edge(end, exit, {});
    return exit;
  }

  // -1 marks an unreachable position; statements there are dropped.
  int block(Instance& inst, const std::vector<Stmt>& body, int cur) {
    for (const auto& s : body) {
      if (cur < 0) break;
      cur = statement(inst, s, cur);
    }
    return cur;
  }

  int statement(Instance& inst, const Stmt& s, int cur) {
    switch (s.kind) {
      case Stmt::Kind::Assign: {
        Label l;
        l.value = resolve(inst, s.value);
        const auto& scope = slots_.at(inst.fn->name);
        auto it = scope.find(s.target);
        if (it != scope.end()) {
          l.kind = Label::Kind::Assign;
          l.slot = it->second;
        } else {
          l.kind = Label::Kind::GlobalWrite;
          l.global = s.target;
        }
        const int n = node(inst, s.line);
        edge(cur, n, std::move(l));
        return n;
      }
      case Stmt::Kind::If: {
        const int t0 = node(inst, s.line);
        edge(cur, t0, guard(inst, s.cond, true));
        const int then_end = block(inst, s.body, t0);
        int else_end = -1;
        if (!s.orelse.empty()) {
          const int e0 = node(inst, s.line);
          edge(cur, e0, guard(inst, s.cond, false));
          else_end = block(inst, s.orelse, e0);
        }
        if (then_end < 0 && else_end < 0 && !s.orelse.empty()) return -1;
        const int join = node(inst, s.line);
        if (then_end >= 0) edge(then_end, join, {});
        if (s.orelse.empty()) {
          edge(cur, join, guard(inst, s.cond, false));
        } else if (else_end >= 0) {
          edge(else_end, join, {});
        }
        return join;
      }
      case Stmt::Kind::While: {
        const int head = cur;
        const int id = static_cast<int>(cfg_.loops.size());
        const int parent = loop_stack_.empty() ? -1 : loop_stack_.back();
        cfg_.loops.push_back({head, parent, false});
        if (parent >= 0) cfg_.loops[parent].has_inner = true;
        cfg_.nodes[head].loops.push_back(id);
        loop_stack_.push_back(id);
        const int b0 = node(inst, s.line);
        edge(head, b0, guard(inst, s.cond, true));
        const int body_end = block(inst, s.body, b0);
        if (body_end >= 0) edge(body_end, head, {});
        loop_stack_.pop_back();
        const int exit = node(inst, s.line);
        edge(head, exit, guard(inst, s.cond, false));
        return exit;
      }
      case Stmt::Kind::Call: {
        const Function* callee = p_.find(s.callee);
        if (std::find(active_.begin(), active_.end(), callee->name) != active_.end() || callee->name == "main") {
          throw RecursionUnsupported(std::to_string(s.line) + ": recursive call to " + callee->name);
        }
        Instance sub{callee, callee->name + "#" + std::to_string(++instances_[callee->name]), 0, {}};
        Label l;
        l.kind = Label::Kind::Call;
        const auto& scope = slots_.at(callee->name);
        for (const auto* names : {&callee->params, &callee->locals}) {
          for (const auto& v : *names) l.reset.push_back(scope.at(v));
        }
        for (std::size_t i = 0; i < s.args.size(); ++i) {
          l.bind.emplace_back(scope.at(callee->params[i]), resolve(inst, s.args[i]));
        }
        const int entry = node(sub, callee->line);
        edge(cur, entry, std::move(l));
        active_.push_back(callee->name);
        const int exit = body_of(sub, entry);
        active_.pop_back();
        const int back = node(inst, s.line);
        edge(exit, back, {});
        return back;
      }
      case Stmt::Kind::Return:
        inst.returns.push_back(cur);
        return -1;
    }
    return cur;
  }

  const Program& p_;
  Cfg cfg_;
  std::unordered_map<std::string, std::unordered_map<std::string, int>> slots_;
  std::map<std::string, int> instances_;
  std::vector<std::string> active_{"main"};
  std::vector<int> loop_stack_;
};

}  // namespace

Cfg build_cfg(const Program& program) { return Builder(program).build(); }

Interval eval_expr(const Expr& e, const Env& env, const GlobalReader& read_global) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return Interval::singleton(e.value);
    case Expr::Kind::Var:
      if (e.slot >= 0) return env.at(e.slot);
      if (!read_global) throw EvalError("unresolved variable " + e.name);
      return read_global(e.name);
    case Expr::Kind::Neg:
      return interval_neg(eval_expr(e.kids[0], env, read_global));
    case Expr::Kind::Add:
      return interval_add(eval_expr(e.kids[0], env, read_global), eval_expr(e.kids[1], env, read_global));
    case Expr::Kind::Sub:
      return interval_sub(eval_expr(e.kids[0], env, read_global), eval_expr(e.kids[1], env, read_global));
    case Expr::Kind::Scale:
      return interval_scale(eval_expr(e.kids[0], env, read_global), e.value);
  }
  return Interval::bottom();
}

namespace {

Env apply_guard(const Cond& c, bool taken, const Env& env, const GlobalReader& read_global) {
  if (c.kind != Cond::Kind::Test) return (c.kind == Cond::Kind::True) == taken ? env : Env::bottom();
  const Cmp cmp = taken ? c.cmp : negate(c.cmp);
  const Interval v = eval_expr(c.var, env, read_global);
  const Interval kept = guard(cmp, v, c.k);
  if (kept.is_bottom()) return Env::bottom();
  return c.var.slot >= 0 ? env.with(c.var.slot, kept) : env;
}

}  // namespace

Env transfer(const Label& label, const Env& env, const GlobalReader& read_global) {
  if (env.is_bottom()) return env;
  switch (label.kind) {
    case Label::Kind::Assign:
      return env.with(label.slot, eval_expr(label.value, env, read_global));
    case Label::Kind::GlobalWrite:
    case Label::Kind::Skip:
      return env;
    case Label::Kind::GuardTrue:
    case Label::Kind::GuardFalse:
      return apply_guard(label.cond, label.kind == Label::Kind::GuardTrue, env, read_global);
    case Label::Kind::Call: {
      Env out = env;
      for (int slot : label.reset) out = out.with(slot, Interval::top());
      // Arguments are evaluated in the caller's env.
      for (const auto& [slot, arg] : label.bind) out = out.with(slot, eval_expr(arg, env, read_global));
      return out;
    }
  }
  return env;
}

namespace {

void globals_read(const Expr& e, std::vector<Unknown>& out) {
  if (e.kind == Expr::Kind::Var && e.global) {
    const Unknown g(e.name);
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  }
  for (const auto& k : e.kids) globals_read(k, out);
}

void globals_read(const Label& l, std::vector<Unknown>& out) {
  globals_read(l.value, out);
  if (l.kind == Label::Kind::GuardTrue || l.kind == Label::Kind::GuardFalse) globals_read(l.cond.var, out);
  for (const auto& b : l.bind) globals_read(b.second, out);
}

void push_unique(std::vector<Unknown>& v, const Unknown& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

struct Shared {
  Cfg cfg;
  std::vector<std::vector<int>> preds;
  std::unordered_map<Unknown, int> index;
  DomainOps ops;
  bool with_globals = false;
  GlobalInit init = GlobalInit::BeforeMain;
};

// The initializers as a side effect per global.
void emit_inits(const Shared& s, const SideEmitter& side) {
  for (const auto& g : s.cfg.globals) side(Unknown(g.name), Interval::singleton(g.init));
}

Value node_rhs(const Shared& s, int n, const Getter& get, const SideEmitter& side) {
  const Cfg& cfg = s.cfg;
  Value acc = n == cfg.entry ? Value(Env::top(cfg.vars.size())) : s.ops.bottom;
  if (n == cfg.entry && s.with_globals && s.init == GlobalInit::AtMainEntry) emit_inits(s, side);
  const GlobalReader read = [&](const std::string& g) {
    Value v = get(Unknown(g));
    return is_bottom(v) ? Interval::bottom() : as_interval(v);
  };
  std::map<std::string, Interval> writes;
  for (int e : s.preds[n]) {
    const CfgEdge& edge = cfg.edges[e];
    Value src = get(Unknown(cfg.nodes[edge.src].name));
    if (is_bottom(src)) continue;
    const Env& env = as_env(src);
    if (edge.label.kind == Label::Kind::GlobalWrite) {
      Interval v = eval_expr(edge.label.value, env, read);
      auto [it, fresh] = writes.emplace(edge.label.global, v);
      if (!fresh) it->second = it->second.join(v);
    }
    acc = s.ops.join(acc, transfer(edge.label, env, s.with_globals ? read : GlobalReader{}));
  }
  for (const auto& [g, v] : writes) {
    if (!v.is_bottom()) side(Unknown(g), v);
  }
  return acc;
}

EquationSystem make_system(Shared shared) {
  auto s = std::make_shared<Shared>(std::move(shared));
  const Cfg& cfg = s->cfg;
  s->preds = cfg.preds();
  EquationSystem sys;
  sys.domain = s->ops;
  std::vector<Unknown> declared;
  DepMap deps;
  DepMap sides;
  const bool init_root = s->with_globals && s->init == GlobalInit::BeforeMain;
  if (init_root) {
    const Unknown root(kInitUnknown);
    declared.push_back(root);
    deps[root] = {Unknown(cfg.nodes[cfg.exit].name)};
    for (const auto& g : cfg.globals) sides[root].push_back(Unknown(g.name));
  }
  for (std::size_t n = 0; n < cfg.nodes.size(); ++n) {
    const Unknown x(cfg.nodes[n].name);
    s->index.emplace(x, static_cast<int>(n));
    declared.push_back(x);
    auto& d = deps[x];
    for (int e : s->preds[n]) {
      push_unique(d, Unknown(cfg.nodes[cfg.edges[e].src].name));
      if (s->with_globals) globals_read(cfg.edges[e].label, d);
      if (cfg.edges[e].label.kind == Label::Kind::GlobalWrite) push_unique(sides[x], Unknown(cfg.edges[e].label.global));
    }
    if (static_cast<int>(n) == cfg.entry && s->with_globals && s->init == GlobalInit::AtMainEntry) {
      for (const auto& g : cfg.globals) push_unique(sides[x], Unknown(g.name));
    }
  }
  if (s->with_globals) {
    for (const auto& g : cfg.globals) {
      declared.emplace_back(g.name);
      deps[Unknown(g.name)] = {};
    }
  }
  sys.rhs = [s, init_root](const Unknown& x, const Getter& get, const SideEmitter& side) -> Value {
    auto it = s->index.find(x);
    if (it != s->index.end()) return node_rhs(*s, it->second, get, side);
    if (init_root && x == Unknown(kInitUnknown)) {
      emit_inits(*s, side);
      return get(Unknown(s->cfg.nodes[s->cfg.exit].name));
    }
    return s->ops.bottom;
  };
  sys.declared = std::move(declared);
  sys.static_deps = std::move(deps);
  if (s->with_globals) {
    sys.static_sides = std::move(sides);
    sys.side_effecting = true;
  }
  return sys;
}

}  // namespace

EquationSystem equations_from_cfg(const Cfg& cfg) {
  if (!cfg.globals.empty()) throw HasGlobals("program has globals; use equations_with_globals");
  Shared s;
  s.cfg = cfg;
  s.ops = env_ops(cfg.vars);
  return make_system(std::move(s));
}

EquationSystem equations_with_globals(const Cfg& cfg, GlobalInit init) {
  if (cfg.globals.empty()) return equations_from_cfg(cfg);
  Shared s;
  s.cfg = cfg;
  s.ops = env_ops(cfg.vars);
  s.with_globals = true;
  s.init = init;
  return make_system(std::move(s));
}

Unknown default_query(const Cfg& cfg, GlobalInit init) {
  if (!cfg.globals.empty() && init == GlobalInit::BeforeMain) return Unknown(kInitUnknown);
  return Unknown(cfg.nodes[cfg.exit].name);
}

}  // namespace intertwine::frontend
