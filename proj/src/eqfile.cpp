#include "intertwine/eqfile.hpp"

#include <fstream>
#include <memory>
#include <sstream>
#include <unordered_set>

#include "intertwine/errors.hpp"
#include "lexer.hpp"

namespace intertwine {

namespace {

using detail::Token;
using detail::TokenStream;

enum class Dom { Interval, NatInf, Env };

struct Expr {
  enum class Kind { Ref, Lit, Add, Sub, Call };
  Kind kind;
  Unknown ref;
  Value lit;
  std::string fn;
  std::vector<std::shared_ptr<Expr>> args;
  // Extra operands of guard/set: comparison, constant, variable slot.
  Cmp cmp = Cmp::Eq;
  std::int64_t k = 0;
  int var = -1;
  Interval ival;
};
using ExprPtr = std::shared_ptr<Expr>;

Cmp parse_cmp(TokenStream& ts) {
  static const std::pair<const char*, Cmp> kCmps[] = {{"<=", Cmp::Le}, {">=", Cmp::Ge}, {"==", Cmp::Eq},
                                                      {"!=", Cmp::Ne}, {"<", Cmp::Lt},  {">", Cmp::Gt}};
  for (const auto& [s, c] : kCmps) {
    if (ts.accept(s)) return c;
  }
  ts.fail("expected comparison operator");
}

class Parser {
 public:
  Parser(TokenStream& ts, Dom dom, const std::vector<std::string>& vars) : ts_(ts), dom_(dom), vars_(vars) {}

  ExprPtr expr() {
    ExprPtr lhs = atom();
    while (ts_.at_punct("+") || ts_.at_punct("-")) {
      const bool add = ts_.take().text == "+";
      auto e = std::make_shared<Expr>();
      e->kind = add ? Expr::Kind::Add : Expr::Kind::Sub;
      e->args = {lhs, atom()};
      lhs = e;
    }
    return lhs;
  }

  std::vector<Unknown> refs;

 private:
  Bound bound() {
    const bool neg = ts_.accept("-");
    if (ts_.at_ident("inf")) {
      ts_.take();
      return neg ? Bound::neg_inf() : Bound::pos_inf();
    }
    const std::int64_t v = ts_.expect_number();
    return Bound(neg ? -v : v);
  }

  Interval interval_lit() {
    if (ts_.at_ident("top")) {
      ts_.take();
      return Interval::top();
    }
    if (ts_.at_ident("bot")) {
      ts_.take();
      return Interval::bottom();
    }
    if (!ts_.at_punct("[")) {
      const bool neg = ts_.accept("-");
      const std::int64_t v = ts_.expect_number();
      return Interval::singleton(neg ? -v : v);
    }
    const Token& at = ts_.expect("[");
    Bound lo = bound();
    ts_.expect(",");
    Bound hi = bound();
    ts_.expect("]");
    if (lo.is_pos_inf() || hi.is_neg_inf() || hi < lo) throw SyntaxError("malformed interval", at.line, at.column);
    return {lo, hi};
  }

  int var_slot() {
    const Token& t = ts_.peek();
    const std::string name = ts_.expect_ident();
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) return static_cast<int>(i);
    }
    throw SyntaxError("unknown environment variable '" + name + "'", t.line, t.column);
  }

  ExprPtr lit(Value v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Lit;
    e->lit = std::move(v);
    return e;
  }

  ExprPtr atom() {
    const Token t = ts_.peek();
    if (ts_.accept("(")) {
      ExprPtr e = expr();
      ts_.expect(")");
      return e;
    }
    if (ts_.at_punct("{")) {
      if (dom_ != Dom::Env) ts_.fail("environment literal outside an env domain");
      ts_.take();
      std::vector<Interval> vals(vars_.size(), Interval::top());
      if (!ts_.at_punct("}")) {
        do {
          const int slot = var_slot();
          ts_.expect(":");
          vals[slot] = interval_lit();
        } while (ts_.accept(","));
      }
      ts_.expect("}");
      return lit(Env(std::move(vals)));
    }
    if (t.kind == Token::Kind::Number || ts_.at_punct("[") || ts_.at_punct("-")) {
      if (dom_ == Dom::NatInf) {
        if (ts_.at_punct("-") || ts_.at_punct("[")) ts_.fail("natinf constants are non-negative integers");
        return lit(NatInf(static_cast<std::uint64_t>(ts_.expect_number())));
      }
      if (dom_ == Dom::Env) ts_.fail("scalar constant where an environment is expected");
      return lit(interval_lit());
    }
    if (t.kind != Token::Kind::Ident) ts_.fail("expected expression");
    const std::string name = ts_.take().text;
    if (name == "inf" && dom_ == Dom::NatInf) return lit(NatInf::inf());
    if (name == "bot") return lit(dom_ == Dom::NatInf ? Value(NatInf(0)) : dom_ == Dom::Env ? Value(Env::bottom())
                                                                                           : Value(Interval::bottom()));
    if (name == "top") {
      return lit(dom_ == Dom::NatInf ? Value(NatInf::inf())
                 : dom_ == Dom::Env  ? Value(Env::top(vars_.size()))
                                     : Value(Interval::top()));
    }
    if (!ts_.at_punct("(")) {
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Ref;
      e->ref = Unknown(name);
      refs.push_back(e->ref);
      return e;
    }
    ts_.take();
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Call;
    e->fn = name;
    if (name == "guard") {
      e->cmp = parse_cmp(ts_);
      ts_.expect(",");
      const bool neg = ts_.accept("-");
      e->k = ts_.expect_number() * (neg ? -1 : 1);
      ts_.expect(",");
      e->args.push_back(expr());
      if (dom_ == Dom::Env) {
        ts_.expect(",");
        e->var = var_slot();
      }
    } else if (name == "set") {
      if (dom_ != Dom::Env) ts_.fail("set() needs an env domain");
      e->args.push_back(expr());
      ts_.expect(",");
      e->var = var_slot();
      ts_.expect(",");
      e->ival = interval_lit();
    } else {
      static const std::unordered_set<std::string> kFns = {"join", "meet", "min", "max", "widenconst", "ite0"};
      if (!kFns.count(name)) throw SyntaxError("unknown function '" + name + "'", t.line, t.column);
      do {
        e->args.push_back(expr());
      } while (ts_.accept(","));
      const std::size_t want = name == "ite0" ? 3 : name == "widenconst" ? 2 : 0;
      if ((want && e->args.size() != want) || e->args.empty()) {
        throw SyntaxError("wrong number of arguments to " + name, t.line, t.column);
      }
    }
    ts_.expect(")");
    return e;
  }

  TokenStream& ts_;
  Dom dom_;
  const std::vector<std::string>& vars_;
};

Value pointwise(const Value& a, const Value& b, Interval (*op)(const Interval&, const Interval&)) {
  if (std::holds_alternative<Interval>(a)) return op(as_interval(a), as_interval(b));
  const Env& ea = as_env(a);
  const Env& eb = as_env(b);
  if (ea.is_bottom() || eb.is_bottom()) return Env::bottom();
  std::vector<Interval> out;
  for (std::size_t i = 0; i < ea.size(); ++i) out.push_back(op(ea.at(i), eb.at(i)));
  return Env(std::move(out));
}

Value eval(const Expr& e, const DomainOps& ops, Dom dom, const Getter& get) {
  switch (e.kind) {
    case Expr::Kind::Ref:
      return get(e.ref);
    case Expr::Kind::Lit:
      return e.lit;
    case Expr::Kind::Add: {
      Value a = eval(*e.args[0], ops, dom, get);
      Value b = eval(*e.args[1], ops, dom, get);
      if (dom == Dom::NatInf) return as_natinf(a).plus(as_natinf(b));
      return pointwise(a, b, interval_add);
    }
    case Expr::Kind::Sub: {
      Value a = eval(*e.args[0], ops, dom, get);
      Value b = eval(*e.args[1], ops, dom, get);
      if (dom == Dom::NatInf) throw EvalError("subtraction is not defined on natinf");
      return pointwise(a, b, interval_sub);
    }
    case Expr::Kind::Call:
      break;
  }
  std::vector<Value> args;
  for (const auto& a : e.args) args.push_back(eval(*a, ops, dom, get));
  const std::string& fn = e.fn;
  const auto fold = [&](const std::function<Value(const Value&, const Value&)>& f) {
    Value acc = args[0];
    for (std::size_t i = 1; i < args.size(); ++i) acc = f(acc, args[i]);
    return acc;
  };
  if (fn == "join") return fold(ops.join);
  if (fn == "meet") return fold(ops.meet);
  if (fn == "widenconst") return ops.widen(args[0], args[1]);
  if (fn == "min" || fn == "max") {
    if (dom == Dom::NatInf) return fold(fn == "min" ? ops.meet : ops.join);
    if (dom == Dom::Env) throw EvalError(fn + " is not defined on environments");
    auto op = fn == "min" ? interval_min : interval_max;
    return fold([op](const Value& a, const Value& b) -> Value { return op(as_interval(a), as_interval(b)); });
  }
  if (fn == "ite0") {
    if (dom == Dom::NatInf) return as_natinf(args[0]) == NatInf(0) ? args[1] : args[2];
    if (dom == Dom::Env) throw EvalError("ite0 is not defined on environments");
    const Interval& c = as_interval(args[0]);
    if (c.is_bottom()) return Interval::bottom();
    if (c == Interval::singleton(0)) return args[1];
    if (!c.leq(Interval::singleton(0)) && guard(Cmp::Eq, c, 0).is_bottom()) return args[2];
    return ops.join(args[1], args[2]);
  }
  if (fn == "guard") {
    if (dom == Dom::NatInf) {
      const NatInf& v = as_natinf(args[0]);
      const NatInf k(static_cast<std::uint64_t>(std::max<std::int64_t>(e.k, 0)));
      bool holds = false;
      switch (e.cmp) {
        case Cmp::Lt: holds = v < k; break;
        case Cmp::Le: holds = v <= k; break;
        case Cmp::Gt: holds = k < v; break;
        case Cmp::Ge: holds = k <= v; break;
        case Cmp::Eq: holds = v == k; break;
        case Cmp::Ne: holds = !(v == k); break;
      }
      return holds ? args[0] : ops.bottom;
    }
    if (dom == Dom::Interval) return guard(e.cmp, as_interval(args[0]), e.k);
    const Env& env = as_env(args[0]);
    if (env.is_bottom()) return env;
    return env.with(e.var, guard(e.cmp, env.at(e.var), e.k));
  }
  if (fn == "set") {
    const Env& env = as_env(args[0]);
    if (env.is_bottom()) return env;
    return env.with(e.var, e.ival);
  }
  throw EvalError("unknown function " + fn);
}

}  // namespace

EquationSystem parse_equation_file(const std::string& text) {
  TokenStream ts(detail::lex(text, "#", true));
  const auto skip_newlines = [&] {
    while (ts.peek().kind == Token::Kind::Newline) ts.take();
  };
  const auto end_line = [&] {
    if (ts.peek().kind != Token::Kind::Newline && ts.peek().kind != Token::Kind::End) ts.fail("expected end of line");
    skip_newlines();
  };

  skip_newlines();
  if (!ts.at_ident("domain")) ts.fail("expected 'domain' header");
  ts.take();
  Dom dom = Dom::Interval;
  std::vector<std::string> vars;
  const std::string dname = ts.expect_ident();
  DomainOps ops;
  if (dname == "interval") {
    ops = interval_ops();
  } else if (dname == "natinf") {
    dom = Dom::NatInf;
    ops = natinf_ops();
  } else if (dname == "env") {
    dom = Dom::Env;
    ts.expect("(");
    do {
      vars.push_back(ts.expect_ident());
    } while (ts.accept(","));
    ts.expect(")");
    ops = env_ops(vars);
  } else {
    throw SyntaxError("unknown domain '" + dname + "'", ts.peek().line, ts.peek().column);
  }
  end_line();

  struct Line {
    Unknown x;
    ExprPtr rhs;
    std::vector<Unknown> refs;
    Token at;
  };
  std::vector<Line> lines;
  std::unordered_set<Unknown> defined;
  while (ts.peek().kind != Token::Kind::End) {
    const Token at = ts.peek();
    const Unknown x(ts.expect_ident());
    if (!defined.insert(x).second) throw SyntaxError("duplicate equation for " + x.str(), at.line, at.column);
    ts.expect("=");
    Parser p(ts, dom, vars);
    ExprPtr rhs = p.expr();
    end_line();
    lines.push_back({x, rhs, std::move(p.refs), at});
  }

  std::vector<std::pair<Unknown, RightHandSide>> eqs;
  DepMap deps;
  for (auto& l : lines) {
    OrderedSet<Unknown> d;
    for (const auto& r : l.refs) {
      if (!defined.count(r)) {
        throw UndeclaredVariable(std::to_string(l.at.line) + ": unknown '" + r.str() + "' has no equation");
      }
      d.insert(r);
    }
    deps[l.x] = d.items();
    ExprPtr rhs = l.rhs;
    eqs.emplace_back(l.x, [rhs, ops, dom](const Getter& get, const SideEmitter&) { return eval(*rhs, ops, dom, get); });
  }
  return make_finite_system(ops, std::move(eqs), std::move(deps));
}

EquationSystem load_equation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_equation_file(buf.str());
}

}  // namespace intertwine
