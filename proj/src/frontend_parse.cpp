#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "intertwine/errors.hpp"
#include "intertwine/frontend.hpp"
#include "lexer.hpp"

namespace intertwine::frontend {

Expr Expr::constant(std::int64_t k) {
  Expr e;
  e.kind = Kind::Const;
  e.value = k;
  return e;
}

Expr Expr::var(std::string name) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(name);
  return e;
}

std::string Expr::str() const {
  switch (kind) {
    case Kind::Const:
      return std::to_string(value);
    case Kind::Var:
      return name;
    case Kind::Neg:
      return "-" + kids[0].str();
    case Kind::Add:
      return "(" + kids[0].str() + " + " + kids[1].str() + ")";
    case Kind::Sub:
      return "(" + kids[0].str() + " - " + kids[1].str() + ")";
    case Kind::Scale:
      return std::to_string(value) + "*" + kids[0].str();
  }
  return {};
}

std::string Cond::str() const {
  switch (kind) {
    case Kind::True:
      return "true";
    case Kind::False:
      return "false";
    case Kind::Test:
      return var.name + " " + cmp_str(cmp) + " " + std::to_string(k);
  }
  return {};
}

const Function& Program::main() const {
  const Function* f = find("main");
  if (!f) throw SyntaxError("program has no main", 1, 1);
  return *f;
}

const Function* Program::find(const std::string& name) const {
  for (const auto& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

namespace {

using detail::Token;
using detail::TokenStream;

bool is_cmp(const TokenStream& ts) {
  for (const char* op : {"<", "<=", ">", ">=", "==", "!="}) {
    if (ts.at_punct(op)) return true;
  }
  return false;
}

Cmp to_cmp(const std::string& s) {
  if (s == "<") return Cmp::Lt;
  if (s == "<=") return Cmp::Le;
  if (s == ">") return Cmp::Gt;
  if (s == ">=") return Cmp::Ge;
  if (s == "==") return Cmp::Eq;
  return Cmp::Ne;
}

bool holds(std::int64_t a, Cmp c, std::int64_t b) {
  switch (c) {
    case Cmp::Lt: return a < b;
    case Cmp::Le: return a <= b;
    case Cmp::Gt: return a > b;
    case Cmp::Ge: return a >= b;
    case Cmp::Eq: return a == b;
    case Cmp::Ne: return a != b;
  }
  return false;
}

[[noreturn]] void unsupported(const Token& at, const std::string& what) {
  throw UnsupportedExpression(std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + what);
}

Expr binary(Expr::Kind kind, Expr a, Expr b) {
  if (a.is_const() && b.is_const()) {
    return Expr::constant(kind == Expr::Kind::Add ? a.value + b.value : a.value - b.value);
  }
  Expr e;
  e.kind = kind;
  e.kids = {std::move(a), std::move(b)};
  return e;
}

Expr negated(Expr a) {
  if (a.is_const()) return Expr::constant(-a.value);
  Expr e;
  e.kind = Expr::Kind::Neg;
  e.kids = {std::move(a)};
  return e;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : ts_(detail::lex(src, "//", false)) {}

  Program program() {
    Program p;
    Function top;
    top.name = "main";
    std::vector<Global> implicit_globals;
    int loose_line = 0;
    while (ts_.peek().kind != Token::Kind::End) {
      if (ts_.at_ident("global")) {
        ts_.take();
        if (!ts_.at_ident("int")) ts_.fail("expected 'int'");
        ts_.take();
        p.globals.push_back(global_decl());
        continue;
      }
      if ((ts_.at_ident("int") || ts_.at_ident("void")) && ts_.peek(1).kind == Token::Kind::Ident &&
          ts_.peek(2).kind == Token::Kind::Punct && ts_.peek(2).text == "(") {
        ts_.take();
        Function f = function();
        if (f.name == "main" && p.find("main")) {
          throw DuplicateMain(std::to_string(f.line) + ": main is defined twice");
        }
        if (p.find(f.name)) throw SyntaxError("function " + f.name + " is defined twice", f.line, 1);
        p.functions.push_back(std::move(f));
        continue;
      }
      if (ts_.at_ident("int") && ts_.peek(1).kind == Token::Kind::Ident) {
        // Global or a local of the implicit main, decided once we know whether
        // the file defines functions.
        ts_.take();
        implicit_globals.push_back(global_decl_or_local(top));
        continue;
      }
      current_ = &top;
      if (!loose_line) loose_line = ts_.peek().line;
      top.body.push_back(statement());
    }
    if (p.functions.empty()) {
      p.functions.push_back(std::move(top));
    } else {
      if (loose_line) throw SyntaxError("statement outside of a function", loose_line, 1);
      p.globals.insert(p.globals.end(), implicit_globals.begin(), implicit_globals.end());
    }
    validate(p);
    return p;
  }

 private:
  std::int64_t signed_number() {
    const bool neg = ts_.accept("-");
    const std::int64_t v = ts_.expect_number();
    return neg ? -v : v;
  }

  Global global_decl() {
    Global g;
    g.name = ts_.expect_ident();
    if (ts_.accept("=")) g.init = signed_number();
    ts_.expect(";");
    return g;
  }

  // Top-level `int x;` or `int x = k;`. Recorded as a local of the implicit
  // main (with an initializing assignment) and as a global candidate.
  Global global_decl_or_local(Function& top) {
    const Token at = ts_.peek();
    Global g;
    g.name = ts_.expect_ident();
    declare(top, g.name, at);
    if (ts_.accept("=")) {
      const Token vt = ts_.peek();
      g.init = signed_number();
      Stmt s;
      s.kind = Stmt::Kind::Assign;
      s.line = vt.line;
      s.target = g.name;
      s.value = Expr::constant(g.init);
      top.body.push_back(s);
    }
    ts_.expect(";");
    return g;
  }

  void declare(Function& f, const std::string& name, const Token& at) {
    if (std::find(f.locals.begin(), f.locals.end(), name) != f.locals.end() ||
        std::find(f.params.begin(), f.params.end(), name) != f.params.end()) {
      throw SyntaxError("variable " + name + " declared twice", at.line, at.column);
    }
    f.locals.push_back(name);
  }

  Function function() {
    Function f;
    f.line = ts_.peek().line;
    f.name = ts_.expect_ident();
    ts_.expect("(");
    if (!ts_.at_punct(")")) {
      if (ts_.at_ident("void") && ts_.peek(1).kind == Token::Kind::Punct && ts_.peek(1).text == ")") {
        ts_.take();
      } else {
        do {
          if (!ts_.at_ident("int")) ts_.fail("expected 'int'");
          ts_.take();
          const Token at = ts_.peek();
          std::string name = ts_.expect_ident();
          if (std::find(f.params.begin(), f.params.end(), name) != f.params.end()) {
            throw SyntaxError("parameter " + name + " declared twice", at.line, at.column);
          }
          f.params.push_back(std::move(name));
        } while (ts_.accept(","));
      }
    }
    ts_.expect(")");
    current_ = &f;
    ts_.expect("{");
    while (!ts_.accept("}")) {
      if (ts_.peek().kind == Token::Kind::End) ts_.fail("expected '}'");
      append(f.body);
    }
    return f;
  }

  // A statement, or a declaration that may expand to an assignment.
  void append(std::vector<Stmt>& out) {
    if (ts_.at_ident("int")) {
      ts_.take();
      do {
        const Token at = ts_.peek();
        std::string name = ts_.expect_ident();
        declare(*current_, name, at);
        if (ts_.accept("=")) {
          Stmt s;
          s.kind = Stmt::Kind::Assign;
          s.line = at.line;
          s.target = name;
          s.value = expr();
          out.push_back(std::move(s));
        }
      } while (ts_.accept(","));
      ts_.expect(";");
      return;
    }
    if (ts_.accept(";")) return;
    out.push_back(statement());
  }

  std::vector<Stmt> block() {
    std::vector<Stmt> out;
    if (ts_.accept("{")) {
      while (!ts_.accept("}")) {
        if (ts_.peek().kind == Token::Kind::End) ts_.fail("expected '}'");
        append(out);
      }
    } else {
      append(out);
    }
    return out;
  }

  Stmt statement() {
    const Token at = ts_.peek();
    Stmt s;
    s.line = at.line;
    if (ts_.at_punct("{")) {
      // A nested block behaves like `if (1) {...}` without the guard.
      std::vector<Stmt> inner = block();
      s.kind = Stmt::Kind::If;
      s.cond.kind = Cond::Kind::True;
      s.cond.line = at.line;
      s.body = std::move(inner);
      return s;
    }
    if (at.kind != Token::Kind::Ident) ts_.fail("expected statement");
    if (at.text == "if") {
      ts_.take();
      s.kind = Stmt::Kind::If;
      s.cond = condition();
      s.body = block();
      if (ts_.at_ident("else")) {
        ts_.take();
        s.orelse = block();
      }
      return s;
    }
    if (at.text == "while") {
      ts_.take();
      s.kind = Stmt::Kind::While;
      s.cond = condition();
      s.body = block();
      return s;
    }
    if (at.text == "return") {
      ts_.take();
      s.kind = Stmt::Kind::Return;
      if (!ts_.at_punct(";")) s.value = expr();
      ts_.expect(";");
      return s;
    }
    const std::string name = ts_.expect_ident();
    if (ts_.accept("(")) {
      s.kind = Stmt::Kind::Call;
      s.callee = name;
      if (!ts_.at_punct(")")) {
        do {
          s.args.push_back(expr());
        } while (ts_.accept(","));
      }
      ts_.expect(")");
      ts_.expect(";");
      return s;
    }
    s.kind = Stmt::Kind::Assign;
    s.target = name;
    ts_.expect("=");
    s.value = expr();
    ts_.expect(";");
    return s;
  }

  Cond condition() {
    const Token open = ts_.expect("(");
    Cond c;
    c.line = open.line;
    const Token at = ts_.peek();
    if (ts_.accept("!")) {
      Expr v = expr();
      if (v.kind != Expr::Kind::Var) unsupported(at, "'!' applies to a variable only");
      c.kind = Cond::Kind::Test;
      c.var = std::move(v);
      c.cmp = Cmp::Eq;
      c.k = 0;
    } else {
      Expr lhs = expr();
      if (is_cmp(ts_)) {
        const Cmp cmp = to_cmp(ts_.take().text);
        Expr rhs = expr();
        if (lhs.is_const() && rhs.is_const()) {
          c.kind = holds(lhs.value, cmp, rhs.value) ? Cond::Kind::True : Cond::Kind::False;
        } else if (lhs.kind == Expr::Kind::Var && rhs.is_const()) {
          c = {Cond::Kind::Test, std::move(lhs), cmp, rhs.value, open.line};
        } else if (lhs.is_const() && rhs.kind == Expr::Kind::Var) {
          c = {Cond::Kind::Test, std::move(rhs), flip(cmp), lhs.value, open.line};
        } else {
          unsupported(at, "conditions compare a variable with a constant");
        }
      } else if (lhs.is_const()) {
        c.kind = lhs.value != 0 ? Cond::Kind::True : Cond::Kind::False;
      } else if (lhs.kind == Expr::Kind::Var && (lhs.name == "TRUE" || lhs.name == "true")) {
        c.kind = Cond::Kind::True;
      } else if (lhs.kind == Expr::Kind::Var && (lhs.name == "FALSE" || lhs.name == "false")) {
        c.kind = Cond::Kind::False;
      } else if (lhs.kind == Expr::Kind::Var) {
        c = {Cond::Kind::Test, std::move(lhs), Cmp::Ne, 0, open.line};
      } else {
        unsupported(at, "conditions compare a variable with a constant");
      }
    }
    if (ts_.at_punct("&&") || ts_.at_punct("||")) unsupported(ts_.peek(), "compound conditions");
    ts_.expect(")");
    return c;
  }

  Expr expr() {
    Expr e = term();
    while (ts_.at_punct("+") || ts_.at_punct("-")) {
      const bool add = ts_.take().text == "+";
      e = binary(add ? Expr::Kind::Add : Expr::Kind::Sub, std::move(e), term());
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      const Token at = ts_.peek();
      if (ts_.at_punct("/") || ts_.at_punct("%")) unsupported(at, "'" + at.text + "' is not affine");
      if (!ts_.accept("*")) return e;
      Expr r = unary();
      if (e.is_const() && r.is_const()) {
        e = Expr::constant(e.value * r.value);
        continue;
      }
      if (!e.is_const() && !r.is_const()) unsupported(at, "product of two variables is not affine");
      Expr s;
      s.kind = Expr::Kind::Scale;
      s.value = e.is_const() ? e.value : r.value;
      s.kids = {e.is_const() ? std::move(r) : std::move(e)};
      e = std::move(s);
    }
  }

  Expr unary() {
    if (ts_.accept("-")) return negated(unary());
    if (ts_.accept("+")) return unary();
    return primary();
  }

  Expr primary() {
    const Token at = ts_.peek();
    if (ts_.accept("(")) {
      Expr e = expr();
      ts_.expect(")");
      return e;
    }
    if (at.kind == Token::Kind::Number) return Expr::constant(ts_.expect_number());
    if (at.kind == Token::Kind::Ident) {
      ts_.take();
      if (ts_.at_punct("(")) unsupported(at, "calls inside expressions");
      return Expr::var(at.text);
    }
    ts_.fail("expected expression");
  }

  // Every referenced variable and callee is declared; arities match.
  static void validate(const Program& p) {
    std::unordered_set<std::string> globals;
    for (const auto& g : p.globals) {
      if (!globals.insert(g.name).second) throw SyntaxError("global " + g.name + " declared twice", 1, 1);
    }
    p.main();
    for (const auto& f : p.functions) {
      std::unordered_set<std::string> scope(globals);
      scope.insert(f.params.begin(), f.params.end());
      scope.insert(f.locals.begin(), f.locals.end());
      const auto need = [&](const std::string& name, int line) {
        if (name == "TRUE" || name == "true" || name == "FALSE" || name == "false") return;
        if (!scope.count(name)) {
          throw UndeclaredVariable(std::to_string(line) + ": undeclared variable '" + name + "' in " + f.name);
        }
      };
      std::function<void(const Expr&, int)> walk_expr = [&](const Expr& e, int line) {
        if (e.kind == Expr::Kind::Var) need(e.name, line);
        for (const auto& k : e.kids) walk_expr(k, line);
      };
      std::function<void(const std::vector<Stmt>&)> walk = [&](const std::vector<Stmt>& body) {
        for (const auto& s : body) {
          switch (s.kind) {
            case Stmt::Kind::Assign:
              need(s.target, s.line);
              walk_expr(s.value, s.line);
              break;
            case Stmt::Kind::If:
            case Stmt::Kind::While:
              if (s.cond.kind == Cond::Kind::Test) walk_expr(s.cond.var, s.line);
              walk(s.body);
              walk(s.orelse);
              break;
            case Stmt::Kind::Call: {
              const Function* callee = p.find(s.callee);
              if (!callee) {
                throw UndeclaredVariable(std::to_string(s.line) + ": call to undeclared function '" + s.callee + "'");
              }
              if (callee->params.size() != s.args.size()) {
                throw SyntaxError("wrong number of arguments to " + s.callee, s.line, 1);
              }
              for (const auto& a : s.args) walk_expr(a, s.line);
              break;
            }
            case Stmt::Kind::Return:
              walk_expr(s.value, s.line);
              break;
          }
        }
      };
      walk(f.body);
    }
  }

  TokenStream ts_;
  Function* current_ = nullptr;
};

}  // namespace

Program parse(const std::string& source) { return Parser(source).program(); }

Program load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace intertwine::frontend
