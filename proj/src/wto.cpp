#include "intertwine/wto.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <deque>
#include <functional>

#include "dense.hpp"

namespace intertwine {

Wto Wto::parse(const std::string& text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(' || c == ')') {
      tokens.push_back({c, {}});
      ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '(' &&
             text[j] != ')') {
        ++j;
      }
      tokens.push_back({'e', Unknown(text.substr(i, j - i))});
      i = j;
    }
  }
  return from_tokens(tokens);
}

Wto Wto::from_tokens(const std::vector<Token>& tokens) {
  Wto w;
  std::vector<int> open;
  bool expect_head = false;
  for (const auto& [kind, x] : tokens) {
    if (kind == '(') {
      if (expect_head) throw SyntaxError("component must start with its head, not '('", 1, 0);
      expect_head = true;
      continue;
    }
    if (kind == ')') {
      if (expect_head) throw SyntaxError("empty component", 1, 0);
      if (open.empty()) throw SyntaxError("unbalanced ')'", 1, 0);
      w.comps_[open.back()].end = w.elems_.size() - 1;
      ++w.closes_after_.back();
      open.pop_back();
      continue;
    }
    if (!w.pos_.emplace(x, w.elems_.size()).second) throw SyntaxError("duplicate element " + x.str(), 1, 0);
    if (expect_head) {
      w.comps_.push_back({w.elems_.size(), w.elems_.size(), open.empty() ? -1 : open.back()});
      open.push_back(static_cast<int>(w.comps_.size()) - 1);
      expect_head = false;
    }
    w.elems_.push_back(x);
    w.comp_of_.push_back(open.empty() ? -1 : open.back());
    w.closes_after_.push_back(0);
  }
  if (expect_head || !open.empty()) throw SyntaxError("unbalanced '('", 1, 0);
  return w;
}

bool Wto::head(const Unknown& x) const {
  const std::size_t p = position(x);
  const int c = comp_of_[p];
  return c >= 0 && comps_[c].head == p;
}

std::optional<Unknown> Wto::next(const Unknown& x) const {
  const std::size_t p = position(x) + 1;
  if (p >= elems_.size()) return std::nullopt;
  return elems_[p];
}

std::optional<Unknown> Wto::nextinc(const Unknown& x) const {
  if (closes_after_[position(x)] > 0) return std::nullopt;
  return next(x);
}

// elems_[p] if it lies inside component `comp` (-1 is the whole ordering).
std::optional<Unknown> Wto::element_within(std::size_t p, int comp) const {
  if (p >= elems_.size()) return std::nullopt;
  if (comp >= 0 && (p < comps_[comp].head || p > comps_[comp].end)) return std::nullopt;
  return elems_[p];
}

std::optional<Unknown> Wto::skip(const Unknown& x) const {
  const auto n = next(x);
  if (!n || !head(*n)) return std::nullopt;
  const Component& inner = comps_[comp_of_[position(*n)]];
  return element_within(inner.end + 1, comp_of_[position(x)]);
}

std::optional<Unknown> Wto::after_component(const Unknown& h) const {
  const Component& c = comps_[comp_of_[position(h)]];
  return element_within(c.end + 1, c.parent);
}

std::vector<Unknown> Wto::omega(const Unknown& x) const {
  std::vector<Unknown> out;
  for (int c = comp_of_[position(x)]; c >= 0; c = comps_[c].parent) out.push_back(elems_[comps_[c].head]);
  return {out.rbegin(), out.rend()};
}

std::vector<Unknown> Wto::heads() const {
  std::vector<Unknown> out;
  for (const auto& c : comps_) out.push_back(elems_[c.head]);
  return out;
}

std::string Wto::str() const {
  std::string out;
  for (std::size_t p = 0; p < elems_.size(); ++p) {
    if (p) out += ' ';
    const int c = comp_of_[p];
    if (c >= 0 && comps_[c].head == p) out += '(';
    out += elems_[p].str();
    out.append(closes_after_[p], ')');
  }
  return out;
}

Wto build_wto(const std::vector<Unknown>& unknowns, const DepMap& deps) {
  const int n = static_cast<int>(unknowns.size());
  std::unordered_map<Unknown, int> index;
  for (int i = 0; i < n; ++i) index.emplace(unknowns[i], i);
  std::vector<std::vector<int>> succ(n);
  for (int v = 0; v < n; ++v) {
    auto it = deps.find(unknowns[v]);
    if (it == deps.end()) continue;
    for (const auto& u : it->second) {
      auto p = index.find(u);
      if (p != index.end()) succ[p->second].push_back(v);
    }
  }
  for (auto& s : succ) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }

  struct Elem {
    int v;
    bool component;
    std::deque<Elem> body;
  };
  std::vector<int> dfn(n, 0);
  std::vector<int> stack;
  int num = 0;
  std::function<int(int, std::deque<Elem>&)> visit;
  const auto component = [&](int v) {
    Elem c{v, true, {}};
    for (int w : succ[v]) {
      if (dfn[w] == 0) visit(w, c.body);
    }
    return c;
  };
  visit = [&](int v, std::deque<Elem>& partition) -> int {
    stack.push_back(v);
    dfn[v] = ++num;
    int head = dfn[v];
    bool loop = false;
    for (int w : succ[v]) {
      const int min = dfn[w] == 0 ? visit(w, partition) : dfn[w];
      if (min <= head) {
        head = min;
        loop = true;
      }
    }
    if (head == dfn[v]) {
      dfn[v] = INT_MAX;
      int e = stack.back();
      stack.pop_back();
      if (loop) {
        while (e != v) {
          dfn[e] = 0;
          e = stack.back();
          stack.pop_back();
        }
        partition.push_front(component(v));
      } else {
        partition.push_front(Elem{v, false, {}});
      }
    }
    return head;
  };
  std::deque<Elem> top;
  for (int v = 0; v < n; ++v) {
    if (dfn[v] == 0) visit(v, top);
  }

  std::vector<Wto::Token> tokens;
  std::function<void(const Elem&)> emit = [&](const Elem& e) {
    if (e.component) tokens.push_back({'(', {}});
    tokens.push_back({'e', unknowns[e.v]});
    for (const auto& b : e.body) emit(b);
    if (e.component) tokens.push_back({')', {}});
  };
  for (const auto& e : top) emit(e);
  return Wto::from_tokens(tokens);
}

bool check_wto(const Wto& wto, const DepMap& deps) {
  for (const auto& [v, us] : deps) {
    if (!wto.contains(v)) return false;
    const std::size_t pv = wto.position(v);
    for (const auto& u : us) {
      if (!wto.contains(u)) return false;
      if (wto.position(u) < pv) continue;
      const auto om = wto.omega(u);
      if (std::find(om.begin(), om.end(), v) == om.end()) return false;
    }
  }
  return true;
}

SolveOutcome solve_rec(const EquationSystem& system, const Assignment& rho0, const Wto& wto,
                       const SolverConfig& config) {
  const auto& order = system.declared_or_throw();
  if (wto.size() != order.size() || !check_wto(wto, system.deps_or_throw())) {
    throw RequiresValidWto("ordering is not a w.t.o. of the system's dependences");
  }
  for (const auto& x : order) {
    if (!wto.contains(x)) throw RequiresValidWto(x.str() + " missing from the ordering");
  }
  return detail::run(system, rho0, config, [&](detail::Dense& d, detail::RunState& st) {
    const auto update = [&](const Unknown& x, bool boxed) {
      st.count_eval();
      const std::size_t i = d.index(x);
      Value fresh = d.eval(i);
      Value old = d.value(i);
      Value now = boxed ? st.combine(x, old, fresh) : fresh;
      const bool changed = !st.ops().eq(now, old);
      if (changed) {
        st.record(x, old, now);
        d.value(i) = now;
      }
      if (config.on_step) config.on_step(StepInfo{x, old, d.value(i), changed, {}, d.peek()});
    };
    std::function<void(std::optional<Unknown>)> solve = [&](std::optional<Unknown> cur) {
      while (cur) {
        const Unknown x = *cur;
        if (!wto.head(x)) {
          update(x, false);
          cur = wto.nextinc(x);
          continue;
        }
        update(x, true);
        Value old;
        do {
          old = d.value(d.index(x));
          solve(wto.nextinc(x));
          update(x, true);
        } while (!st.ops().eq(d.value(d.index(x)), old));
        cur = wto.after_component(x);
      }
    };
    if (wto.size() > 0) solve(wto.elements().front());
  });
}

}  // namespace intertwine
