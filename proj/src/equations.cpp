#include "intertwine/equations.hpp"

#include <algorithm>
#include <memory>
#include <unordered_set>

#include "intertwine/errors.hpp"

namespace intertwine {

Value Assignment::read(const Unknown& x, const Value& bottom) const {
  auto it = values_.find(x);
  return it == values_.end() ? bottom : it->second;
}

std::vector<Unknown> Assignment::dom() const {
  std::vector<Unknown> out;
  out.reserve(values_.size());
  for (const auto& [x, v] : values_) out.push_back(x);
  return out;
}

const std::vector<Unknown>& EquationSystem::declared_or_throw() const {
  if (!declared) throw RequiresFiniteSystem("solver needs a finite list of unknowns");
  return *declared;
}

const DepMap& EquationSystem::deps_or_throw() const {
  if (!static_deps) throw RequiresStaticDeps("solver needs static dependences");
  return *static_deps;
}

EquationSystem make_finite_system(DomainOps domain,
                                  std::vector<std::pair<Unknown, RightHandSide>> equations,
                                  std::optional<DepMap> deps) {
  auto table = std::make_shared<std::unordered_map<Unknown, RightHandSide>>();
  std::vector<Unknown> order;
  for (auto& [x, f] : equations) {
    if (!table->emplace(x, std::move(f)).second) {
      throw std::invalid_argument("duplicate equation for " + x.str());
    }
    order.push_back(x);
  }
  EquationSystem sys;
  sys.domain = std::move(domain);
  Value bottom = sys.domain.bottom;
  sys.rhs = [table, bottom](const Unknown& x, const Getter& get, const SideEmitter& side) -> Value {
    auto it = table->find(x);
    if (it == table->end()) return bottom;
    return it->second(get, side);
  };
  sys.declared = std::move(order);
  if (deps) {
    for (const auto& x : *sys.declared) deps->try_emplace(x);
  }
  sys.static_deps = std::move(deps);
  return sys;
}

EvalRecord eval_rhs(const EquationSystem& system, const Unknown& x, const Assignment& rho) {
  EvalRecord rec;
  OrderedSet<Unknown> deps;
  std::unordered_set<Unknown> targets;
  const std::vector<Unknown>* allowed = nullptr;
  if (system.static_deps) {
    auto it = system.static_deps->find(x);
    if (it != system.static_deps->end()) allowed = &it->second;
  }
  Getter get = [&](const Unknown& y) {
    if (allowed && std::find(allowed->begin(), allowed->end(), y) == allowed->end()) {
      throw PurityViolation(x.str() + " reads " + y.str() + " outside its static dependences");
    }
    deps.insert(y);
    return rho.read(y, system.domain.bottom);
  };
  SideEmitter side = [&](const Unknown& z, const Value& d) {
    if (z == x) throw PurityViolation(x.str() + " side-effects itself");
    if (!targets.insert(z).second) {
      throw PurityViolation(x.str() + " side-effects " + z.str() + " twice");
    }
    rec.sides.emplace_back(z, d);
  };
  rec.result = system.evaluate(x, get, side);
  rec.deps = deps.items();
  return rec;
}

DepMap infl_from_deps(const std::vector<Unknown>& unknowns, const DepMap& deps) {
  DepMap infl;
  for (const auto& y : unknowns) infl.try_emplace(y);
  for (const auto& x : unknowns) {
    auto it = deps.find(x);
    if (it == deps.end()) continue;
    for (const auto& y : it->second) {
      if (y == x) continue;
      auto& list = infl[y];
      if (std::find(list.begin(), list.end(), x) == list.end()) list.push_back(x);
    }
  }
  for (auto& [y, list] : infl) list.push_back(y);
  return infl;
}

namespace {

std::unordered_map<Unknown, std::vector<Unknown>> pairs_by_target(const Assignment& rho) {
  std::unordered_map<Unknown, std::vector<Unknown>> out;
  for (const auto& [u, v] : rho.values()) {
    if (u.is_pair()) out[u.target()].push_back(u);
  }
  return out;
}

}  // namespace

bool is_box_solution(const EquationSystem& system, const Assignment& rho, const BoxFn& box) {
  const DomainOps& ops = system.domain;
  const auto contributions =
      system.side_effecting ? pairs_by_target(rho) : std::unordered_map<Unknown, std::vector<Unknown>>{};
  for (const auto& [x, v] : rho.values()) {
    if (system.side_effecting && x.is_pair()) continue;
    EvalRecord rec = eval_rhs(system, x, rho);
    for (const auto& d : rec.deps) {
      if (!rho.contains(d)) return false;
    }
    Value val = rec.result;
    if (system.side_effecting) {
      if (auto it = contributions.find(x); it != contributions.end()) {
        for (const auto& p : it->second) val = ops.join(val, rho.read(p, ops.bottom));
      }
      for (const auto& [z, d] : rec.sides) {
        const Unknown p = Unknown::pair(x, z);
        if (!rho.contains(z) || !rho.contains(p)) return false;
        if (!ops.eq(rho.read(p, ops.bottom), d)) return false;
      }
    }
    if (!ops.eq(v, box(v, val))) return false;
  }
  return true;
}

bool is_post_solution(const EquationSystem& system, const Assignment& rho) {
  const DomainOps& ops = system.domain;
  for (const auto& [x, v] : rho.values()) {
    if (system.side_effecting && x.is_pair()) continue;
    EvalRecord rec = eval_rhs(system, x, rho);
    if (!ops.leq(rec.result, v)) return false;
    for (const auto& [z, d] : rec.sides) {
      if (!ops.leq(d, rho.read(z, ops.bottom))) return false;
    }
  }
  return true;
}

namespace {

// Tarjan's SCCs of the subgraph induced by `alive`; edges go from a
// dependence to its reader.
std::vector<std::vector<int>> sccs(const std::vector<std::vector<int>>& succ, const std::vector<bool>& alive) {
  const int n = static_cast<int>(succ.size());
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<int>> out;
  int counter = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w : succ[v]) {
      if (!alive[w]) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> comp;
      int w = -1;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      out.push_back(std::move(comp));
    }
  };
  for (int v = 0; v < n; ++v) {
    if (alive[v] && index[v] < 0) visit(v);
  }
  return out;
}

}  // namespace

bool check_admissible(const EquationSystem& system, const std::set<Unknown>& w) {
  const auto& order = system.declared_or_throw();
  const auto& deps = system.deps_or_throw();
  const int n = static_cast<int>(order.size());
  std::unordered_map<Unknown, int> pos;
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  std::vector<std::vector<int>> succ(n);
  std::vector<bool> self_loop(n, false);
  for (int v = 0; v < n; ++v) {
    auto it = deps.find(order[v]);
    if (it == deps.end()) continue;
    for (const auto& u : it->second) {
      auto p = pos.find(u);
      if (p == pos.end()) continue;
      succ[p->second].push_back(v);
      if (p->second == v) self_loop[v] = true;
    }
  }
  std::vector<std::vector<int>> work{std::vector<int>()};
  for (int v = 0; v < n; ++v) work.back().push_back(v);
  while (!work.empty()) {
    std::vector<int> part = std::move(work.back());
    work.pop_back();
    std::vector<bool> in_part(n, false);
    for (int v : part) in_part[v] = true;
    for (auto& comp : sccs(succ, in_part)) {
      if (comp.size() == 1 && !self_loop[comp[0]]) continue;
      const int top = *std::max_element(comp.begin(), comp.end());
      if (!w.count(order[top])) return false;
      comp.erase(std::find(comp.begin(), comp.end(), top));
      if (!comp.empty()) work.push_back(std::move(comp));
    }
  }
  return true;
}

Assignment kleene_oracle(const EquationSystem& system, std::size_t max_steps) {
  const auto& order = system.declared_or_throw();
  const DomainOps& ops = system.domain;
  Assignment rho;
  for (const auto& x : order) rho.set(x, ops.bottom);
  for (std::size_t step = 0; step < max_steps; ++step) {
    Assignment next;
    for (const auto& x : order) {
      EvalRecord rec = eval_rhs(system, x, rho);
      Value acc = next.contains(x) ? ops.join(next.read(x, ops.bottom), rec.result) : rec.result;
      next.set(x, std::move(acc));
      for (auto& [z, d] : rec.sides) next.set(z, ops.join(next.read(z, ops.bottom), d));
    }
    bool same = next.size() == rho.size();
    for (const auto& [x, v] : next.values()) {
      if (!same) break;
      same = rho.contains(x) && ops.eq(rho.read(x, ops.bottom), v);
    }
    if (same) return rho;
    rho = std::move(next);
  }
  throw BudgetExhausted("kleene iteration did not stabilize within " + std::to_string(max_steps) + " passes");
}

EquationSystem flatten_side_effects(const EquationSystem& system) {
  const auto& order = system.declared_or_throw();
  const auto& deps = system.deps_or_throw();
  if (!system.static_sides) throw RequiresStaticDeps("flattening needs static side-effect targets");
  const DepMap& sides = *system.static_sides;

  auto contributors = std::make_shared<DepMap>();
  std::vector<Unknown> new_order;
  DepMap new_deps;
  for (const auto& x : order) {
    new_order.push_back(x);
    auto it = sides.find(x);
    if (it == sides.end()) continue;
    for (const auto& z : it->second) {
      const Unknown p = Unknown::pair(x, z);
      new_order.push_back(p);
      new_deps[p] = deps.count(x) ? deps.at(x) : std::vector<Unknown>{};
      (*contributors)[z].push_back(x);
    }
  }
  for (const auto& x : order) {
    auto& d = new_deps[x];
    if (deps.count(x)) d = deps.at(x);
    if (auto it = contributors->find(x); it != contributors->end()) {
      for (const auto& c : it->second) d.push_back(Unknown::pair(c, x));
    }
  }

  EquationSystem out;
  out.domain = system.domain;
  out.declared = std::move(new_order);
  out.static_deps = std::move(new_deps);
  auto inner = std::make_shared<EquationSystem>(system);
  out.rhs = [inner, contributors](const Unknown& u, const Getter& get, const SideEmitter&) -> Value {
    const DomainOps& ops = inner->domain;
    if (u.is_pair()) {
      const Unknown target = u.target();
      Value captured = ops.bottom;
      inner->evaluate(u.contributor(), get, [&](const Unknown& z, const Value& d) {
        if (z == target) captured = d;
      });
      return captured;
    }
    Value v = inner->evaluate(u, get, [](const Unknown&, const Value&) {});
    if (auto it = contributors->find(u); it != contributors->end()) {
      for (const auto& c : it->second) v = ops.join(v, get(Unknown::pair(c, u)));
    }
    return v;
  };
  return out;
}

std::vector<Unknown> base_unknowns(const Assignment& rho) {
  std::vector<Unknown> out;
  for (const auto& [x, v] : rho.values()) {
    if (!x.is_pair()) out.push_back(x);
  }
  return out;
}

}  // namespace intertwine
