#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "intertwine/lattice.hpp"
#include "intertwine/unknown.hpp"

namespace intertwine {

using Getter = std::function<Value(const Unknown&)>;
using SideEmitter = std::function<void(const Unknown&, const Value&)>;
/// Right-hand side f_x: reads other unknowns through `get`, may emit side
/// effects through `side`.
using RightHandSide = std::function<Value(const Getter& get, const SideEmitter& side)>;
using DepMap = std::unordered_map<Unknown, std::vector<Unknown>>;
using BoxFn = std::function<Value(const Value&, const Value&)>;

/// Finite map from unknowns to values; reads outside the domain give bottom.
class Assignment {
 public:
  bool contains(const Unknown& x) const { return values_.count(x) != 0; }
  Value read(const Unknown& x, const Value& bottom) const;
  void set(const Unknown& x, Value v) { values_.insert_or_assign(x, std::move(v)); }
  void erase(const Unknown& x) { values_.erase(x); }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  /// Sorted by unknown.
  const std::map<Unknown, Value>& values() const { return values_; }
  std::vector<Unknown> dom() const;

 private:
  std::map<Unknown, Value> values_;
};

/// A possibly infinite system of equations x = f_x.
struct EquationSystem {
  DomainOps domain;
  /// Total: every unknown has a right-hand side (constant bottom by default).
  std::function<Value(const Unknown& x, const Getter& get, const SideEmitter& side)> rhs;
  std::optional<std::vector<Unknown>> declared;
  std::optional<DepMap> static_deps;
  /// Targets each unknown may side-effect; used to flatten the system.
  std::optional<DepMap> static_sides;
  bool side_effecting = false;

  Value evaluate(const Unknown& x, const Getter& get, const SideEmitter& side) const {
    return rhs(x, get, side);
  }
  const std::vector<Unknown>& declared_or_throw() const;
  const DepMap& deps_or_throw() const;
};

/// A finite system in declaration order. Unknowns without an equation have
/// the constant bottom right-hand side.
EquationSystem make_finite_system(DomainOps domain,
                                  std::vector<std::pair<Unknown, RightHandSide>> equations,
                                  std::optional<DepMap> deps = std::nullopt);

struct EvalRecord {
  Value result;
  std::vector<Unknown> deps;
  std::vector<std::pair<Unknown, Value>> sides;
};

/// Evaluates f_x against the bottom completion of `rho`.
EvalRecord eval_rhs(const EquationSystem& system, const Unknown& x, const Assignment& rho);

/// infl_y = {x | y in dep_x} followed by y itself, in declaration order.
DepMap infl_from_deps(const std::vector<Unknown>& unknowns, const DepMap& deps);

/// rho[x] = rho[x] box f_x(rho) and dep_x(rho) within dom, for every x in dom.
/// For side-effecting systems f_x is joined with the pair contributions and
/// each pair <x,z> must hold what x currently emits to z.
bool is_box_solution(const EquationSystem& system, const Assignment& rho, const BoxFn& box);

bool is_post_solution(const EquationSystem& system, const Assignment& rho);

/// Every cycle of the dependence graph has its last declared unknown in `w`.
bool check_admissible(const EquationSystem& system, const std::set<Unknown>& w);

/// Jacobi iteration from bottom; throws BudgetExhausted after `max_steps`
/// passes without stabilizing.
Assignment kleene_oracle(const EquationSystem& system, std::size_t max_steps);

/// Rewrites a side-effecting finite system with static side targets into an
/// ordinary one: each <x,z> becomes an unknown computing what x emits to z,
/// and z joins its own right-hand side with those unknowns.
EquationSystem flatten_side_effects(const EquationSystem& system);

/// Unknowns that are program points or globals rather than pair stores.
std::vector<Unknown> base_unknowns(const Assignment& rho);

}  // namespace intertwine
