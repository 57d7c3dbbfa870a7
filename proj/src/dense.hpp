#pragma once

#include "intertwine/errors.hpp"
#include "run_state.hpp"

namespace intertwine::detail {

/// Dense storage for the declared unknowns of a finite system.
class Dense {
 public:
  Dense(const EquationSystem& system, const Assignment& rho0)
      : system_(system), order_(system.declared_or_throw()) {
    for (std::size_t i = 0; i < order_.size(); ++i) index_.emplace(order_[i], i);
    for (const auto& x : order_) rho_.push_back(rho0.read(x, system.domain.bottom));
    get_ = [this](const Unknown& y) -> Value {
      auto it = index_.find(y);
      return it == index_.end() ? system_.domain.bottom : rho_[it->second];
    };
    peek_ = get_;
  }

  std::size_t size() const { return order_.size(); }
  const Unknown& at(std::size_t i) const { return order_[i]; }
  std::size_t index(const Unknown& x) const { return index_.at(x); }
  Value& value(std::size_t i) { return rho_[i]; }

  Value eval(std::size_t i) {
    static const SideEmitter no_side = [](const Unknown& z, const Value&) {
      throw UnsupportedSideEffect("global solvers need a flattened system; saw a side effect to " + z.str());
    };
    return system_.evaluate(order_[i], get_, no_side);
  }

  std::vector<std::vector<std::size_t>> infl() const {
    const DepMap infl = infl_from_deps(order_, system_.deps_or_throw());
    std::vector<std::vector<std::size_t>> out(order_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) {
      for (const auto& y : infl.at(order_[i])) {
        if (auto it = index_.find(y); it != index_.end()) out[i].push_back(it->second);
      }
    }
    return out;
  }

  Assignment assignment() const {
    Assignment out;
    for (std::size_t i = 0; i < order_.size(); ++i) out.set(order_[i], rho_[i]);
    return out;
  }

  const std::function<Value(const Unknown&)>& peek() const { return peek_; }

 private:
  const EquationSystem& system_;
  const std::vector<Unknown>& order_;
  std::unordered_map<Unknown, std::size_t> index_;
  std::vector<Value> rho_;
  Getter get_;
  std::function<Value(const Unknown&)> peek_;
};

// Evaluates unknown i and applies box (or plain assignment outside the box
// points). Returns whether the value changed.
inline bool update(Dense& d, RunState& st, std::size_t i, BoxOp op, std::vector<Unknown> pending = {}) {
  st.count_eval();
  const Unknown& x = d.at(i);
  Value fresh = d.eval(i);
  Value old = d.value(i);
  Value now = st.at_box_point(x) ? st.combine(x, old, fresh, op) : fresh;
  const bool changed = !st.ops().eq(now, old);
  if (changed) {
    st.record(x, old, now);
    d.value(i) = now;
  }
  if (st.config().on_step) {
    st.config().on_step(StepInfo{x, old, d.value(i), changed, std::move(pending), d.peek()});
  }
  return changed;
}

template <typename Body>
SolveOutcome run(const EquationSystem& system, const Assignment& rho0, const SolverConfig& config, Body body) {
  Dense d(system, rho0);
  RunState st(system, config);
  try {
    body(d, st);
  } catch (const BudgetHit&) {
    return st.finish(Status::BudgetExhausted, d.assignment());
  }
  return st.finish(Status::Solved, d.assignment());
}

}  // namespace intertwine::detail
