#include <deque>
#include <set>

#include "intertwine/errors.hpp"
#include "dense.hpp"

namespace intertwine {

std::string box_name(BoxOp op) {
  switch (op) {
    case BoxOp::Join:
      return "join";
    case BoxOp::Widen:
      return "widen";
    case BoxOp::Narrow:
      return "narrow";
    case BoxOp::Warrow:
      return "warrow";
  }
  return "?";
}

BoxOp parse_box(const std::string& name) {
  for (BoxOp op : {BoxOp::Join, BoxOp::Widen, BoxOp::Narrow, BoxOp::Warrow}) {
    if (box_name(op) == name) return op;
  }
  throw InvalidConfig("unknown box operator '" + name + "'");
}

BoxFn box_fn(BoxOp op, const DomainOps& ops) {
  switch (op) {
    case BoxOp::Join:
      return ops.join;
    case BoxOp::Widen:
      return ops.widen;
    case BoxOp::Narrow:
      return ops.narrow;
    case BoxOp::Warrow:
      break;
  }
  return [ops](const Value& a, const Value& b) { return warrow(ops, a, b); };
}

void SolverConfig::validate() const {
  if (budget == 0) throw InvalidConfig("budget must be positive");
  if (switch_bound && *switch_bound <= 0) throw InvalidConfig("switch_bound must be positive");
  if (restart_bound && *restart_bound <= 0) throw InvalidConfig("restart_bound must be positive");
}

namespace detail {

Value RunState::combine(const Unknown& x, const Value& old, const Value& fresh, BoxOp op) {
  if (op != BoxOp::Warrow || !config_.switch_bound) return box_fn(op, ops_)(old, fresh);
  Phase& ph = phases_[x];
  if (ops_.leq(fresh, old)) {
    ph.started = true;
    ph.narrowing = true;
    if (ph.switches >= *config_.switch_bound) return old;
    return ops_.narrow(old, fresh);
  }
  if (ph.started && ph.narrowing) ++ph.switches;
  ph.started = true;
  ph.narrowing = false;
  return ops_.widen(old, fresh);
}

}  // namespace detail

namespace {

using detail::Dense;
using detail::RunState;
using detail::run;
using detail::update;

/// SW loop shared with the two-phase solver.
void sw_loop(Dense& d, RunState& st, BoxOp op) {
  const auto infl = d.infl();
  std::set<std::size_t> q;
  for (std::size_t i = 0; i < d.size(); ++i) q.insert(i);
  const bool want_pending = static_cast<bool>(st.config().on_step);
  while (!q.empty()) {
    const std::size_t i = *q.begin();
    q.erase(q.begin());
    st.count_eval();
    const Unknown& x = d.at(i);
    Value fresh = d.eval(i);
    Value old = d.value(i);
    Value now = st.at_box_point(x) ? st.combine(x, old, fresh, op) : fresh;
    const bool changed = !st.ops().eq(now, old);
    if (changed) {
      st.record(x, old, now);
      d.value(i) = now;
      for (std::size_t y : infl[i]) q.insert(y);
    }
    if (want_pending) {
      std::vector<Unknown> pending;
      for (std::size_t y : q) pending.push_back(d.at(y));
      st.config().on_step(StepInfo{x, old, d.value(i), changed, std::move(pending), d.peek()});
    }
  }
}

}  // namespace

SolveOutcome solve_rr(const EquationSystem& system, const Assignment& rho0, const SolverConfig& config) {
  return run(system, rho0, config, [&](Dense& d, RunState& st) {
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t i = 0; i < d.size(); ++i) dirty |= update(d, st, i, config.box);
    }
  });
}

SolveOutcome solve_w(const EquationSystem& system, const Assignment& rho0, const SolverConfig& config) {
  system.deps_or_throw();
  return run(system, rho0, config, [&](Dense& d, RunState& st) {
    const auto infl = d.infl();
    const bool lifo = config.worklist_policy == WorklistPolicy::Lifo;
    std::deque<std::size_t> work;
    std::vector<bool> queued(d.size(), true);
    for (std::size_t i = 0; i < d.size(); ++i) work.push_back(i);
    const auto add = [&](std::size_t y) {
      if (queued[y]) return;
      queued[y] = true;
      if (lifo) {
        work.push_front(y);
      } else {
        work.push_back(y);
      }
    };
    while (!work.empty()) {
      const std::size_t i = work.front();
      work.pop_front();
      queued[i] = false;
      st.count_eval();
      const Unknown& x = d.at(i);
      Value fresh = d.eval(i);
      Value old = d.value(i);
      Value now = st.at_box_point(x) ? st.combine(x, old, fresh) : fresh;
      const bool changed = !st.ops().eq(now, old);
      if (changed) {
        st.record(x, old, now);
        d.value(i) = now;
        for (std::size_t y : infl[i]) add(y);
      }
      if (config.on_step) {
        std::vector<Unknown> pending;
        for (std::size_t y : work) pending.push_back(d.at(y));
        config.on_step(StepInfo{x, old, d.value(i), changed, std::move(pending), d.peek()});
      }
    }
  });
}

SolveOutcome solve_srr(const EquationSystem& system, const Assignment& rho0, const SolverConfig& config) {
  return run(system, rho0, config, [&](Dense& d, RunState& st) {
    // solve(i) for the first i unknowns; a change re-solves the same prefix.
    std::function<void(std::size_t)> solve = [&](std::size_t i) {
      while (i > 0) {
        solve(i - 1);
        if (!update(d, st, i - 1, config.box)) return;
      }
    };
    solve(d.size());
  });
}

SolveOutcome solve_sw(const EquationSystem& system, const Assignment& rho0, const SolverConfig& config) {
  system.deps_or_throw();
  return run(system, rho0, config, [&](Dense& d, RunState& st) { sw_loop(d, st, config.box); });
}

SolveOutcome solve_two_phase(const EquationSystem& system, const Assignment& rho0, const SolverConfig& config) {
  system.deps_or_throw();
  return run(system, rho0, config, [&](Dense& d, RunState& st) {
    sw_loop(d, st, BoxOp::Widen);
    sw_loop(d, st, BoxOp::Narrow);
  });
}

}  // namespace intertwine
