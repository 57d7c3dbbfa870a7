#include <map>
#include <unordered_set>

#include "intertwine/errors.hpp"
#include "run_state.hpp"

namespace intertwine {

namespace {

using detail::BudgetHit;
using detail::RunState;

class Slr {
 public:
  Slr(const EquationSystem& system, const Assignment& rho0, RunState& st, SlrVariant variant, bool side_effects)
      : system_(system), rho0_(rho0), st_(st), ops_(system.domain), variant_(variant), side_effects_(side_effects) {
    peek_ = [this](const Unknown& y) -> Value {
      auto it = rho_.find(y);
      return it == rho_.end() ? ops_.bottom : it->second;
    };
  }

  void run(const Unknown& x0) {
    init(x0);
    solve(x0);
  }

  Assignment assignment() const {
    Assignment out;
    for (const auto& [x, v] : rho_) out.set(x, v);
    return out;
  }

 private:
  bool localized() const { return variant_ != SlrVariant::Slr1; }
  bool shrinking() const { return variant_ == SlrVariant::Slr3 || variant_ == SlrVariant::Slr4; }

  void init(const Unknown& y) {
    key_[y] = -count_;
    ++count_;
    infl_[y].clear();
    infl_[y].insert(y);
    rho_[y] = rho0_.read(y, ops_.bottom);
    set_of_[y].clear();
  }

  bool in_dom(const Unknown& y) const { return key_.count(y) != 0; }

  void add_q(const Unknown& y) { q_.emplace(key_.at(y), y); }

  Value eval(const Unknown& x, const Unknown& y) {
    if (y.is_pair()) throw EvalError("right-hand sides cannot read pair unknown " + y.str());
    if (!in_dom(y)) {
      init(y);
      solve(y);
    }
    if (localized() && key_.at(x) <= key_.at(y)) wpoint_.insert(y);
    infl_[y].insert(x);
    return rho_.at(y);
  }

  void side(const Unknown& x, const Unknown& y, const Value& d) {
    if (!side_effects_) throw UnsupportedSideEffect(x.str() + " side-effects " + y.str());
    if (localized()) wpoint_.insert(y);
    const Unknown p = Unknown::pair(x, y);
    auto it = rho_.find(p);
    if (it == rho_.end()) it = rho_.emplace(p, ops_.bottom).first;
    if (ops_.eq(d, it->second)) return;
    Value old = it->second;
    it->second = d;
    st_.record(p, old, d);
    if (in_dom(y)) {
      set_of_[y].insert(x);
      stable_.erase(y);
      add_q(y);
    } else {
      init(y);
      set_of_[y].insert(x);
      solve(y);
    }
  }

  Value evaluate(const Unknown& x) {
    st_.count_eval();
    std::unordered_set<Unknown> targets;
    Getter get = [this, &x](const Unknown& y) { return eval(x, y); };
    SideEmitter emit = [this, &x, &targets](const Unknown& y, const Value& d) {
      if (y == x) throw PurityViolation(x.str() + " side-effects itself");
      if (!targets.insert(y).second) throw PurityViolation(x.str() + " side-effects " + y.str() + " twice");
      side(x, y, d);
    };
    Value v = system_.evaluate(x, get, emit);
    if (side_effects_) {
      for (const auto& z : set_of_[x]) v = ops_.join(v, rho_.at(Unknown::pair(z, x)));
    }
    return v;
  }

  bool may_restart(const Unknown& x) const {
    const auto& bound = st_.config().restart_bound;
    if (!bound) return true;
    auto it = restart_failures_.find(x);
    return it == restart_failures_.end() || it->second < *bound;
  }

  // Counts a restart at x as failed when the first value computed after it
  // is not strictly below the value x had before the restart.
  void settle_restart(const Unknown& x, const Value& tmp) {
    auto it = pending_restart_.find(x);
    if (it == pending_restart_.end()) return;
    const bool improved = ops_.leq(tmp, it->second) && !ops_.eq(tmp, it->second);
    if (!improved) ++restart_failures_[x];
    pending_restart_.erase(it);
  }

  void restart(long r, const Unknown& y) {
    add_q(y);
    stable_.erase(y);
    if (key_.at(y) < r) {
      Value reset = rho0_.read(y, ops_.bottom);
      Value& cur = rho_.at(y);
      if (!ops_.eq(cur, reset)) {
        st_.record(y, cur, reset);
        cur = reset;
      }
      std::vector<Unknown> m = infl_[y].items();
      infl_[y].clear();
      for (const auto& z : m) restart(r, z);
    }
  }

  void solve(const Unknown& x) {
    if (!step(x)) return;
    const long kx = key_.at(x);
    while (!q_.empty() && q_.begin()->first <= kx) {
      Unknown y = q_.begin()->second;
      q_.erase(q_.begin());
      // Re-solving x from its own loop needs no new frame: the nested call
      // would drain the same queue prefix.
      if (y == x) {
        step(x);
      } else {
        solve(y);
      }
    }
  }

  // One evaluation and update of x; true when its value changed.
  bool step(const Unknown& x) {
    const bool wpx = !localized() || wpoint_.count(x) != 0;
    if (shrinking()) wpoint_.erase(x);
    if (stable_.count(x)) return false;
    stable_.insert(x);
    Value fx = evaluate(x);
    Value old = rho_.at(x);
    Value tmp = wpx ? st_.combine(x, old, fx) : fx;
    if (variant_ == SlrVariant::Slr4) settle_restart(x, tmp);
    const bool changed = !ops_.eq(tmp, old);
    if (changed) {
      if (variant_ == SlrVariant::Slr4 && wpx && ops_.leq(tmp, old) && may_restart(x)) {
        pending_restart_.insert_or_assign(x, old);
        std::vector<Unknown> targets = infl_[x].items();
        targets.push_back(x);
        for (const auto& z : targets) restart(key_.at(x), z);
      } else {
        std::vector<Unknown> w = infl_[x].items();
        if (wpx) w.push_back(x);
        for (const auto& y : w) {
          add_q(y);
          stable_.erase(y);
        }
      }
      infl_[x].clear();
      rho_.at(x) = tmp;
      st_.record(x, old, tmp);
    }
    if (st_.config().on_step) st_.config().on_step(StepInfo{x, old, rho_.at(x), changed, {}, peek_});
    return changed;
  }

  const EquationSystem& system_;
  const Assignment& rho0_;
  RunState& st_;
  const DomainOps& ops_;
  SlrVariant variant_;
  bool side_effects_;

  std::unordered_map<Unknown, Value> rho_;
  std::unordered_map<Unknown, long> key_;
  std::unordered_map<Unknown, OrderedSet<Unknown>> infl_;
  std::unordered_map<Unknown, OrderedSet<Unknown>> set_of_;
  std::unordered_set<Unknown> stable_;
  std::unordered_set<Unknown> wpoint_;
  std::map<long, Unknown> q_;
  long count_ = 0;
  std::unordered_map<Unknown, Value> pending_restart_;
  std::unordered_map<Unknown, int> restart_failures_;
  std::function<Value(const Unknown&)> peek_;
};

class Rld {
 public:
  Rld(const EquationSystem& system, const Assignment& rho0, RunState& st)
      : system_(system), rho0_(rho0), st_(st), ops_(system.domain) {
    peek_ = [this](const Unknown& y) -> Value {
      auto it = rho_.find(y);
      return it == rho_.end() ? rho0_.read(y, ops_.bottom) : it->second;
    };
  }

  void solve(const Unknown& x) {
    if (stable_.count(x)) return;
    stable_.insert(x);
    if (!rho_.count(x)) rho_.emplace(x, rho0_.read(x, ops_.bottom));
    st_.count_eval();
    Getter get = [this, &x](const Unknown& y) {
      solve(y);
      infl_[y].insert(x);
      return rho_.at(y);
    };
    SideEmitter no_side = [](const Unknown& z, const Value&) {
      throw UnsupportedSideEffect("RLD does not handle side effects; saw one to " + z.str());
    };
    Value fx = system_.evaluate(x, get, no_side);
    Value old = rho_.at(x);
    Value tmp = ops_.join(old, fx);
    const bool changed = !ops_.eq(tmp, old);
    if (changed) {
      std::vector<Unknown> w = infl_[x].items();
      rho_.at(x) = tmp;
      st_.record(x, old, tmp);
      infl_[x].clear();
      for (const auto& y : w) stable_.erase(y);
      if (st_.config().on_step) st_.config().on_step(StepInfo{x, old, tmp, true, {}, peek_});
      for (const auto& y : w) solve(y);
    } else if (st_.config().on_step) {
      st_.config().on_step(StepInfo{x, old, old, false, {}, peek_});
    }
  }

  Assignment assignment() const {
    Assignment out;
    for (const auto& [x, v] : rho_) out.set(x, v);
    return out;
  }

 private:
  const EquationSystem& system_;
  const Assignment& rho0_;
  RunState& st_;
  const DomainOps& ops_;
  std::unordered_map<Unknown, Value> rho_;
  std::unordered_map<Unknown, OrderedSet<Unknown>> infl_;
  std::unordered_set<Unknown> stable_;
  std::function<Value(const Unknown&)> peek_;
};

}  // namespace

SolveOutcome solve_slr(const EquationSystem& system, const Assignment& rho0, const Unknown& x0,
                       const SolverConfig& config, SlrVariant variant, bool side_effects) {
  RunState st(system, config);
  Slr slr(system, rho0, st, variant, side_effects);
  try {
    slr.run(x0);
  } catch (const BudgetHit&) {
    return st.finish(Status::BudgetExhausted, slr.assignment());
  }
  return st.finish(Status::Solved, slr.assignment());
}

SolveOutcome solve_rld(const EquationSystem& system, const Assignment& rho0, const Unknown& x0,
                       const SolverConfig& config) {
  RunState st(system, config);
  Rld rld(system, rho0, st);
  try {
    rld.solve(x0);
  } catch (const BudgetHit&) {
    return st.finish(Status::BudgetExhausted, rld.assignment());
  }
  return st.finish(Status::Solved, rld.assignment());
}

SolveOutcome solve_slr1(const EquationSystem& s, const Assignment& r, const Unknown& x0, const SolverConfig& c) {
  return solve_slr(s, r, x0, c, SlrVariant::Slr1, false);
}
SolveOutcome solve_slr2(const EquationSystem& s, const Assignment& r, const Unknown& x0, const SolverConfig& c) {
  return solve_slr(s, r, x0, c, SlrVariant::Slr2, false);
}
SolveOutcome solve_slr3(const EquationSystem& s, const Assignment& r, const Unknown& x0, const SolverConfig& c) {
  return solve_slr(s, r, x0, c, SlrVariant::Slr3, false);
}
SolveOutcome solve_slr4(const EquationSystem& s, const Assignment& r, const Unknown& x0, const SolverConfig& c) {
  return solve_slr(s, r, x0, c, SlrVariant::Slr4, false);
}
SolveOutcome solve_slr1_plus(const EquationSystem& s, const Assignment& r, const Unknown& x0,
                             const SolverConfig& c) {
  return solve_slr(s, r, x0, c, SlrVariant::Slr1, true);
}
SolveOutcome solve_slr3_plus(const EquationSystem& s, const Assignment& r, const Unknown& x0,
                             const SolverConfig& c) {
  return solve_slr(s, r, x0, c, SlrVariant::Slr3, true);
}

}  // namespace intertwine
