#pragma once

#include <unordered_map>

#include "intertwine/solvers.hpp"

namespace intertwine::detail {

/// Thrown internally when the evaluation budget is used up.
struct BudgetHit {};

/// Counters, trace, budget and the per-unknown box operator shared by all
/// solvers.
class RunState {
 public:
  RunState(const EquationSystem& system, const SolverConfig& config)
      : ops_(system.domain), config_(config) {
    config.validate();
  }

  const DomainOps& ops() const { return ops_; }
  const SolverConfig& config() const { return config_; }
  SolveStats& stats() { return stats_; }

  /// Call before each rhs evaluation.
  void count_eval() {
    if (stats_.rhs_evals >= config_.budget) throw BudgetHit{};
    ++stats_.rhs_evals;
  }

  bool at_box_point(const Unknown& x) const {
    return !config_.box_points || config_.box_points->count(x) != 0;
  }

  /// old box fresh for `x`, honoring the switch bound.
  Value combine(const Unknown& x, const Value& old, const Value& fresh) { return combine(x, old, fresh, config_.box); }
  Value combine(const Unknown& x, const Value& old, const Value& fresh, BoxOp op);

  void record(const Unknown& x, const Value& old, const Value& now) {
    ++stats_.updates;
    if (config_.record_trace) trace_.push_back({x, old, now, stats_.rhs_evals});
  }

  std::vector<TraceEntry> take_trace() { return std::move(trace_); }

  SolveOutcome finish(Status status, Assignment rho) {
    SolveOutcome out;
    out.status = status;
    out.assignment = std::move(rho);
    out.stats = stats_;
    out.trace = std::move(trace_);
    return out;
  }

 private:
  struct Phase {
    bool narrowing = false;
    bool started = false;
    int switches = 0;
  };
  const DomainOps& ops_;
  const SolverConfig& config_;
  SolveStats stats_;
  std::vector<TraceEntry> trace_;
  std::unordered_map<Unknown, Phase> phases_;
};

}  // namespace intertwine::detail
