#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "intertwine/equations.hpp"

namespace intertwine {

enum class BoxOp { Join, Widen, Narrow, Warrow };
enum class WorklistPolicy { Lifo, Fifo };
enum class Status { Solved, BudgetExhausted };

std::string box_name(BoxOp op);
BoxOp parse_box(const std::string& name);
BoxFn box_fn(BoxOp op, const DomainOps& ops);

/// Passed to SolverConfig::on_step after every right-hand side evaluation.
struct StepInfo {
  const Unknown& x;
  const Value& old_value;
  const Value& new_value;
  bool changed;
  /// Worklist or queue contents after the step, next extraction first.
  /// Only filled by W and SW.
  std::vector<Unknown> pending;
  /// Reads the solver's current assignment, bottom outside its domain.
  const std::function<Value(const Unknown&)>& peek;
};

struct SolverConfig {
  BoxOp box = BoxOp::Warrow;
  std::size_t budget = 100000;
  WorklistPolicy worklist_policy = WorklistPolicy::Lifo;
  /// When set, unknowns outside get plain assignment instead of box.
  std::optional<std::set<Unknown>> box_points;
  /// Narrow-to-widen switches per unknown after which narrowing freezes.
  std::optional<int> switch_bound;
  /// Restarts per unknown that fail to improve before SLR4 stops restarting it.
  std::optional<int> restart_bound = 3;
  bool record_trace = true;
  std::function<void(const StepInfo&)> on_step;

  void validate() const;
};

struct SolveStats {
  std::size_t rhs_evals = 0;
  std::size_t updates = 0;
};

struct TraceEntry {
  Unknown x;
  Value old_value;
  Value new_value;
  /// Number of right-hand side evaluations performed so far.
  std::size_t eval = 0;
};

struct SolveOutcome {
  Status status = Status::Solved;
  Assignment assignment;
  SolveStats stats;
  std::vector<TraceEntry> trace;
};

// Global solvers over the declared unknowns.
SolveOutcome solve_rr(const EquationSystem& system, const Assignment& rho0, const SolverConfig& config = {});
SolveOutcome solve_w(const EquationSystem& system, const Assignment& rho0, const SolverConfig& config = {});
SolveOutcome solve_srr(const EquationSystem& system, const Assignment& rho0, const SolverConfig& config = {});
SolveOutcome solve_sw(const EquationSystem& system, const Assignment& rho0, const SolverConfig& config = {});
/// SW with widening, then SW with narrowing from the widened result.
SolveOutcome solve_two_phase(const EquationSystem& system, const Assignment& rho0,
                             const SolverConfig& config = {});

// Local solvers, demand-driven from x0.
/// Always combines with join regardless of config.box.
SolveOutcome solve_rld(const EquationSystem& system, const Assignment& rho0, const Unknown& x0,
                       const SolverConfig& config = {});

enum class SlrVariant { Slr1, Slr2, Slr3, Slr4 };

/// The SLR family. With `side_effects` the rhs may emit side effects, which
/// are collected in pair unknowns <x,z>; otherwise a side effect throws
/// UnsupportedSideEffect.
SolveOutcome solve_slr(const EquationSystem& system, const Assignment& rho0, const Unknown& x0,
                       const SolverConfig& config, SlrVariant variant, bool side_effects);

SolveOutcome solve_slr1(const EquationSystem& system, const Assignment& rho0, const Unknown& x0,
                        const SolverConfig& config = {});
SolveOutcome solve_slr2(const EquationSystem& system, const Assignment& rho0, const Unknown& x0,
                        const SolverConfig& config = {});
SolveOutcome solve_slr3(const EquationSystem& system, const Assignment& rho0, const Unknown& x0,
                        const SolverConfig& config = {});
SolveOutcome solve_slr4(const EquationSystem& system, const Assignment& rho0, const Unknown& x0,
                        const SolverConfig& config = {});
SolveOutcome solve_slr1_plus(const EquationSystem& system, const Assignment& rho0, const Unknown& x0,
                             const SolverConfig& config = {});
SolveOutcome solve_slr3_plus(const EquationSystem& system, const Assignment& rho0, const Unknown& x0,
                             const SolverConfig& config = {});

}  // namespace intertwine
