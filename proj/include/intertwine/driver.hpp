#pragma once

#include <optional>
#include <string>
#include <vector>

#include "intertwine/solvers.hpp"

namespace intertwine {

/// rr, w, srr, sw, two-phase, rec, rld, slr1..slr4, slr1plus, slr3plus.
const std::vector<std::string>& solver_names();
bool is_local_solver(const std::string& name);

/// Runs a solver by name. Local solvers start from `query` (the first
/// declared unknown when absent). Side-effecting systems go to the `+`
/// variants of SLR; other solvers get the flattened system.
SolveOutcome run_solver(const std::string& name, const EquationSystem& system, const std::optional<Unknown>& query,
                        const SolverConfig& config = {});

/// Per-point classification of `a` against `b`; missing values count as bottom.
struct Comparison {
  std::size_t points = 0;
  std::size_t better = 0;
  std::size_t equal = 0;
  std::size_t worse = 0;
  std::size_t incomparable = 0;
  std::vector<Unknown> better_at;
  std::vector<Unknown> worse_at;
};

Comparison compare_assignments(const DomainOps& ops, const Assignment& a, const Assignment& b,
                               const std::vector<Unknown>& points);

/// Declared unknowns minus pair stores and `$init`.
std::vector<Unknown> program_points(const EquationSystem& system);

std::string status_name(Status s);

/// `unknown<TAB>value` lines, sorted by unknown.
std::string format_values(const DomainOps& ops, const Assignment& rho, bool include_pairs = true);

std::string format_trace(const DomainOps& ops, const std::vector<TraceEntry>& trace);

}  // namespace intertwine
