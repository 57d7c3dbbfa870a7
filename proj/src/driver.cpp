#include "intertwine/driver.hpp"

#include <algorithm>
#include <sstream>

#include "intertwine/errors.hpp"
#include "intertwine/frontend.hpp"
#include "intertwine/wto.hpp"

namespace intertwine {

const std::vector<std::string>& solver_names() {
  static const std::vector<std::string> kNames = {"rr",   "w",    "srr",  "sw",   "two-phase", "rec",      "rld",
                                                  "slr1", "slr2", "slr3", "slr4", "slr1plus",  "slr3plus"};
  return kNames;
}

bool is_local_solver(const std::string& name) { return name == "rld" || name.rfind("slr", 0) == 0; }

namespace {

std::optional<SlrVariant> slr_variant(const std::string& name) {
  if (name == "slr1" || name == "slr1plus") return SlrVariant::Slr1;
  if (name == "slr2") return SlrVariant::Slr2;
  if (name == "slr3" || name == "slr3plus") return SlrVariant::Slr3;
  if (name == "slr4") return SlrVariant::Slr4;
  return std::nullopt;
}

}  // namespace

SolveOutcome run_solver(const std::string& name, const EquationSystem& system, const std::optional<Unknown>& query,
                        const SolverConfig& config) {
  if (std::find(solver_names().begin(), solver_names().end(), name) == solver_names().end()) {
    throw InvalidConfig("unknown solver '" + name + "'");
  }
  const Assignment rho0;
  const auto start = [&]() -> Unknown {
    if (query) return *query;
    if (system.declared && !system.declared->empty()) return system.declared->front();
    throw InvalidConfig(name + " needs a query unknown");
  };
  if (auto v = slr_variant(name)) {
    const bool plus = name.size() > 4 && name.substr(name.size() - 4) == "plus";
    return solve_slr(system, rho0, start(), config, *v, plus || system.side_effecting);
  }
  if (system.side_effecting) return run_solver(name, flatten_side_effects(system), query, config);
  if (name == "rld") return solve_rld(system, rho0, start(), config);
  if (name == "rr") return solve_rr(system, rho0, config);
  if (name == "w") return solve_w(system, rho0, config);
  if (name == "srr") return solve_srr(system, rho0, config);
  if (name == "sw") return solve_sw(system, rho0, config);
  if (name == "two-phase") return solve_two_phase(system, rho0, config);
  const Wto wto = build_wto(system.declared_or_throw(), system.deps_or_throw());
  return solve_rec(system, rho0, wto, config);
}

Comparison compare_assignments(const DomainOps& ops, const Assignment& a, const Assignment& b,
                               const std::vector<Unknown>& points) {
  Comparison c;
  for (const auto& x : points) {
    const Value va = a.read(x, ops.bottom);
    const Value vb = b.read(x, ops.bottom);
    const bool le = ops.leq(va, vb);
    const bool ge = ops.leq(vb, va);
    ++c.points;
    if (le && ge) {
      ++c.equal;
    } else if (le) {
      ++c.better;
      c.better_at.push_back(x);
    } else if (ge) {
      ++c.worse;
      c.worse_at.push_back(x);
    } else {
      ++c.incomparable;
    }
  }
  return c;
}

std::vector<Unknown> program_points(const EquationSystem& system) {
  std::vector<Unknown> out;
  for (const auto& x : system.declared_or_throw()) {
    if (!x.is_pair() && x.name() != frontend::kInitUnknown) out.push_back(x);
  }
  return out;
}

std::string status_name(Status s) { return s == Status::Solved ? "Solved" : "BudgetExhausted"; }

std::string format_values(const DomainOps& ops, const Assignment& rho, bool include_pairs) {
  std::ostringstream out;
  for (const auto& [x, v] : rho.values()) {
    if (!include_pairs && x.is_pair()) continue;
    out << x.str() << '\t' << ops.show(v) << '\n';
  }
  return out.str();
}

std::string format_trace(const DomainOps& ops, const std::vector<TraceEntry>& trace) {
  std::ostringstream out;
  for (const auto& t : trace) {
    out << t.eval << '\t' << t.x.str() << '\t' << ops.show(t.old_value) << " -> " << ops.show(t.new_value) << '\n';
  }
  return out.str();
}

}  // namespace intertwine
