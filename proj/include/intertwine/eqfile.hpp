#pragma once

#include <string>

#include "intertwine/equations.hpp"

namespace intertwine {

/// Parses the line-based equation format:
///
///     # comment
///     domain natinf            (or `interval`, or `env(x, y)`)
///     x1 = x2
///     x2 = x3 + 1
///
/// Expressions: unknown names, integers, `inf`, `bot`, `top`, `[lo,hi]`,
/// env literals `{x:[0,0], y:top}`, `+`, `-`, and the calls join, meet, min,
/// max, widenconst, guard(cmp, k, e) or guard(cmp, k, e, var) for envs,
/// ite0(c, a, b) and set(e, var, v).
/// The system is finite with static dependences in first-occurrence order.
EquationSystem parse_equation_file(const std::string& text);

EquationSystem load_equation_file(const std::string& path);

}  // namespace intertwine
