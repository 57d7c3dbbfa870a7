#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "intertwine/solvers.hpp"

namespace intertwine {

/// A well-parenthesized permutation of unknowns, e.g. `1 (2 3 (4 5)) 6`.
/// The first element of each component is its head.
class Wto {
 public:
  Wto() = default;
  /// Parses the parenthesized text form.
  static Wto parse(const std::string& text);

  const std::vector<Unknown>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool contains(const Unknown& x) const { return pos_.count(x) != 0; }
  std::size_t position(const Unknown& x) const { return pos_.at(x); }

  bool head(const Unknown& x) const;
  std::optional<Unknown> next(const Unknown& x) const;
  /// next(x), unless a ')' separates them.
  std::optional<Unknown> nextinc(const Unknown& x) const;
  /// When next(x) is a head: the element after that component, if it still
  /// lies in x's component.
  std::optional<Unknown> skip(const Unknown& x) const;
  /// For a head: the element after its component, if it lies in the
  /// enclosing component.
  std::optional<Unknown> after_component(const Unknown& h) const;
  /// Heads of the components containing x, outermost first.
  std::vector<Unknown> omega(const Unknown& x) const;
  std::vector<Unknown> heads() const;

  std::string str() const;

 private:
  friend Wto build_wto(const std::vector<Unknown>&, const DepMap&);
  struct Token {
    char kind;  // '(', ')' or 'e' for an element
    Unknown x;
  };
  static Wto from_tokens(const std::vector<Token>& tokens);
  std::optional<Unknown> element_within(std::size_t p, int comp) const;

  struct Component {
    std::size_t head;
    std::size_t end;
    int parent;
  };
  std::vector<Unknown> elems_;
  std::unordered_map<Unknown, std::size_t> pos_;
  std::vector<int> comp_of_;  // innermost component per position, -1 at top level
  std::vector<Component> comps_;
  std::vector<int> closes_after_;
};

/// Bourdoncle's recursive decomposition; successors are visited in the order
/// of `unknowns`. An edge u -> v exists when u is in deps[v].
Wto build_wto(const std::vector<Unknown>& unknowns, const DepMap& deps);

/// For every u in deps[v]: u before v, or v no later than u and v in omega(u).
/// Every unknown mentioned in `deps` must occur in the ordering.
bool check_wto(const Wto& wto, const DepMap& deps);

/// Recursive iteration along a w.t.o.: plain assignment at non-heads, box at
/// heads, inner components stabilized before outer ones.
SolveOutcome solve_rec(const EquationSystem& system, const Assignment& rho0, const Wto& wto,
                       const SolverConfig& config = {});

}  // namespace intertwine
