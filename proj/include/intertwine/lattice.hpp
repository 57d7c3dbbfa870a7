#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace intertwine {

/// An element of Z extended with -inf and +inf.
class Bound {
 public:
  enum class Kind : std::int8_t { NegInf, Finite, PosInf };

  constexpr Bound() : kind_(Kind::Finite), value_(0) {}
  constexpr Bound(std::int64_t v) : kind_(Kind::Finite), value_(v) {}  // NOLINT

  static constexpr Bound neg_inf() { return Bound(Kind::NegInf); }
  static constexpr Bound pos_inf() { return Bound(Kind::PosInf); }

  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  Kind kind() const { return kind_; }
  /// Only meaningful for finite bounds.
  std::int64_t value() const { return value_; }

  friend bool operator==(const Bound& a, const Bound& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
  }
  friend bool operator<(const Bound& a, const Bound& b);
  friend bool operator<=(const Bound& a, const Bound& b) { return !(b < a); }
  friend bool operator>(const Bound& a, const Bound& b) { return b < a; }
  friend bool operator>=(const Bound& a, const Bound& b) { return !(a < b); }

  Bound operator-() const;

  std::string str() const;

 private:
  constexpr explicit Bound(Kind k) : kind_(k), value_(0) {}
  Kind kind_;
  std::int64_t value_;
};

// Additions that stay sound when 64-bit arithmetic overflows: a lower bound
// saturates to -inf, an upper bound to +inf.
Bound add_lower(const Bound& a, const Bound& b);
Bound add_upper(const Bound& a, const Bound& b);

/// Integer interval [lo,hi] or Bottom.
class Interval {
 public:
  /// Bottom.
  Interval() = default;
  Interval(Bound lo, Bound hi);

  static Interval bottom() { return {}; }
  static Interval top() { return {Bound::neg_inf(), Bound::pos_inf()}; }
  static Interval singleton(std::int64_t k) { return {Bound(k), Bound(k)}; }

  bool is_bottom() const { return bottom_; }
  bool is_top() const { return !bottom_ && lo_.is_neg_inf() && hi_.is_pos_inf(); }
  const Bound& lo() const { return lo_; }
  const Bound& hi() const { return hi_; }

  bool leq(const Interval& o) const;
  Interval join(const Interval& o) const;
  Interval meet(const Interval& o) const;
  Interval widen(const Interval& o) const;
  Interval narrow(const Interval& o) const;

  friend bool operator==(const Interval& a, const Interval& b) {
    if (a.bottom_ || b.bottom_) return a.bottom_ == b.bottom_;
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

  /// `[lo,hi]` or `bot`.
  std::string str() const;

 private:
  bool bottom_ = true;
  Bound lo_;
  Bound hi_;
};

enum class Cmp { Lt, Le, Gt, Ge, Eq, Ne };

Interval interval_add(const Interval& a, const Interval& b);
Interval interval_sub(const Interval& a, const Interval& b);
Interval interval_neg(const Interval& a);
Interval interval_scale(const Interval& a, std::int64_t k);
Interval interval_min(const Interval& a, const Interval& b);
Interval interval_max(const Interval& a, const Interval& b);
/// Tightest interval containing { v in a | v cmp k }.
Interval guard(Cmp cmp, const Interval& a, std::int64_t k);
Cmp negate(Cmp cmp);
Cmp flip(Cmp cmp);
std::string cmp_str(Cmp cmp);

/// N extended with infinity.
class NatInf {
 public:
  constexpr NatInf() = default;
  constexpr NatInf(std::uint64_t n) : n_(n) {}  // NOLINT
  static constexpr NatInf inf() {
    NatInf r;
    r.inf_ = true;
    return r;
  }
  bool is_inf() const { return inf_; }
  std::uint64_t value() const { return n_; }

  friend bool operator==(const NatInf& a, const NatInf& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.n_ == b.n_);
  }
  friend bool operator<(const NatInf& a, const NatInf& b) {
    if (a.inf_) return false;
    return b.inf_ || a.n_ < b.n_;
  }
  friend bool operator<=(const NatInf& a, const NatInf& b) { return !(b < a); }

  NatInf plus(const NatInf& o) const;
  std::string str() const;

 private:
  bool inf_ = false;
  std::uint64_t n_ = 0;
};

/// Intervals for a fixed list of variables, or Bottom.
class Env {
 public:
  /// Bottom.
  Env() = default;
  explicit Env(std::vector<Interval> vals);
  static Env bottom() { return {}; }
  static Env top(std::size_t n) { return Env(std::vector<Interval>(n, Interval::top())); }

  bool is_bottom() const { return bottom_; }
  std::size_t size() const { return vals_.size(); }
  const Interval& at(std::size_t i) const { return vals_.at(i); }
  /// Copy with slot i replaced; a Bottom interval collapses the whole env.
  Env with(std::size_t i, const Interval& v) const;
  const std::vector<Interval>& values() const { return vals_; }

  friend bool operator==(const Env& a, const Env& b) {
    if (a.bottom_ || b.bottom_) return a.bottom_ == b.bottom_;
    return a.vals_ == b.vals_;
  }

 private:
  bool bottom_ = true;
  std::vector<Interval> vals_;
};

using Value = std::variant<Interval, NatInf, Env>;

bool is_bottom(const Value& v);

/// Runtime table of lattice operations over Value.
struct DomainOps {
  std::string name;
  std::function<bool(const Value&, const Value&)> leq;
  std::function<bool(const Value&, const Value&)> eq;
  std::function<Value(const Value&, const Value&)> join;
  std::function<Value(const Value&, const Value&)> meet;
  std::function<Value(const Value&, const Value&)> widen;
  std::function<Value(const Value&, const Value&)> narrow;
  Value bottom;
  Value top;
  std::function<std::string(const Value&)> show;
  /// Variable names when values are environments, empty otherwise.
  std::vector<std::string> vars;
};

/// narrow(a,b) when b <= a, widen(a,b) otherwise.
Value warrow(const DomainOps& ops, const Value& a, const Value& b);

DomainOps interval_ops();
DomainOps natinf_ops();
/// Environments over `vars`; plain Interval values are accepted too and share
/// the same Bottom, so one system can mix program points and scalar globals.
DomainOps env_ops(std::vector<std::string> vars);

const Interval& as_interval(const Value& v);
const NatInf& as_natinf(const Value& v);
const Env& as_env(const Value& v);

}  // namespace intertwine
