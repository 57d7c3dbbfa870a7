#include "intertwine/lattice.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "intertwine/errors.hpp"

namespace intertwine {

bool operator<(const Bound& a, const Bound& b) {
  if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
  return a.kind_ == Bound::Kind::Finite && a.value_ < b.value_;
}

Bound Bound::operator-() const {
  switch (kind_) {
    case Kind::NegInf:
      return pos_inf();
    case Kind::PosInf:
      return neg_inf();
    case Kind::Finite:
      break;
  }
  if (value_ == std::numeric_limits<std::int64_t>::min()) return pos_inf();
  return Bound(-value_);
}

std::string Bound::str() const {
  switch (kind_) {
    case Kind::NegInf:
      return "-inf";
    case Kind::PosInf:
      return "inf";
    case Kind::Finite:
      break;
  }
  return std::to_string(value_);
}

namespace {

// Sum of two bounds where at least one is infinite, or the finite sum.
// `saturate` is returned when the finite sum overflows.
Bound add_bounds(const Bound& a, const Bound& b, const Bound& saturate) {
  if (a.is_neg_inf() || b.is_neg_inf()) return Bound::neg_inf();
  if (a.is_pos_inf() || b.is_pos_inf()) return Bound::pos_inf();
  std::int64_t r = 0;
  if (__builtin_add_overflow(a.value(), b.value(), &r)) return saturate;
  return Bound(r);
}

Bound mul_bound(const Bound& a, std::int64_t k, const Bound& saturate) {
  if (k == 0) return Bound(0);
  if (!a.is_finite()) return (a.is_pos_inf() == (k > 0)) ? Bound::pos_inf() : Bound::neg_inf();
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a.value(), k, &r)) return saturate;
  return Bound(r);
}

}  // namespace

Bound add_lower(const Bound& a, const Bound& b) { return add_bounds(a, b, Bound::neg_inf()); }
Bound add_upper(const Bound& a, const Bound& b) { return add_bounds(a, b, Bound::pos_inf()); }

Interval::Interval(Bound lo, Bound hi) : bottom_(false), lo_(lo), hi_(hi) {
  if (lo.is_pos_inf() || hi.is_neg_inf() || hi < lo) {
    throw std::invalid_argument("malformed interval [" + lo.str() + "," + hi.str() + "]");
  }
}

bool Interval::leq(const Interval& o) const {
  if (bottom_) return true;
  if (o.bottom_) return false;
  return o.lo_ <= lo_ && hi_ <= o.hi_;
}

Interval Interval::join(const Interval& o) const {
  if (bottom_) return o;
  if (o.bottom_) return *this;
  return {std::min(lo_, o.lo_), std::max(hi_, o.hi_)};
}

Interval Interval::meet(const Interval& o) const {
  if (bottom_ || o.bottom_) return bottom();
  Bound lo = std::max(lo_, o.lo_);
  Bound hi = std::min(hi_, o.hi_);
  if (hi < lo) return bottom();
  return {lo, hi};
}

Interval Interval::widen(const Interval& o) const {
  if (bottom_) return o;
  if (o.bottom_) return *this;
  Bound lo = o.lo_ < lo_ ? Bound::neg_inf() : lo_;
  Bound hi = o.hi_ > hi_ ? Bound::pos_inf() : hi_;
  return {lo, hi};
}

Interval Interval::narrow(const Interval& o) const {
  if (bottom_ || o.bottom_) return bottom();
  Bound lo = lo_.is_neg_inf() ? o.lo_ : lo_;
  Bound hi = hi_.is_pos_inf() ? o.hi_ : hi_;
  if (hi < lo) return *this;  // only reachable when o is not below *this
  return {lo, hi};
}

std::string Interval::str() const {
  if (bottom_) return "bot";
  return "[" + lo_.str() + "," + hi_.str() + "]";
}

Interval interval_add(const Interval& a, const Interval& b) {
  if (a.is_bottom() || b.is_bottom()) return Interval::bottom();
  return {add_lower(a.lo(), b.lo()), add_upper(a.hi(), b.hi())};
}

Interval interval_neg(const Interval& a) {
  if (a.is_bottom()) return a;
  return {-a.hi(), -a.lo()};
}

Interval interval_sub(const Interval& a, const Interval& b) {
  if (a.is_bottom() || b.is_bottom()) return Interval::bottom();
  // -b.hi may saturate; negation of a finite bound only overflows at INT64_MIN.
  Bound nlo = -b.hi();
  Bound nhi = -b.lo();
  if (b.hi().is_finite() && b.hi().value() == std::numeric_limits<std::int64_t>::min()) {
    nlo = Bound::neg_inf();
  }
  return {add_lower(a.lo(), nlo), add_upper(a.hi(), nhi)};
}

Interval interval_scale(const Interval& a, std::int64_t k) {
  if (a.is_bottom()) return a;
  if (k >= 0) return {mul_bound(a.lo(), k, Bound::neg_inf()), mul_bound(a.hi(), k, Bound::pos_inf())};
  return {mul_bound(a.hi(), k, Bound::neg_inf()), mul_bound(a.lo(), k, Bound::pos_inf())};
}

Interval interval_min(const Interval& a, const Interval& b) {
  if (a.is_bottom() || b.is_bottom()) return Interval::bottom();
  return {std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

Interval interval_max(const Interval& a, const Interval& b) {
  if (a.is_bottom() || b.is_bottom()) return Interval::bottom();
  return {std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

Interval guard(Cmp cmp, const Interval& a, std::int64_t k) {
  if (a.is_bottom()) return a;
  const auto below = [&](std::int64_t hi) { return a.meet({Bound::neg_inf(), Bound(hi)}); };
  const auto above = [&](std::int64_t lo) { return a.meet({Bound(lo), Bound::pos_inf()}); };
  constexpr auto kMin = std::numeric_limits<std::int64_t>::min();
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  switch (cmp) {
    case Cmp::Lt:
      return k == kMin ? Interval::bottom() : below(k - 1);
    case Cmp::Le:
      return below(k);
    case Cmp::Gt:
      return k == kMax ? Interval::bottom() : above(k + 1);
    case Cmp::Ge:
      return above(k);
    case Cmp::Eq:
      return a.meet(Interval::singleton(k));
    case Cmp::Ne:
      if (a == Interval::singleton(k)) return Interval::bottom();
      if (a.lo() == Bound(k)) return {Bound(k + 1), a.hi()};
      if (a.hi() == Bound(k)) return {a.lo(), Bound(k - 1)};
      return a;
  }
  return a;
}

Cmp negate(Cmp cmp) {
  switch (cmp) {
    case Cmp::Lt:
      return Cmp::Ge;
    case Cmp::Le:
      return Cmp::Gt;
    case Cmp::Gt:
      return Cmp::Le;
    case Cmp::Ge:
      return Cmp::Lt;
    case Cmp::Eq:
      return Cmp::Ne;
    case Cmp::Ne:
      return Cmp::Eq;
  }
  return cmp;
}

Cmp flip(Cmp cmp) {
  switch (cmp) {
    case Cmp::Lt:
      return Cmp::Gt;
    case Cmp::Le:
      return Cmp::Ge;
    case Cmp::Gt:
      return Cmp::Lt;
    case Cmp::Ge:
      return Cmp::Le;
    default:
      return cmp;
  }
}

std::string cmp_str(Cmp cmp) {
  switch (cmp) {
    case Cmp::Lt:
      return "<";
    case Cmp::Le:
      return "<=";
    case Cmp::Gt:
      return ">";
    case Cmp::Ge:
      return ">=";
    case Cmp::Eq:
      return "==";
    case Cmp::Ne:
      return "!=";
  }
  return "?";
}

NatInf NatInf::plus(const NatInf& o) const {
  if (inf_ || o.inf_) return inf();
  std::uint64_t r = 0;
  if (__builtin_add_overflow(n_, o.n_, &r)) return inf();
  return NatInf(r);
}

std::string NatInf::str() const { return inf_ ? "inf" : std::to_string(n_); }

Env::Env(std::vector<Interval> vals) : bottom_(false), vals_(std::move(vals)) {
  if (std::any_of(vals_.begin(), vals_.end(), [](const Interval& v) { return v.is_bottom(); })) {
    bottom_ = true;
    vals_.clear();
  }
}

Env Env::with(std::size_t i, const Interval& v) const {
  if (bottom_) return *this;
  std::vector<Interval> vals = vals_;
  vals.at(i) = v;
  return Env(std::move(vals));
}

bool is_bottom(const Value& v) {
  if (const auto* i = std::get_if<Interval>(&v)) return i->is_bottom();
  if (const auto* e = std::get_if<Env>(&v)) return e->is_bottom();
  return false;
}

const Interval& as_interval(const Value& v) {
  if (const auto* i = std::get_if<Interval>(&v)) return *i;
  throw DomainMismatch("expected an interval value");
}

const NatInf& as_natinf(const Value& v) {
  if (const auto* n = std::get_if<NatInf>(&v)) return *n;
  throw DomainMismatch("expected a natinf value");
}

const Env& as_env(const Value& v) {
  if (const auto* e = std::get_if<Env>(&v)) return *e;
  throw DomainMismatch("expected an environment value");
}

Value warrow(const DomainOps& ops, const Value& a, const Value& b) {
  return ops.leq(b, a) ? ops.narrow(a, b) : ops.widen(a, b);
}

DomainOps interval_ops() {
  DomainOps ops;
  ops.name = "interval";
  ops.leq = [](const Value& a, const Value& b) { return as_interval(a).leq(as_interval(b)); };
  ops.eq = [](const Value& a, const Value& b) { return as_interval(a) == as_interval(b); };
  ops.join = [](const Value& a, const Value& b) -> Value { return as_interval(a).join(as_interval(b)); };
  ops.meet = [](const Value& a, const Value& b) -> Value { return as_interval(a).meet(as_interval(b)); };
  ops.widen = [](const Value& a, const Value& b) -> Value { return as_interval(a).widen(as_interval(b)); };
  ops.narrow = [](const Value& a, const Value& b) -> Value { return as_interval(a).narrow(as_interval(b)); };
  ops.bottom = Interval::bottom();
  ops.top = Interval::top();
  ops.show = [](const Value& v) { return as_interval(v).str(); };
  return ops;
}

DomainOps natinf_ops() {
  DomainOps ops;
  ops.name = "natinf";
  ops.leq = [](const Value& a, const Value& b) { return as_natinf(a) <= as_natinf(b); };
  ops.eq = [](const Value& a, const Value& b) { return as_natinf(a) == as_natinf(b); };
  ops.join = [](const Value& a, const Value& b) -> Value {
    return std::max(as_natinf(a), as_natinf(b), [](auto& x, auto& y) { return x < y; });
  };
  ops.meet = [](const Value& a, const Value& b) -> Value {
    return std::min(as_natinf(a), as_natinf(b), [](auto& x, auto& y) { return x < y; });
  };
  ops.widen = [](const Value& a, const Value& b) -> Value {
    return as_natinf(a) == as_natinf(b) ? as_natinf(a) : NatInf::inf();
  };
  ops.narrow = [](const Value& a, const Value& b) -> Value {
    return as_natinf(a).is_inf() ? as_natinf(b) : as_natinf(a);
  };
  ops.bottom = NatInf(0);
  ops.top = NatInf::inf();
  ops.show = [](const Value& v) { return as_natinf(v).str(); };
  return ops;
}

namespace {

// Pointwise lift of an interval operation; `strict` ops yield Bottom when
// either side is Bottom, the others treat Bottom as the identity.
template <typename F>
Value env_lift(const Value& a, const Value& b, std::size_t n, bool strict, F f) {
  const bool ba = is_bottom(a);
  const bool bb = is_bottom(b);
  if (ba || bb) {
    if (strict) return Env::bottom();
    return ba ? b : a;
  }
  if (std::holds_alternative<Interval>(a) && std::holds_alternative<Interval>(b)) {
    return f(std::get<Interval>(a), std::get<Interval>(b));
  }
  const Env& ea = as_env(a);
  const Env& eb = as_env(b);
  if (ea.size() != n || eb.size() != n) throw DomainMismatch("environment size mismatch");
  std::vector<Interval> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(f(ea.at(i), eb.at(i)));
  return Env(std::move(out));
}

bool env_leq(const Value& a, const Value& b) {
  if (is_bottom(a)) return true;
  if (is_bottom(b)) return false;
  if (std::holds_alternative<Interval>(a) && std::holds_alternative<Interval>(b)) {
    return std::get<Interval>(a).leq(std::get<Interval>(b));
  }
  const Env& ea = as_env(a);
  const Env& eb = as_env(b);
  if (ea.size() != eb.size()) throw DomainMismatch("environment size mismatch");
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (!ea.at(i).leq(eb.at(i))) return false;
  }
  return true;
}

}  // namespace

DomainOps env_ops(std::vector<std::string> vars) {
  DomainOps ops;
  const std::size_t n = vars.size();
  ops.name = "env";
  ops.leq = env_leq;
  ops.eq = [](const Value& a, const Value& b) { return env_leq(a, b) && env_leq(b, a); };
  ops.join = [n](const Value& a, const Value& b) {
    return env_lift(a, b, n, false, [](const Interval& x, const Interval& y) { return x.join(y); });
  };
  ops.widen = [n](const Value& a, const Value& b) {
    return env_lift(a, b, n, false, [](const Interval& x, const Interval& y) { return x.widen(y); });
  };
  ops.meet = [n](const Value& a, const Value& b) {
    return env_lift(a, b, n, true, [](const Interval& x, const Interval& y) { return x.meet(y); });
  };
  ops.narrow = [n](const Value& a, const Value& b) {
    return env_lift(a, b, n, true, [](const Interval& x, const Interval& y) { return x.narrow(y); });
  };
  ops.bottom = Env::bottom();
  ops.top = Env::top(n);
  ops.show = [vars](const Value& v) -> std::string {
    if (is_bottom(v)) return "bot";
    if (const auto* i = std::get_if<Interval>(&v)) return i->str();
    const Env& e = as_env(v);
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i) out << ", ";
      out << vars[i] << ':' << e.at(i).str();
    }
    out << '}';
    return out.str();
  };
  ops.vars = std::move(vars);
  return ops;
}

}  // namespace intertwine
