#pragma once

#include <compare>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

namespace intertwine {

/// Name of an unknown: either a base name or a pair <contributor,target>.
class Unknown {
 public:
  Unknown() = default;
  explicit Unknown(std::string name) : first_(std::move(name)) {}

  static Unknown named(std::string name) { return Unknown(std::move(name)); }
  static Unknown pair(const Unknown& contributor, const Unknown& target);

  bool is_pair() const { return pair_; }
  /// Base name, or the contributor's name for a pair.
  const std::string& name() const { return first_; }
  Unknown contributor() const { return Unknown(first_); }
  Unknown target() const { return Unknown(second_); }

  /// `x` or `<x,z>`.
  std::string str() const { return pair_ ? "<" + first_ + "," + second_ + ">" : first_; }

  friend bool operator==(const Unknown&, const Unknown&) = default;
  friend auto operator<=>(const Unknown& a, const Unknown& b) {
    if (a.pair_ != b.pair_) return a.pair_ <=> b.pair_;
    if (auto c = a.first_ <=> b.first_; c != 0) return c;
    return a.second_ <=> b.second_;
  }

  std::size_t hash() const;

 private:
  bool pair_ = false;
  std::string first_;
  std::string second_;
};

}  // namespace intertwine

template <>
struct std::hash<intertwine::Unknown> {
  std::size_t operator()(const intertwine::Unknown& u) const noexcept { return u.hash(); }
};

namespace intertwine {

/// Set that iterates in insertion order.
template <typename T>
class OrderedSet {
 public:
  bool insert(const T& v) {
    if (!seen_.insert(v).second) return false;
    items_.push_back(v);
    return true;
  }
  bool contains(const T& v) const { return seen_.count(v) != 0; }
  void clear() {
    items_.clear();
    seen_.clear();
  }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<T>& items() const { return items_; }

 private:
  std::vector<T> items_;
  std::unordered_set<T> seen_;
};

}  // namespace intertwine
