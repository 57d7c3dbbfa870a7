#include "intertwine/unknown.hpp"

#include <stdexcept>

namespace intertwine {

Unknown Unknown::pair(const Unknown& contributor, const Unknown& target) {
  if (contributor.pair_ || target.pair_) throw std::invalid_argument("pair of pair unknowns");
  Unknown u;
  u.pair_ = true;
  u.first_ = contributor.first_;
  u.second_ = target.first_;
  return u;
}

std::size_t Unknown::hash() const {
  std::size_t h = std::hash<std::string>{}(first_);
  if (pair_) h ^= std::hash<std::string>{}(second_) * 0x9e3779b97f4a7c15ULL + 1;
  return h;
}

}  // namespace intertwine
