#include "dendro/bijection.hpp"

#include <stdexcept>

namespace dendro {

BijectionMap::BijectionMap(std::vector<std::size_t> forward,
                           std::size_t codomain_size)
    : forward_(std::move(forward)) {
  if (forward_.size() != codomain_size)
    throw std::invalid_argument("bijection cardinality mismatch: " +
                                std::to_string(forward_.size()) + " vs " +
                                std::to_string(codomain_size));
  inverse_.assign(codomain_size, codomain_size);
  for (std::size_t i = 0; i < forward_.size(); ++i) {
    std::size_t j = forward_[i];
    if (j >= codomain_size)
      throw std::invalid_argument("bijection image out of range");
    if (inverse_[j] != codomain_size)
      throw std::invalid_argument("bijection is not injective");
    inverse_[j] = i;
  }
}

BijectionMap BijectionMap::index_identity(std::size_t n) {
  std::vector<std::size_t> forward(n);
  for (std::size_t i = 0; i < n; ++i) forward[i] = i;
  return BijectionMap(std::move(forward), n);
}

BijectionMap BijectionMap::label_identity(const UltrametricSpace& from,
                                          const UltrametricSpace& to) {
  if (from.size() != to.size())
    throw std::invalid_argument("bijection cardinality mismatch");
  std::vector<std::size_t> forward(from.size());
  for (std::size_t i = 0; i < from.size(); ++i)
    forward[i] = to.index_of(from.label(i));
  return BijectionMap(std::move(forward), to.size());
}

BijectionMap BijectionMap::from_label_pairs(
    const UltrametricSpace& from, const UltrametricSpace& to,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (from.size() != to.size() || pairs.size() != from.size())
    throw std::invalid_argument("bijection cardinality mismatch");
  std::vector<std::size_t> forward(from.size(), to.size());
  for (const auto& [a, b] : pairs) {
    std::size_t i = from.index_of(a);
    if (forward[i] != to.size())
      throw std::invalid_argument("bijection maps " + a + " twice");
    forward[i] = to.index_of(b);
  }
  for (auto j : forward)
    if (j == to.size())
      throw std::invalid_argument("bijection is not total");
  return BijectionMap(std::move(forward), to.size());
}

BijectionMap BijectionMap::inverted() const {
  return BijectionMap(inverse_, forward_.size());
}

}  // namespace dendro
