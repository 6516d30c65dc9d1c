#pragma once

#include "dendro/ultrametric.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace dendro {

/// A bijection between the point sets of two spaces, held as index
/// permutations in both directions. Construction rejects anything that is
/// not total, injective and onto (cardinality mismatches included).
class BijectionMap {
 public:
  /// forward[i] = image index; cardinalities must agree.
  BijectionMap(std::vector<std::size_t> forward, std::size_t codomain_size);

  static BijectionMap index_identity(std::size_t n);
  /// Matches equal labels; throws when the label sets differ.
  static BijectionMap label_identity(const UltrametricSpace& from,
                                     const UltrametricSpace& to);
  static BijectionMap from_label_pairs(
      const UltrametricSpace& from, const UltrametricSpace& to,
      const std::vector<std::pair<std::string, std::string>>& pairs);

  std::size_t size() const { return forward_.size(); }
  std::size_t image(std::size_t i) const { return forward_[i]; }
  std::size_t preimage(std::size_t j) const { return inverse_[j]; }
  const std::vector<std::size_t>& forward() const { return forward_; }

  BijectionMap inverted() const;

  bool operator==(const BijectionMap& other) const = default;

 private:
  std::vector<std::size_t> forward_;
  std::vector<std::size_t> inverse_;
};

}  // namespace dendro
