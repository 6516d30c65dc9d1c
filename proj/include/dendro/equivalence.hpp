#pragma once

#include "dendro/bijection.hpp"
#include "dendro/ultrametric.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>

namespace dendro {

inline constexpr std::size_t kBranchingOracleCap = 8;

struct BranchingCheck {
  bool ok = true;
  /// First violating based triple (base, y, z) in label order.
  std::optional<std::array<std::string, 3>> violation;
};

/// Whether f preserves branching: within every based triple, equality of
/// heights is preserved both ways and strict height order is preserved
/// (heights reverse distances, so h(x,y) > h(x,z) must give
/// h'(fx,fy) > h'(fx,fz)).
BranchingCheck preserves_branching(const BijectionMap& f,
                                   const UltrametricSpace& u,
                                   const UltrametricSpace& u2);

/// Exhaustive search for a branching-preserving bijection. False on
/// cardinality mismatch; throws above the cap (cap! permutations).
bool same_branching_oracle(const UltrametricSpace& u,
                           const UltrametricSpace& u2,
                           std::size_t cap = kBranchingOracleCap);

/// Decision by unweighted canonical codes of the canonical dendrograms.
/// Cross-validated against same_branching_oracle by the test suites.
bool same_branching(const UltrametricSpace& u, const UltrametricSpace& u2);

struct IsometryResult {
  bool isometric = false;
  std::optional<BijectionMap> witness;
};

/// Height-preserving bijection existence, decided by weighted canonical
/// codes; the witness aligns the canonical leaf orders of the two
/// dendrograms.
IsometryResult exists_isometry(const UltrametricSpace& u,
                               const UltrametricSpace& u2);

}  // namespace dendro
