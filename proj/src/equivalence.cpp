#include "dendro/equivalence.hpp"

#include "dendro/tree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dendro {

namespace {

// Index-level check used by both the public entry point and the oracle's
// permutation loop; returns the first violating (base, y, z) or {ok}.
BranchingCheck check_forward(const std::vector<std::size_t>& forward,
                             const UltrametricSpace& u,
                             const UltrametricSpace& u2) {
  const std::size_t n = u.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) continue;
      const Rational& a = u.height(x, y);
      const Rational& a2 = u2.height(forward[x], forward[y]);
      for (std::size_t z = y + 1; z < n; ++z) {
        if (z == x) continue;
        const Rational& b = u.height(x, z);
        const Rational& b2 = u2.height(forward[x], forward[z]);
        int before = a < b ? -1 : (a == b ? 0 : 1);
        int after = a2 < b2 ? -1 : (a2 == b2 ? 0 : 1);
        if (before != after)
          return BranchingCheck{
              false,
              std::array<std::string, 3>{u.label(x), u.label(y), u.label(z)}};
      }
    }
  }
  return {};
}

}  // namespace

BranchingCheck preserves_branching(const BijectionMap& f,
                                   const UltrametricSpace& u,
                                   const UltrametricSpace& u2) {
  if (f.size() != u.size() || u.size() != u2.size())
    throw std::invalid_argument("bijection does not match the two spaces");
  return check_forward(f.forward(), u, u2);
}

bool same_branching_oracle(const UltrametricSpace& u,
                           const UltrametricSpace& u2, std::size_t cap) {
  if (u.size() != u2.size()) return false;
  if (u.size() > cap)
    throw std::invalid_argument("oracle cap exceeded: " +
                                std::to_string(u.size()) + " points");
  std::vector<std::size_t> perm(u.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (check_forward(perm, u, u2).ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

bool same_branching(const UltrametricSpace& u, const UltrametricSpace& u2) {
  if (u.size() != u2.size()) return false;
  return canonical_code(dendrogram_from_ultrametric(u), false) ==
         canonical_code(dendrogram_from_ultrametric(u2), false);
}

IsometryResult exists_isometry(const UltrametricSpace& u,
                               const UltrametricSpace& u2) {
  if (u.size() != u2.size()) return {};
  RootedTree d1 = dendrogram_from_ultrametric(u);
  RootedTree d2 = dendrogram_from_ultrametric(u2);
  if (canonical_code(d1, true) != canonical_code(d2, true)) return {};

  auto order1 = canonical_leaf_order(d1);
  auto order2 = canonical_leaf_order(d2);
  std::vector<std::size_t> forward(u.size());
  for (std::size_t k = 0; k < order1.size(); ++k) {
    std::size_t i = u.index_of(d1.label(order1[k]));
    std::size_t j = u2.index_of(d2.label(order2[k]));
    forward[i] = j;
  }
  return IsometryResult{true, BijectionMap(std::move(forward), u2.size())};
}

}  // namespace dendro
