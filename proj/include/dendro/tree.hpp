#pragma once

#include "dendro/rational.hpp"
#include "dendro/ultrametric.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace dendro {

/// Finite rooted tree with exact positive edge lengths.
///
/// Vertices keep their declaration order (the root is always index 0); leaf
/// order in end_space() follows that order, which makes round-trips through
/// dendrogram_from_ultrametric exact. Immutable after construction.
///
/// A tree may carry a truncation tag: the assertion that it is the depth-N
/// cut of a geodesically complete tree, finitely witnessed by every leaf
/// sitting at depth exactly N. Operations that reason about "all rays
/// continue" (the descendant-count lower bound) require the tag.
class RootedTree {
 public:
  struct VertexSpec {
    std::string label;
    std::string parent;
    Rational edge_length;
  };

  RootedTree(std::string root_label, std::vector<VertexSpec> vertices,
             std::optional<Rational> truncation_depth = std::nullopt);

  std::size_t size() const { return labels_.size(); }
  std::size_t root() const { return 0; }
  const std::string& label(std::size_t v) const { return labels_[v]; }
  /// -1 for the root.
  int parent(std::size_t v) const { return parents_[v]; }
  /// Length of the edge to the parent; meaningless for the root.
  const Rational& edge_length(std::size_t v) const { return lengths_[v]; }
  const std::vector<std::size_t>& children(std::size_t v) const {
    return children_[v];
  }
  bool is_leaf(std::size_t v) const { return children_[v].empty(); }
  /// Sum of edge lengths on the root arc, ||v||.
  const Rational& depth(std::size_t v) const { return depths_[v]; }
  /// Edge count on the root arc.
  std::size_t hops(std::size_t v) const { return hops_[v]; }
  /// True iff every edge has length 1.
  bool simplicial() const { return simplicial_; }
  const std::optional<Rational>& truncation_depth() const {
    return truncation_;
  }

  std::vector<std::size_t> leaves() const;
  std::optional<std::size_t> find(std::string_view label) const;
  std::size_t index_of(std::string_view label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<int> parents_;
  std::vector<Rational> lengths_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<Rational> depths_;
  std::vector<std::size_t> hops_;
  bool simplicial_ = true;
  std::optional<Rational> truncation_;
};

/// Deepest common ancestor of two vertices.
std::size_t meet(const RootedTree& tree, std::size_t x, std::size_t y);

/// Depth of the meet of two distinct leaves. Throws when the arguments
/// coincide (the product of an end with itself is unbounded) or are not
/// leaves.
Rational gromov_product(const RootedTree& tree, std::size_t leaf_a,
                        std::size_t leaf_b);

/// The ultrametric space of ends: points are the leaves (in vertex order),
/// heights the pairwise Gromov products.
UltrametricSpace end_space(const RootedTree& tree);

/// Canonical merge-cluster tree of a validated space: internal vertices are
/// the clusters {y : h(x,y) >= t}, leaves all at depth max-height + 1 (tagged
/// as a truncation at that depth). end_space() of the result reproduces the
/// input heights exactly, with leaves in input point order.
RootedTree dendrogram_from_ultrametric(const UltrametricSpace& space);

/// Graph degree: children count, plus one for the parent edge on non-roots.
std::size_t ord(const RootedTree& tree, std::size_t v);

/// Vertices exactly k edges below x (k = 0 gives {x}). Requires a simplicial
/// tree: k is a hop count.
std::vector<std::size_t> descendants_k(const RootedTree& tree, std::size_t x,
                                       std::size_t k);

/// Subtree (T_x, x) as its own rooted tree; vertex order inherited. An
/// existing truncation tag is carried over with the depth shifted.
RootedTree subtree(const RootedTree& tree, std::size_t x);

/// Same underlying tree re-rooted at w; parent pointers flip along the old
/// root arc, every edge keeps its length. The truncation tag is recomputed
/// from the new leaf depths (and usually disappears).
RootedTree rebase(const RootedTree& tree, std::size_t w);

/// Bottom-up canonical encoding. Equal weighted codes <=> the trees are
/// rooted-isometric; equal unweighted codes <=> the combinatorial shapes
/// (lengths erased, degree-2 chains contracted, including an unary root
/// chain) are isomorphic. Weighted codes keep the root even when unary:
/// the root is the base point of rooted isometry.
std::string canonical_code(const RootedTree& tree, bool weighted);

/// Leaves in canonical DFS order (children visited by ascending
/// (edge length, weighted code) key). Two trees with equal weighted codes
/// are matched leaf-for-leaf by aligning these sequences.
std::vector<std::size_t> canonical_leaf_order(const RootedTree& tree);

/// Minimum graph degree over internal vertices (the category gate asks for
/// >= 3: a root with three children, two children plus the parent edge
/// elsewhere). Zero for a single-vertex tree.
std::size_t min_internal_degree(const RootedTree& tree);

struct LemmaBound {
  Rational bound;          // lower bound on the optimal distortion exponent
  bool no_qualifying_k;    // true when no vertex produced a positive bound
};

/// Descendant-count lower bound for the optimal distortion exponent between
/// the end spaces of two simplicial truncations, symmetrized over both
/// directions. For an internal vertex x with ord(x) = m+1, the contribution
/// is the least k >= 1 such that every depth-k descendant count in the other
/// tree (over vertices whose depth-k ball fits inside the truncation) stays
/// below m; vertices with no such k contribute 0. The implied metric bound
/// is rho >= ln(1 + 2*bound).
LemmaBound lemma_lower_bound(const RootedTree& a, const RootedTree& b);

}  // namespace dendro
