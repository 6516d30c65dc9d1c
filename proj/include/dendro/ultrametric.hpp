#pragma once

#include "dendro/rational.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dendro {

/// A finite ultrametric space kept in the height (Gromov product) domain.
/// The distance between two points is e^(-h); all comparisons happen on the
/// exact heights, never on floating-point distances. The diagonal carries a
/// SELF marker (stored as an empty optional) instead of a numeric sentinel.
///
/// Construction only checks shape and label uniqueness; the metric invariants
/// (symmetry, non-negativity, three-point condition) are checked by
/// validate(), which reports the first offending entry or triple.
class UltrametricSpace {
 public:
  using Entry = std::optional<Rational>;

  UltrametricSpace(std::vector<std::string> points,
                   std::vector<std::vector<Entry>> heights);

  std::size_t size() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& label(std::size_t i) const { return points_[i]; }

  std::optional<std::size_t> find(std::string_view label) const;
  /// Throws std::invalid_argument for unknown labels.
  std::size_t index_of(std::string_view label) const;

  /// Height between two distinct points. Throws if the entry is missing
  /// (only possible on a space that fails validate()).
  const Rational& height(std::size_t i, std::size_t j) const;

  const Entry& entry(std::size_t i, std::size_t j) const {
    return heights_[i * points_.size() + j];
  }

 private:
  std::vector<std::string> points_;
  std::vector<Entry> heights_;  // row-major, diagonal = SELF
  std::unordered_map<std::string, std::size_t> index_;
};

struct ValidationIssue {
  enum class Kind {
    MissingEntry,    // off-diagonal SELF marker
    SelfEntry,       // diagonal carries a number
    Asymmetric,      // h(x,y) != h(y,x)
    Negative,        // h(x,y) < 0
    ThreePoint,      // min of a triple attained only once
  };
  Kind kind;
  // Indices involved: matrix issues use [i, j, j]; three-point uses [i, j, k].
  std::array<std::size_t, 3> where;
  std::string message;
};

struct Validation {
  bool ok = true;
  std::optional<ValidationIssue> issue;
};

/// Checks symmetry, non-negativity, completeness and the three-point
/// condition (the minimum of every height triple is attained at least twice).
/// Malformed-matrix findings are reported before, and distinctly from,
/// three-point violations; ties break to the lexicographically first
/// index pair/triple.
Validation validate(const UltrametricSpace& space);

/// {y != x : h(x,y) = level}, ascending indices. The sphere of radius
/// e^(-level) about x.
std::vector<std::size_t> sphere(const UltrametricSpace& space,
                                std::size_t center, const Rational& level);
std::vector<std::size_t> sphere(const UltrametricSpace& space,
                                std::string_view center,
                                const Rational& level);

/// Distinct heights realized at x, ascending. Spheres over this sequence
/// partition the other points.
std::vector<Rational> level_spectrum(const UltrametricSpace& space,
                                     std::size_t center);
std::vector<Rational> level_spectrum(const UltrametricSpace& space,
                                     std::string_view center);

/// Minimum over points of the minimum gap between consecutive spectrum
/// levels; empty when every spectrum has at most one entry (no pair of
/// spheres shares a center). The supremal admissible separation constant
/// of the space is delta = e^gap.
std::optional<Rational> pseudo_discreteness_gap(const UltrametricSpace& space);

/// Induced subspace on the given labels, in the given order.
/// Throws on empty subsets, unknown or duplicate labels.
UltrametricSpace restrict_to(const UltrametricSpace& space,
                             const std::vector<std::string>& subset);

/// Builds a space from a dense symmetric matrix (diagonal ignored).
UltrametricSpace space_from_dense(std::vector<std::string> points,
                                  const std::vector<std::vector<Rational>>& h);

}  // namespace dendro
