#include "dendro/ultrametric.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace dendro {

UltrametricSpace::UltrametricSpace(std::vector<std::string> points,
                                   std::vector<std::vector<Entry>> heights)
    : points_(std::move(points)) {
  const std::size_t n = points_.size();
  if (n == 0) throw std::invalid_argument("ultrametric space needs at least one point");
  if (heights.size() != n)
    throw std::invalid_argument("height matrix row count does not match point count");
  for (const auto& row : heights) {
    if (row.size() != n)
      throw std::invalid_argument("height matrix is not square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(points_[i], i).second)
      throw std::invalid_argument("duplicate point label: " + points_[i]);
  }
  heights_.reserve(n * n);
  for (auto& row : heights)
    for (auto& e : row) heights_.push_back(std::move(e));
}

std::optional<std::size_t> UltrametricSpace::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t UltrametricSpace::index_of(std::string_view label) const {
  auto i = find(label);
  if (!i) throw std::invalid_argument("unknown point label: " + std::string(label));
  return *i;
}

const Rational& UltrametricSpace::height(std::size_t i, std::size_t j) const {
  const Entry& e = entry(i, j);
  if (!e)
    throw std::invalid_argument("height requested for a SELF/missing entry (" +
                                points_[i] + ", " + points_[j] + ")");
  return *e;
}

namespace {

Validation fail(ValidationIssue::Kind kind, std::array<std::size_t, 3> where,
                std::string message) {
  Validation v;
  v.ok = false;
  v.issue = ValidationIssue{kind, where, std::move(message)};
  return v;
}

}  // namespace

Validation validate(const UltrametricSpace& space) {
  const std::size_t n = space.size();
  // Matrix shape problems first, in index order.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& e = space.entry(i, j);
      if (i == j) {
        if (e)
          return fail(ValidationIssue::Kind::SelfEntry, {i, j, j},
                      "diagonal entry for " + space.label(i) + " must be SELF");
        continue;
      }
      if (!e)
        return fail(ValidationIssue::Kind::MissingEntry, {i, j, j},
                    "missing height between " + space.label(i) + " and " +
                        space.label(j));
      if (*e < 0)
        return fail(ValidationIssue::Kind::Negative, {i, j, j},
                    "negative height between " + space.label(i) + " and " +
                        space.label(j));
      if (j > i && space.entry(j, i) && *space.entry(j, i) != *e)
        return fail(ValidationIssue::Kind::Asymmetric, {i, j, j},
                    "asymmetric heights between " + space.label(i) + " and " +
                        space.label(j));
    }
  }
  // Three-point condition: the minimum of every triple is attained twice.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Rational& a = space.height(i, j);
      for (std::size_t k = j + 1; k < n; ++k) {
        const Rational& b = space.height(i, k);
        const Rational& c = space.height(j, k);
        const Rational& m = std::min({a, b, c});
        int hits = (a == m) + (b == m) + (c == m);
        if (hits < 2)
          return fail(ValidationIssue::Kind::ThreePoint, {i, j, k},
                      "three-point condition fails on {" + space.label(i) +
                          ", " + space.label(j) + ", " + space.label(k) + "}");
      }
    }
  }
  return {};
}

std::vector<std::size_t> sphere(const UltrametricSpace& space,
                                std::size_t center, const Rational& level) {
  if (center >= space.size())
    throw std::invalid_argument("point index out of range");
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < space.size(); ++j) {
    if (j == center) continue;
    if (space.height(center, j) == level) out.push_back(j);
  }
  return out;
}

std::vector<std::size_t> sphere(const UltrametricSpace& space,
                                std::string_view center, const Rational& level) {
  return sphere(space, space.index_of(center), level);
}

std::vector<Rational> level_spectrum(const UltrametricSpace& space,
                                     std::size_t center) {
  if (center >= space.size())
    throw std::invalid_argument("point index out of range");
  std::set<Rational> levels;
  for (std::size_t j = 0; j < space.size(); ++j) {
    if (j == center) continue;
    levels.insert(space.height(center, j));
  }
  return {levels.begin(), levels.end()};
}

std::vector<Rational> level_spectrum(const UltrametricSpace& space,
                                     std::string_view center) {
  return level_spectrum(space, space.index_of(center));
}

std::optional<Rational> pseudo_discreteness_gap(const UltrametricSpace& space) {
  std::optional<Rational> gap;
  for (std::size_t i = 0; i < space.size(); ++i) {
    auto spectrum = level_spectrum(space, i);
    for (std::size_t k = 1; k < spectrum.size(); ++k) {
      Rational d = spectrum[k] - spectrum[k - 1];
      if (!gap || d < *gap) gap = std::move(d);
    }
  }
  return gap;
}

UltrametricSpace restrict_to(const UltrametricSpace& space,
                             const std::vector<std::string>& subset) {
  if (subset.empty()) throw std::invalid_argument("restriction to an empty subset");
  std::vector<std::size_t> idx;
  idx.reserve(subset.size());
  std::set<std::size_t> seen;
  for (const auto& label : subset) {
    std::size_t i = space.index_of(label);
    if (!seen.insert(i).second)
      throw std::invalid_argument("duplicate label in subset: " + label);
    idx.push_back(i);
  }
  std::vector<std::vector<UltrametricSpace::Entry>> h(
      idx.size(), std::vector<UltrametricSpace::Entry>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b)
      if (a != b) h[a][b] = space.entry(idx[a], idx[b]);
  return UltrametricSpace(subset, std::move(h));
}

UltrametricSpace space_from_dense(std::vector<std::string> points,
                                  const std::vector<std::vector<Rational>>& h) {
  const std::size_t n = points.size();
  std::vector<std::vector<UltrametricSpace::Entry>> e(
      n, std::vector<UltrametricSpace::Entry>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) e[i][j] = h[i][j];
  return UltrametricSpace(std::move(points), std::move(e));
}

}  // namespace dendro
