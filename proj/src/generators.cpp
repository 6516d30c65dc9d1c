#include "dendro/generators.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace dendro {

std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 of (base + index).
  std::uint64_t z = base + index + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::pair<UltrametricSpace, UltrametricSpace> gen_example41(std::size_t n) {
  if (n < 1) throw std::invalid_argument("the family starts at N = 1");

  auto block_labels = [](const std::string& f, const std::string& g,
                         const std::string& h, std::size_t lo, std::size_t hi) {
    std::vector<std::string> labels;
    for (std::size_t i = lo; i <= hi; ++i) {
      labels.push_back(f + std::to_string(i));
      labels.push_back(g + std::to_string(i));
      labels.push_back(h + std::to_string(i));
    }
    return labels;
  };

  // Blocks are laid out (F i, G i, H i) in index order; cross-block heights
  // stay at the forced value 0.
  auto build = [](std::vector<std::string> labels, std::size_t lo,
                  auto fh_height) {
    const std::size_t count = labels.size();
    std::vector<std::vector<Rational>> h(count,
                                         std::vector<Rational>(count, Rational(0)));
    for (std::size_t b = 0; b * 3 < count; ++b) {
      std::size_t f = b * 3, g = f + 1, hh = f + 2;
      h[f][g] = h[g][f] = 1;
      h[g][hh] = h[hh][g] = 1;
      h[f][hh] = h[hh][f] = fh_height(lo + b);
    }
    return space_from_dense(std::move(labels), h);
  };

  UltrametricSpace u = build(block_labels("F", "G", "H", 0, n), 0,
                             [](std::size_t i) {
                               return i == 0 ? Rational(1) : Rational(2);
                             });
  UltrametricSpace u2 = build(block_labels("Fp", "Gp", "Hp", 1, n + 1), 1,
                              [](std::size_t i) {
                                return Rational(1) + Rational(1, i);
                              });
  return {std::move(u), std::move(u2)};
}

namespace {

void grow(std::vector<RootedTree::VertexSpec>& specs, std::size_t& counter,
          const std::string& parent, std::size_t remaining_depth,
          const std::function<std::size_t()>& child_count) {
  if (remaining_depth == 0) return;
  std::size_t k = child_count();
  for (std::size_t c = 0; c < k; ++c) {
    std::string label = "v" + std::to_string(++counter);
    specs.push_back(RootedTree::VertexSpec{label, parent, Rational(1)});
    grow(specs, counter, label, remaining_depth - 1, child_count);
  }
}

}  // namespace

RootedTree gen_regular(std::size_t arity, std::size_t depth) {
  if (arity < 2) throw std::invalid_argument("regular trees need arity >= 2");
  if (depth < 1) throw std::invalid_argument("regular trees need depth >= 1");
  std::vector<RootedTree::VertexSpec> specs;
  std::size_t counter = 0;
  grow(specs, counter, "v0", depth, [arity] { return arity; });
  return RootedTree("v0", std::move(specs), Rational(BigInt(depth)));
}

RootedTree gen_random_tree(std::uint64_t seed, std::size_t depth,
                           std::size_t min_children, std::size_t max_children) {
  if (min_children < 2 || max_children < min_children)
    throw std::invalid_argument("need 2 <= min_children <= max_children");
  if (depth < 1) throw std::invalid_argument("need depth >= 1");
  Rng rng(seed);
  std::vector<RootedTree::VertexSpec> specs;
  std::size_t counter = 0;
  grow(specs, counter, "v0", depth, [&] {
    return static_cast<std::size_t>(rng.bounded(min_children, max_children));
  });
  return RootedTree("v0", std::move(specs), Rational(BigInt(depth)));
}

namespace {

void random_partition(Rng& rng, const std::vector<std::size_t>& points,
                      std::size_t level_index,
                      const std::vector<Rational>& levels,
                      std::vector<std::vector<Rational>>& h) {
  if (points.size() <= 1) return;
  const Rational& level = levels[level_index];
  const bool last = level_index + 1 == levels.size();

  // Shuffle, then cut into parts (all singletons at the last level).
  std::vector<std::size_t> order = points;
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.bounded(0, i - 1)]);

  std::size_t parts =
      last ? order.size()
           : static_cast<std::size_t>(
                 rng.bounded(2, std::min<std::uint64_t>(order.size(), 4)));
  std::vector<std::size_t> cuts;  // part boundaries, ascending
  if (parts < order.size()) {
    std::vector<std::size_t> positions(order.size() - 1);
    for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i + 1;
    for (std::size_t i = positions.size(); i > 1; --i)
      std::swap(positions[i - 1], positions[rng.bounded(0, i - 1)]);
    cuts.assign(positions.begin(), positions.begin() + (parts - 1));
    std::sort(cuts.begin(), cuts.end());
  } else {
    for (std::size_t i = 1; i < order.size(); ++i) cuts.push_back(i);
  }
  cuts.push_back(order.size());

  std::vector<std::vector<std::size_t>> groups;
  std::size_t start = 0;
  for (auto cut : cuts) {
    groups.emplace_back(order.begin() + start, order.begin() + cut);
    start = cut;
  }
  for (std::size_t a = 0; a < groups.size(); ++a)
    for (std::size_t b = a + 1; b < groups.size(); ++b)
      for (auto x : groups[a])
        for (auto y : groups[b]) h[x][y] = h[y][x] = level;
  for (auto& group : groups)
    random_partition(rng, group, level_index + 1, levels, h);
}

}  // namespace

UltrametricSpace gen_random_ultrametric(std::uint64_t seed, std::size_t n,
                                        const std::vector<Rational>& levels) {
  if (n < 1) throw std::invalid_argument("need at least one point");
  if (levels.empty()) throw std::invalid_argument("need at least one level");
  if (!std::is_sorted(levels.begin(), levels.end()) ||
      std::adjacent_find(levels.begin(), levels.end()) != levels.end())
    throw std::invalid_argument("levels must be strictly ascending");
  if (levels.front() < 0)
    throw std::invalid_argument("levels must be non-negative");

  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  std::vector<std::vector<Rational>> h(n, std::vector<Rational>(n, Rational(0)));
  Rng rng(seed);
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  random_partition(rng, all, 0, levels, h);
  return space_from_dense(std::move(labels), h);
}

UltrametricSpace gen_shape_twin(
    const UltrametricSpace& space,
    const std::vector<std::pair<Rational, Rational>>& height_map) {
  std::map<Rational, Rational> map;
  for (const auto& [from, to] : height_map) {
    if (!map.emplace(from, to).second)
      throw std::invalid_argument("height map lists " + format_rational(from) +
                                  " twice");
  }
  // Strictly increasing on its domain, non-negative values.
  const Rational* prev = nullptr;
  for (const auto& [from, to] : map) {
    if (to < 0)
      throw std::invalid_argument("height map must stay non-negative");
    if (prev && !(*prev < to))
      throw std::invalid_argument("height map is not strictly increasing");
    prev = &map.at(from);
  }

  const std::size_t n = space.size();
  std::vector<std::vector<Rational>> h(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto it = map.find(space.height(i, j));
      if (it == map.end())
        throw std::invalid_argument(
            "height map misses realized level " +
            format_rational(space.height(i, j)));
      h[i][j] = h[j][i] = it->second;
    }
  return space_from_dense(space.points(), h);
}

UltrametricSpace generate_space(const GeneratorSpec& spec,
                                const UltrametricSpace* twin_input) {
  switch (spec.kind) {
    case GeneratorSpec::Kind::Example41:
      return gen_example41(spec.n).first;
    case GeneratorSpec::Kind::RandomUltrametric:
      return gen_random_ultrametric(spec.seed, spec.n, spec.levels);
    case GeneratorSpec::Kind::ShapeTwin:
      if (!twin_input)
        throw std::invalid_argument("shape twin needs an input space");
      return gen_shape_twin(*twin_input, spec.height_map);
    case GeneratorSpec::Kind::Regular:
      return end_space(gen_regular(spec.arity, spec.depth));
    case GeneratorSpec::Kind::RandomTree:
      return end_space(
          gen_random_tree(spec.seed, spec.depth, spec.min_children,
                          spec.max_children));
  }
  throw std::logic_error("unreachable");
}

}  // namespace dendro
