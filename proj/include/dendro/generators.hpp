#pragma once

#include "dendro/rational.hpp"
#include "dendro/tree.hpp"
#include "dendro/ultrametric.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace dendro {

/// Deterministic source of draws: mt19937_64 seeded directly; bounded draws
/// take the 64-bit output modulo the range size. Fixed here (and documented
/// in the README) so corpora are reproducible across implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform-ish draw in [lo, hi], inclusive.
  std::uint64_t bounded(std::uint64_t lo, std::uint64_t hi) {
    return lo + next() % (hi - lo + 1);
  }

 private:
  std::mt19937_64 engine_;
};

/// Per-instance seed derivation: splitmix64(base + index).
std::uint64_t split_seed(std::uint64_t base, std::uint64_t index);

struct GeneratorSpec {
  enum class Kind {
    Example41,
    Regular,
    RandomTree,
    RandomUltrametric,
    ShapeTwin,
  };
  Kind kind = Kind::Example41;
  std::size_t n = 1;  // family index (Example41) or point count
  std::size_t arity = 2;
  std::size_t depth = 2;
  std::uint64_t seed = 1;
  std::size_t min_children = 2;
  std::size_t max_children = 2;
  std::vector<Rational> levels;  // RandomUltrametric height set
  std::vector<std::pair<Rational, Rational>> height_map;  // ShapeTwin
};

/// The two end spaces of the paired tree family: U_N on points
/// {F i, G i, H i : 0 <= i <= N} and its perturbed twin U'_N on
/// {Fp i, Gp i, Hp i : 1 <= i <= N+1}, both of cardinality 3(N+1).
/// Within an index block of U_N the heights are (F,G)=1, (F,H)=2 (1 at
/// i=0), (G,H)=1; in U'_N they are (F,G)=1, (F,H)=1+1/i, (G,H)=1; all
/// cross-index heights are 0, forced by the three-point condition.
std::pair<UltrametricSpace, UltrametricSpace> gen_example41(std::size_t n);

/// Full arity-regular simplicial tree, every leaf at the given depth
/// (truncation-tagged).
RootedTree gen_regular(std::size_t arity, std::size_t depth);

/// Random simplicial truncation: every internal vertex draws its child count
/// from [min_children, max_children]; all leaves at the given depth.
RootedTree gen_random_tree(std::uint64_t seed, std::size_t depth,
                           std::size_t min_children, std::size_t max_children);

/// Random ultrametric over n points with heights drawn from the given
/// ascending level list: recursive random partition, cross-part pairs at the
/// current level.
UltrametricSpace gen_random_ultrametric(std::uint64_t seed, std::size_t n,
                                        const std::vector<Rational>& levels);

/// Same dendrogram shape, heights remapped by a strictly increasing map that
/// must cover every realized height and keep them non-negative.
UltrametricSpace gen_shape_twin(
    const UltrametricSpace& space,
    const std::vector<std::pair<Rational, Rational>>& height_map);

/// Dispatches on spec.kind; tree kinds return the end space via tree output
/// in the CLI, so this is only used for the space kinds.
UltrametricSpace generate_space(const GeneratorSpec& spec,
                                const UltrametricSpace* twin_input = nullptr);

}  // namespace dendro
