#pragma once

#include "dendro/bijection.hpp"
#include "dendro/rational.hpp"
#include "dendro/ultrametric.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace dendro {

/// One sphere's distortion under a bijection, in exponent form:
/// exponent = max - min of the image heights over the sphere, so the
/// multiplicative distortion is e^exponent. Empty and singleton spheres
/// have exponent 0 (distortion 1).
struct SphereDistortion {
  std::size_t center = 0;  // index in the source space
  Rational level;
  Rational exponent;
  // Pair realizing max - min (equal on undistorted spheres).
  std::size_t witness_max = 0;
  std::size_t witness_min = 0;
};

struct DistortionReport {
  std::vector<SphereDistortion> entries;  // every (center, spectrum level)
  Rational max_exponent;                  // 0 when no sphere has two points
  std::optional<SphereDistortion> worst;
};

Rational sphere_distortion_exponent(const BijectionMap& f,
                                    const UltrametricSpace& u,
                                    const UltrametricSpace& u2,
                                    std::size_t center, const Rational& level);

/// Worst forward sphere distortion over all centers and spectrum levels.
DistortionReport max_distortion_exponent(const BijectionMap& f,
                                         const UltrametricSpace& u,
                                         const UltrametricSpace& u2);

/// max of the forward and inverse worst exponents; the quantity the search
/// minimizes over bijections.
Rational pair_exponent(const BijectionMap& f, const UltrametricSpace& u,
                       const UltrametricSpace& u2);

struct SearchBudget {
  std::uint64_t max_nodes = 40'000'000;  // ~1 us/node: under a minute
  unsigned jobs = 1;
  /// Stop as soon as a bijection at or below this exponent is found
  /// (decision mode); the result degrades to a bracket.
  std::optional<Rational> stop_at;
};

enum class KappaStatus {
  Solved,    // kappa exact, certificate attains it
  Bracket,   // budget exhausted or stop_at hit: bounds only
  Infinite,  // no bijection exists (cardinality mismatch)
};

struct KappaResult {
  KappaStatus status = KappaStatus::Infinite;
  std::optional<Rational> kappa;  // set iff Solved
  Rational lower_bound;           // meaningless when Infinite
  Rational upper_bound;
  std::optional<BijectionMap> certificate;  // attains upper_bound
  std::uint64_t node_count = 0;
  bool stopped_early = false;
};

/// Minimizes pair_exponent over all bijections by branch and bound:
/// depth-first assignment with best-first child ordering, running sphere
/// spreads plus per-pair profile bounds for pruning, and orbit-representative
/// skipping over automorphic image subtrees. Deterministic for any `jobs`:
/// parallel tasks are fully independent with deterministically split node
/// budgets, and results reduce by (value, assignment) order, so reports are
/// bit-identical across worker counts.
KappaResult exact_kappa(const UltrametricSpace& u, const UltrametricSpace& u2,
                        const SearchBudget& budget = {});

/// Greedy upper bound: aligns the canonical leaf orders of the two canonical
/// dendrograms (and the label identity when the label sets coincide), returns
/// the better bijection with its exact pair exponent. Always >= the optimum;
/// equal spaces get 0.
std::pair<Rational, BijectionMap> kappa_upper_heuristic(
    const UltrametricSpace& u, const UltrametricSpace& u2);

/// rho = ln(1 + 2*kappa), display value. Infinite results map to +infinity;
/// brackets have no single rho and throw std::logic_error.
double rho(const KappaResult& result);

double rho_of_exponent(const Rational& kappa);

/// The n with rho = ln(1+2n) when kappa is a non-negative integer
/// (guaranteed for end spaces of simplicial trees), otherwise empty.
std::optional<BigInt> rho_exact_form(const Rational& kappa);

}  // namespace dendro
