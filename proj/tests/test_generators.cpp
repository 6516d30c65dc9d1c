#include "dendro/generators.hpp"

#include "dendro/distortion.hpp"
#include "dendro/equivalence.hpp"
#include "dendro/tree.hpp"

#include <doctest.h>

#include <set>

using namespace dendro;

TEST_CASE("paired family heights match the construction lists") {
  auto [u, u2] = gen_example41(2);
  REQUIRE(u.size() == 9);
  REQUIRE(u2.size() == 9);
  CHECK(validate(u).ok);
  CHECK(validate(u2).ok);

  auto h = [&](const UltrametricSpace& s, const char* a, const char* b) {
    return s.height(s.index_of(a), s.index_of(b));
  };
  // Stated relations plus the completions the three-point condition forces.
  CHECK(h(u, "F0", "G0") == 1);
  CHECK(h(u, "F0", "H0") == 1);
  CHECK(h(u, "G0", "H0") == 1);
  CHECK(h(u, "F1", "G1") == 1);
  CHECK(h(u, "F1", "H1") == 2);
  CHECK(h(u, "G1", "H1") == 1);
  CHECK(h(u, "F2", "H2") == 2);
  CHECK(h(u, "F0", "F1") == 0);
  CHECK(h(u, "G0", "H2") == 0);
  CHECK(h(u2, "Fp1", "Gp1") == 1);
  CHECK(h(u2, "Fp1", "Hp1") == 2);
  CHECK(h(u2, "Fp2", "Hp2") == Rational(3, 2));
  CHECK(h(u2, "Fp3", "Hp3") == Rational(4, 3));
  CHECK(h(u2, "Gp2", "Hp2") == 1);
  CHECK(h(u2, "Fp1", "Gp3") == 0);

  SUBCASE("branching differs at every index") {
    for (std::size_t n = 1; n <= 3; ++n) {
      auto [a, b] = gen_example41(n);
      CHECK(a.size() == 3 * (n + 1));
      CHECK(a.size() == b.size());
      CHECK(!same_branching(a, b));
    }
  }
  CHECK_THROWS_AS(gen_example41(0), std::invalid_argument);
}

TEST_CASE("regular trees") {
  CHECK(gen_regular(2, 2).leaves().size() == 4);
  CHECK(gen_regular(3, 2).leaves().size() == 9);
  CHECK(validate(end_space(gen_regular(2, 3))).ok);
  CHECK(*gen_regular(2, 3).truncation_depth() == 3);
  CHECK(gen_regular(2, 3).simplicial());
  CHECK_THROWS_AS(gen_regular(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(gen_regular(2, 0), std::invalid_argument);
}

TEST_CASE("random trees are deterministic and well-formed") {
  auto a = gen_random_tree(42, 3, 2, 3);
  auto b = gen_random_tree(42, 3, 2, 3);
  CHECK(canonical_code(a, true) == canonical_code(b, true));
  CHECK(a.label(3) == b.label(3));

  bool saw_difference = false;
  for (std::uint64_t seed = 0; seed < 10 && !saw_difference; ++seed)
    saw_difference = canonical_code(gen_random_tree(seed, 3, 2, 3), true) !=
                     canonical_code(a, true);
  CHECK(saw_difference);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto t = gen_random_tree(split_seed(5, seed), 3, 2, 3);
    CHECK(validate(end_space(t)).ok);
    CHECK(*t.truncation_depth() == 3);
    for (std::size_t v = 0; v < t.size(); ++v)
      if (!t.is_leaf(v)) CHECK(t.children(v).size() >= 2);
  }
  CHECK_THROWS_AS(gen_random_tree(1, 3, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(gen_random_tree(1, 3, 3, 2), std::invalid_argument);
}

TEST_CASE("random ultrametrics") {
  std::vector<Rational> levels{Rational(0), Rational(1), Rational(2)};
  auto a = gen_random_ultrametric(7, 9, levels);
  auto b = gen_random_ultrametric(7, 9, levels);
  CHECK(validate(a).ok);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      CHECK(a.height(i, j) == b.height(i, j));
      CHECK(std::count(levels.begin(), levels.end(), a.height(i, j)) == 1);
    }
  CHECK_THROWS_AS(gen_random_ultrametric(1, 0, levels), std::invalid_argument);
  CHECK_THROWS_AS(gen_random_ultrametric(1, 3, {}), std::invalid_argument);
  CHECK_THROWS_AS(
      gen_random_ultrametric(1, 3, {Rational(1), Rational(0)}),
      std::invalid_argument);
}

TEST_CASE("shape twins") {
  auto base = gen_random_ultrametric(11, 6,
                                     {Rational(0), Rational(1), Rational(2)});
  SUBCASE("identity map reproduces the space") {
    std::vector<std::pair<Rational, Rational>> ident;
    for (const auto& l : {Rational(0), Rational(1), Rational(2)})
      ident.emplace_back(l, l);
    auto t = gen_shape_twin(base, ident);
    for (std::size_t i = 0; i < base.size(); ++i)
      for (std::size_t j = i + 1; j < base.size(); ++j)
        CHECK(t.height(i, j) == base.height(i, j));
  }
  SUBCASE("two-point remap: exponent zero without isometry") {
    auto two = space_from_dense(
        {"x", "y"}, {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}});
    auto twin = gen_shape_twin(two, {{Rational(1), Rational(3, 2)}});
    auto k = exact_kappa(two, twin);
    REQUIRE(k.status == KappaStatus::Solved);
    CHECK(*k.kappa == 0);
    CHECK(!exists_isometry(two, twin).isometric);
  }
  SUBCASE("branching preserved under the identity labeling") {
    std::vector<std::pair<Rational, Rational>> map{
        {Rational(0), Rational(0)},
        {Rational(1), Rational(4, 3)},
        {Rational(2), Rational(7, 2)}};
    auto t = gen_shape_twin(base, map);
    CHECK(preserves_branching(BijectionMap::index_identity(base.size()), base,
                              t)
              .ok);
    CHECK(same_branching(base, t));
  }
  SUBCASE("rejects bad maps") {
    CHECK_THROWS_AS(gen_shape_twin(base, {{Rational(0), Rational(0)}}),
                    std::invalid_argument);  // misses levels 1 and 2
    CHECK_THROWS_AS(
        gen_shape_twin(base, {{Rational(0), Rational(2)},
                              {Rational(1), Rational(1)},
                              {Rational(2), Rational(3)}}),
        std::invalid_argument);  // not increasing
    CHECK_THROWS_AS(
        gen_shape_twin(base, {{Rational(0), Rational(-1)},
                              {Rational(1), Rational(1)},
                              {Rational(2), Rational(3)}}),
        std::invalid_argument);  // negative
  }
}

TEST_CASE("seed splitting separates instances") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 100; ++i) seen.insert(split_seed(123, i));
  CHECK(seen.size() == 100);
  CHECK(split_seed(123, 7) == split_seed(123, 7));
}
