#include "dendro/tree.hpp"

#include "dendro/generators.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace dendro;

namespace {

// Path-intersection reference for meets: the deepest shared vertex of the
// two root arcs.
std::size_t meet_oracle(const RootedTree& t, std::size_t x, std::size_t y) {
  auto arc = [&](std::size_t v) {
    std::vector<std::size_t> path;
    for (int u = static_cast<int>(v); u >= 0; u = t.parent(u))
      path.push_back(static_cast<std::size_t>(u));
    std::reverse(path.begin(), path.end());
    return path;
  };
  auto a = arc(x), b = arc(y);
  std::size_t last = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    if (a[i] == b[i]) last = a[i];
  return last;
}

bool rooted_isometry_oracle(const RootedTree& a, const RootedTree& b) {
  auto la = a.leaves(), lb = b.leaves();
  if (la.size() != lb.size()) return false;
  std::vector<std::size_t> perm(lb.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < la.size() && ok; ++i)
      ok = a.depth(la[i]) == b.depth(lb[perm[i]]);
    for (std::size_t i = 0; i < la.size() && ok; ++i)
      for (std::size_t j = i + 1; j < la.size() && ok; ++j)
        ok = gromov_product(a, la[i], la[j]) ==
             gromov_product(b, lb[perm[i]], lb[perm[j]]);
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

RootedTree path_tree() {
  // a - b - c rooted at a.
  return RootedTree("a", {{"b", "a", Rational(1)}, {"c", "b", Rational(1)}});
}

}  // namespace

TEST_CASE("construction rejects malformed trees") {
  CHECK_THROWS_AS(RootedTree("r", {{"a", "nope", Rational(1)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(RootedTree("r", {{"a", "r", Rational(0)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(RootedTree("r", {{"r", "r", Rational(1)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(RootedTree("r", {{"a", "b", Rational(1)},
                                   {"b", "a", Rational(1)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(RootedTree("r", {{"a", "r", Rational(1)},
                                   {"b", "a", Rational(1)}},
                             Rational(1)),
                  std::invalid_argument);
}

TEST_CASE("uniform leaf depth is tagged automatically") {
  RootedTree t("r", {{"a", "r", Rational(2)}, {"b", "r", Rational(2)}});
  REQUIRE(t.truncation_depth());
  CHECK(*t.truncation_depth() == 2);
  RootedTree ragged("r", {{"a", "r", Rational(2)}, {"b", "r", Rational(1)}});
  CHECK(!ragged.truncation_depth());
}

TEST_CASE("meet") {
  auto t = dendrogram_from_ultrametric(gen_example41(1).first);
  std::size_t f1 = t.index_of("F1"), h1 = t.index_of("H1");
  CHECK(meet(t, f1, f1) == f1);
  CHECK(t.depth(meet(t, f1, h1)) == 2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto r = gen_random_tree(split_seed(7, seed), 3, 2, 3);
    for (std::size_t x = 0; x < r.size(); x += 3)
      for (std::size_t y = 0; y < r.size(); y += 2)
        CHECK(meet(r, x, y) == meet_oracle(r, x, y));
  }
}

TEST_CASE("gromov product") {
  RootedTree star("r", {{"a", "r", Rational(1)}, {"b", "r", Rational(1)}});
  CHECK(gromov_product(star, star.index_of("a"), star.index_of("b")) == 0);

  auto t = dendrogram_from_ultrametric(gen_example41(1).first);
  CHECK(gromov_product(t, t.index_of("F0"), t.index_of("G0")) == 1);
  CHECK_THROWS_AS(gromov_product(t, t.index_of("F0"), t.index_of("F0")),
                  std::invalid_argument);
  CHECK_THROWS_AS(gromov_product(t, t.root(), t.index_of("F0")),
                  std::invalid_argument);

  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto r = gen_random_tree(split_seed(11, seed), 3, 2, 3);
    auto leaves = r.leaves();
    for (std::size_t i = 0; i < leaves.size(); ++i)
      for (std::size_t j = i + 1; j < leaves.size(); ++j)
        CHECK(gromov_product(r, leaves[i], leaves[j]) ==
              r.depth(meet_oracle(r, leaves[i], leaves[j])));
  }
}

TEST_CASE("end space of the depth-2 binary tree") {
  auto u = end_space(gen_regular(2, 2));
  REQUIRE(u.size() == 4);
  REQUIRE(validate(u).ok);
  // Sibling pairs at height 1, everything else at 0.
  std::size_t ones = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (u.height(i, j) == 1)
        ++ones;
      else
        CHECK(u.height(i, j) == 0);
    }
  CHECK(ones == 2);
}

TEST_CASE("dendrogram structure for two points at height 1") {
  auto u = space_from_dense(
      {"x", "y"}, {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}});
  auto t = dendrogram_from_ultrametric(u);
  REQUIRE(t.size() == 4);  // root, split vertex, two leaves
  std::size_t x = t.index_of("x"), y = t.index_of("y");
  CHECK(t.depth(x) == 2);
  CHECK(t.depth(y) == 2);
  std::size_t split = static_cast<std::size_t>(t.parent(x));
  CHECK(split == static_cast<std::size_t>(t.parent(y)));
  CHECK(t.depth(split) == 1);
  CHECK(t.parent(split) == static_cast<int>(t.root()));
  CHECK(*t.truncation_depth() == 2);
}

TEST_CASE("dendrogram of the trifurcating block") {
  auto u = restrict_to(gen_example41(1).first, {"F0", "G0", "H0"});
  auto t = dendrogram_from_ultrametric(u);
  std::size_t split = static_cast<std::size_t>(t.parent(t.index_of("F0")));
  CHECK(t.children(split).size() == 3);
  CHECK(t.depth(split) == 1);
  CHECK(ord(t, split) == 4);
}

TEST_CASE("round trip: end space of the dendrogram reproduces the heights") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto u = gen_random_ultrametric(split_seed(23, seed), 2 + seed % 7,
                                    {Rational(0), Rational(1, 3), Rational(1),
                                     Rational(5, 2)});
    auto back = end_space(dendrogram_from_ultrametric(u));
    REQUIRE(back.points() == u.points());
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < u.size(); ++j)
        if (i != j) CHECK(back.height(i, j) == u.height(i, j));
  }
}

TEST_CASE("dendrogram rejects invalid spaces") {
  CHECK_THROWS_AS(dendrogram_from_ultrametric(space_from_dense(
                      {"a", "b", "c"},
                      {{0, Rational(0), Rational(1)},
                       {Rational(0), 0, Rational(2)},
                       {Rational(1), Rational(2), 0}})),
                  std::invalid_argument);
}

TEST_CASE("ord") {
  auto bin = gen_regular(2, 2);
  CHECK(ord(bin, bin.root()) == 2);
  for (auto leaf : bin.leaves()) CHECK(ord(bin, leaf) == 1);
  std::size_t internal = bin.children(bin.root())[0];
  CHECK(ord(bin, internal) == 3);
}

TEST_CASE("descendants_k") {
  auto bin = gen_regular(2, 3);
  CHECK(descendants_k(bin, bin.root(), 0) ==
        std::vector<std::size_t>{bin.root()});
  for (std::size_t k = 1; k <= 3; ++k)
    CHECK(descendants_k(bin, bin.root(), k).size() == (std::size_t{1} << k));
  CHECK(descendants_k(bin, bin.root(), 4).empty());

  RootedTree weighted("r", {{"a", "r", Rational(3, 2)}});
  CHECK_THROWS_AS(descendants_k(weighted, 0, 1), std::invalid_argument);

  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto r = gen_random_tree(split_seed(31, seed), 3, 2, 3);
    for (std::size_t x = 0; x < r.size(); x += 2)
      for (std::size_t k = 0; k <= 3; ++k) {
        std::vector<std::size_t> expect;
        for (std::size_t v = 0; v < r.size(); ++v)
          if (r.hops(v) == r.hops(x) + k && meet_oracle(r, x, v) == x)
            expect.push_back(v);
        CHECK(descendants_k(r, x, k) == expect);
      }
  }
}

TEST_CASE("subtree") {
  auto bin = gen_regular(2, 3);
  CHECK(canonical_code(subtree(bin, bin.root()), true) ==
        canonical_code(bin, true));
  auto leaf = bin.leaves()[3];
  auto single = subtree(bin, leaf);
  CHECK(single.size() == 1);
  CHECK(single.label(0) == bin.label(leaf));

  std::size_t x = bin.children(bin.root())[1];
  auto sub = subtree(bin, x);
  std::set<std::string> got;
  for (std::size_t v = 0; v < sub.size(); ++v) got.insert(sub.label(v));
  std::set<std::string> expect;
  for (std::size_t v = 0; v < bin.size(); ++v)
    if (meet_oracle(bin, x, v) == x) expect.insert(bin.label(v));
  CHECK(got == expect);
  CHECK(*sub.truncation_depth() == 2);
}

TEST_CASE("rebase") {
  SUBCASE("at the root is the identity") {
    auto t = gen_random_tree(99, 3, 2, 3);
    auto r = rebase(t, t.root());
    CHECK(canonical_code(r, true) == canonical_code(t, true));
    CHECK(r.truncation_depth() == t.truncation_depth());
  }
  SUBCASE("path graph pivots around its middle") {
    auto t = path_tree();
    auto r = rebase(t, t.index_of("b"));
    CHECK(r.label(r.root()) == "b");
    CHECK(r.depth(r.index_of("a")) == 1);
    CHECK(r.depth(r.index_of("c")) == 1);
  }
  SUBCASE("involutive up to the weighted code; end space stays valid") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      auto t = gen_random_tree(split_seed(41, seed), 3, 2, 3);
      std::size_t w = 1 + seed % (t.size() - 1);
      auto r = rebase(t, w);
      CHECK(validate(end_space(r)).ok);
      auto back = rebase(r, r.index_of(t.label(t.root())));
      CHECK(canonical_code(back, true) == canonical_code(t, true));
    }
  }
}

TEST_CASE("canonical codes") {
  SUBCASE("label permutation changes nothing") {
    auto a = RootedTree("r", {{"u", "r", Rational(1)},
                              {"x", "u", Rational(2)},
                              {"y", "u", Rational(1)},
                              {"z", "r", Rational(3)}});
    auto b = RootedTree("top", {{"q", "top", Rational(3)},
                                {"m", "top", Rational(1)},
                                {"k", "m", Rational(1)},
                                {"j", "m", Rational(2)}});
    CHECK(canonical_code(a, true) == canonical_code(b, true));
    CHECK(canonical_code(a, false) == canonical_code(b, false));
  }
  SUBCASE("one stretched edge splits weighted codes only") {
    auto a = RootedTree("r", {{"x", "r", Rational(1)}, {"y", "r", Rational(1)}});
    auto b = RootedTree("r", {{"x", "r", Rational(3, 2)},
                              {"y", "r", Rational(1)}});
    CHECK(canonical_code(a, true) != canonical_code(b, true));
    CHECK(canonical_code(a, false) == canonical_code(b, false));
  }
  SUBCASE("trifurcation against the binary pair") {
    auto [u, u2] = gen_example41(1);
    auto ta = dendrogram_from_ultrametric(restrict_to(u, {"F0", "G0", "H0"}));
    auto tb =
        dendrogram_from_ultrametric(restrict_to(u2, {"Fp1", "Gp1", "Hp1"}));
    CHECK(canonical_code(ta, false) != canonical_code(tb, false));
  }
  SUBCASE("unary chains are metrically invisible") {
    auto chain = RootedTree("r", {{"m", "r", Rational(1)},
                                  {"u", "m", Rational(1)},
                                  {"x", "u", Rational(1)},
                                  {"y", "u", Rational(2)}});
    auto direct = RootedTree("r", {{"u", "r", Rational(2)},
                                   {"x", "u", Rational(1)},
                                   {"y", "u", Rational(2)}});
    CHECK(canonical_code(chain, true) == canonical_code(direct, true));
  }
  SUBCASE("weighted equality decides rooted isometry (up to 8 leaves)") {
    std::vector<RootedTree> pool;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
      pool.push_back(gen_random_tree(split_seed(57, seed), 2 + seed % 2, 2, 3));
    pool.push_back(gen_regular(2, 3));
    pool.push_back(gen_regular(3, 2));
    for (std::size_t i = 0; i < pool.size(); ++i)
      for (std::size_t j = i; j < pool.size(); ++j) {
        if (pool[i].leaves().size() > 8 || pool[j].leaves().size() > 8)
          continue;
        bool codes =
            canonical_code(pool[i], true) == canonical_code(pool[j], true);
        CHECK(codes == rooted_isometry_oracle(pool[i], pool[j]));
      }
  }
}

TEST_CASE("leaf depth dominates every product on truncations") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto t = gen_random_tree(split_seed(61, seed), 3, 2, 3);
    REQUIRE(t.truncation_depth());
    auto leaves = t.leaves();
    for (std::size_t i = 0; i < leaves.size(); ++i)
      for (std::size_t j = i + 1; j < leaves.size(); ++j)
        CHECK(gromov_product(t, leaves[i], leaves[j]) <
              *t.truncation_depth());
  }
}

TEST_CASE("degree gate mirrors the end-space sphere structure") {
  // min internal degree >= 3 holds exactly when every leaf sees a non-empty
  // sphere at every integer level below the truncation and its level-0
  // sphere splits into two branches meeting at the root.
  auto end_space_gate = [](const RootedTree& t) {
    auto u = end_space(t);
    std::size_t depth = t.hops(t.leaves()[0]);
    for (std::size_t x = 0; x < u.size(); ++x) {
      for (std::size_t lvl = 0; lvl < depth; ++lvl)
        if (sphere(u, x, Rational(BigInt(lvl))).empty()) return false;
      auto zero = sphere(u, x, Rational(0));
      bool split = false;
      for (std::size_t i = 0; i < zero.size() && !split; ++i)
        for (std::size_t j = i + 1; j < zero.size() && !split; ++j)
          split = u.height(zero[i], zero[j]) == 0;
      if (!split) return false;
    }
    return true;
  };
  // Mixed corpus: random min-2 trees (roots sometimes binary), a stretched
  // star, and roots widened to three children.
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    auto t = gen_random_tree(split_seed(67, seed), 2 + seed % 2, 2, 4);
    CHECK((min_internal_degree(t) >= 3) == end_space_gate(t));
  }
  auto star = gen_regular(4, 2);
  CHECK(min_internal_degree(star) == 4);
  CHECK(end_space_gate(star));
  // A unary vertex drops the gate even under a wide root: the leaf below it
  // has an empty sphere at that level.
  RootedTree chain("r", {{"a", "r", Rational(1)},
                         {"b", "r", Rational(1)},
                         {"c", "r", Rational(1)},
                         {"a0", "a", Rational(1)},
                         {"b0", "b", Rational(1)},
                         {"b1", "b", Rational(1)},
                         {"c0", "c", Rational(1)},
                         {"c1", "c", Rational(1)}});
  CHECK(min_internal_degree(chain) == 2);
  CHECK(!end_space_gate(chain));
}

TEST_CASE("descendant-count bound") {
  SUBCASE("binary against binary degenerates to zero") {
    auto b = lemma_lower_bound(gen_regular(2, 3), gen_regular(2, 3));
    CHECK(b.bound == 0);
    CHECK(b.no_qualifying_k);
  }
  SUBCASE("trifurcation against binary yields one") {
    RootedTree tri("r", {{"a", "r", Rational(1)},
                         {"b", "r", Rational(1)},
                         {"a0", "a", Rational(1)},
                         {"a1", "a", Rational(1)},
                         {"a2", "a", Rational(1)},
                         {"b0", "b", Rational(1)},
                         {"b1", "b", Rational(1)}});
    auto b = lemma_lower_bound(tri, gen_regular(2, 2));
    CHECK(b.bound == 1);
    CHECK(!b.no_qualifying_k);
  }
  SUBCASE("inputs must be tagged simplicial trees") {
    RootedTree ragged("r", {{"a", "r", Rational(1)},
                            {"b", "r", Rational(1)},
                            {"c", "b", Rational(1)}});
    CHECK(!ragged.truncation_depth());
    CHECK_THROWS_AS(lemma_lower_bound(ragged, gen_regular(2, 2)),
                    std::invalid_argument);
    RootedTree weighted("r", {{"a", "r", Rational(2)}});
    CHECK_THROWS_AS(lemma_lower_bound(weighted, weighted),
                    std::invalid_argument);
  }
}
