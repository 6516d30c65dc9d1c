#include "dendro/io.hpp"

#include "dendro/generators.hpp"

#include <doctest.h>

using namespace dendro;

TEST_CASE("space JSON round trip is byte-exact on canonical files") {
  auto u = gen_example41(1).second;
  std::string canonical = io::serialize_space(u);
  auto parsed = io::parse_space(canonical);
  CHECK(io::serialize_space(parsed) == canonical);
  CHECK(parsed.points() == u.points());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j)
      if (i != j) CHECK(parsed.height(i, j) == u.height(i, j));
}

TEST_CASE("space JSON rejections") {
  CHECK_THROWS_AS(io::parse_space("{"), io::ParseError);
  CHECK_THROWS_AS(io::parse_space("{\"points\": [\"a\"]}"), io::ParseError);
  CHECK_THROWS_AS(
      io::parse_space(
          "{\"points\": [\"a\",\"b\"], \"heights\": [[null,1],[1,null]]}"),
      io::ParseError);  // numbers must be strings
  CHECK_THROWS_AS(
      io::parse_space("{\"points\": [\"a\",\"b\"], \"heights\": "
                      "[[null,\"1e3\"],[\"1e3\",null]]}"),
      io::ParseError);
  CHECK_THROWS_AS(
      io::parse_space("{\"points\": [\"a\",\"b\"], \"heights\": "
                      "[[null,\"1\"],[\"1\",null]], \"extra\": 1}"),
      io::ParseError);
  CHECK_THROWS_AS(
      io::parse_space("{\"points\": [\"a\",\"a\"], \"heights\": "
                      "[[null,\"1\"],[\"1\",null]]}"),
      io::ParseError);
}

TEST_CASE("tree JSON round trip with truncation tag") {
  auto t = gen_random_tree(5, 3, 2, 3);
  std::string canonical = io::serialize_tree_json(t);
  auto parsed = io::parse_tree_json(canonical);
  CHECK(io::serialize_tree_json(parsed) == canonical);
  CHECK(parsed.truncation_depth() == t.truncation_depth());
  CHECK(canonical_code(parsed, true) == canonical_code(t, true));
}

TEST_CASE("tree JSON rejects a tag the leaf depths contradict") {
  CHECK_THROWS_AS(io::parse_tree_json(
                      "{\"root\":\"r\",\"vertices\":["
                      "{\"label\":\"a\",\"parent\":\"r\",\"length\":\"1\"},"
                      "{\"label\":\"b\",\"parent\":\"r\",\"length\":\"2\"}],"
                      "\"truncation_depth\":\"1\"}"),
                  io::ParseError);
}

TEST_CASE("newick subset") {
  SUBCASE("parse and canonical round trip") {
    auto t = io::parse_newick("((A:1,B:2/3)i:1,C:1.5)r;\n");
    CHECK(t.size() == 5);
    CHECK(t.label(t.root()) == "r");
    CHECK(t.edge_length(t.index_of("B")) == Rational(2, 3));
    CHECK(t.edge_length(t.index_of("C")) == Rational(3, 2));
    std::string canonical = io::serialize_newick(t);
    CHECK(io::serialize_newick(io::parse_newick(canonical)) == canonical);
  }
  SUBCASE("unnamed vertices get fresh labels") {
    auto t = io::parse_newick("((A:1,B:1):1,(C:1,D:1):1);");
    CHECK(t.size() == 7);
    CHECK(t.label(t.root()) == "_1");
    CHECK(t.find("_2"));
    CHECK(t.find("_3"));
  }
  SUBCASE("rejections carry positions") {
    CHECK_THROWS_AS(io::parse_newick("(A:1,B:1e-3)r;"), io::ParseError);
    CHECK_THROWS_AS(io::parse_newick("(A:1,B[comment]:1)r;"), io::ParseError);
    CHECK_THROWS_AS(io::parse_newick("(A:1,'B':1)r;"), io::ParseError);
    CHECK_THROWS_AS(io::parse_newick("(A:1,B)r;"), io::ParseError);
    CHECK_THROWS_AS(io::parse_newick("(A:1,B:1)r:2;"), io::ParseError);
    CHECK_THROWS_AS(io::parse_newick("(A:1,B:1)r; junk"), io::ParseError);
    CHECK_THROWS_AS(io::parse_newick("(A:1,B:-1)r;"), io::ParseError);
    CHECK_THROWS_AS(io::parse_newick("(A:1,B:0)r;"), io::ParseError);
    CHECK_THROWS_AS(io::parse_newick("(A:1,A:1)r;"), io::ParseError);
    try {
      io::parse_newick("(A:1,B:1e-3)r;");
    } catch (const io::ParseError& e) {
      CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
  }
  SUBCASE("exact decimals are accepted exactly") {
    auto t = io::parse_newick("(A:0.25,B:0.25)r;");
    CHECK(t.edge_length(t.index_of("A")) == Rational(1, 4));
  }
}

TEST_CASE("auto detection") {
  auto u = gen_example41(1).first;
  auto space_text = io::serialize_space(u);
  CHECK(std::holds_alternative<UltrametricSpace>(io::parse_any(space_text)));
  auto t = gen_regular(2, 2);
  CHECK(std::holds_alternative<RootedTree>(
      io::parse_any(io::serialize_tree_json(t))));
  CHECK(std::holds_alternative<RootedTree>(
      io::parse_any(io::serialize_newick(t))));
  // A tree input flattens to its end space.
  auto via_tree = io::as_space(io::serialize_newick(t));
  CHECK(via_tree.size() == 4);
  CHECK_THROWS_AS(io::parse_any("{\"neither\": 1}"), io::ParseError);
}

TEST_CASE("fnv1a64 known vectors") {
  CHECK(io::fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(io::fnv1a64_hex("a") == "af63dc4c8601ec8c");
  CHECK(io::fnv1a64_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("result payload rendering") {
  auto a = gen_example41(1).first;
  auto b = gen_example41(1).second;
  SUBCASE("bijection maps follow the domain point order") {
    auto f = BijectionMap::index_identity(a.size());
    auto j = io::bijection_to_json(f, a, a);
    std::size_t i = 0;
    for (const auto& [key, value] : j.items()) {
      CHECK(key == a.label(i));
      CHECK(value.get<std::string>() == a.label(i));
      ++i;
    }
  }
  SUBCASE("infinite verdict") {
    auto small = restrict_to(a, {"F0", "G0"});
    auto k = exact_kappa(small, b);
    auto j = io::kappa_result_to_json(k, small, b);
    CHECK(j["status"] == "infinite");
    CHECK(j["rho"] == "INFINITE");
  }
  SUBCASE("solved verdict carries exact strings and display decimals") {
    auto k = exact_kappa(a, b);
    auto j = io::kappa_result_to_json(k, a, b);
    CHECK(j["kappa"] == "1/2");
    CHECK(j["rho_exact_form"] == "NON-INTEGER");
    CHECK(j["rho_display"] == "0.69314718056");
  }
}

TEST_CASE("distortion reports serialize with exact strings") {
  auto [a, b] = gen_example41(1);
  std::vector<std::pair<std::string, std::string>> pairs = {
      {"F0", "Fp1"}, {"G0", "Gp1"}, {"H0", "Hp1"},
      {"F1", "Fp2"}, {"G1", "Gp2"}, {"H1", "Hp2"}};
  auto f = BijectionMap::from_label_pairs(a, b, pairs);
  auto j = io::distortion_report_to_json(max_distortion_exponent(f, a, b), a);
  CHECK(j["max_exponent"] == "1");
  REQUIRE(j.contains("worst"));
  CHECK(j["worst"]["level"] == "1");
  CHECK(j["spheres"].is_array());
  for (const auto& e : j["spheres"]) {
    CHECK(e["exponent"].is_string());  // rationals never rendered as floats
    CHECK(e["level"].is_string());
  }
}

TEST_CASE("validation payload names the violating triple") {
  auto bad = space_from_dense({"a", "b", "c"},
                              {{0, Rational(0), Rational(1)},
                               {Rational(0), 0, Rational(2)},
                               {Rational(1), Rational(2), 0}});
  auto v = validate(bad);
  auto j = io::validation_to_json(v);
  CHECK(j["ok"] == false);
  CHECK(j["issue"]["kind"] == "three-point");
}
