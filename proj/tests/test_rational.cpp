#include "dendro/rational.hpp"

#include <doctest.h>

using dendro::format_rational;
using dendro::parse_rational;
using dendro::Rational;

TEST_CASE("accepted forms") {
  CHECK(*parse_rational("3") == Rational(3));
  CHECK(*parse_rational("-3") == Rational(-3));
  CHECK(*parse_rational("3/2") == Rational(3, 2));
  CHECK(*parse_rational("-3/2") == Rational(-3, 2));
  CHECK(*parse_rational("6/4") == Rational(3, 2));
  CHECK(*parse_rational("1.5") == Rational(3, 2));
  CHECK(*parse_rational("0.125") == Rational(1, 8));
  CHECK(*parse_rational("10.00") == Rational(10));
  CHECK(*parse_rational("123456789123456789123456789") ==
        Rational(dendro::BigInt("123456789123456789123456789")));
}

TEST_CASE("rejected forms") {
  for (const char* bad : {"", "-", "1e3", "1E3", "0x10", "nan", "inf", "1/0",
                          "1//2", "1.5/2", "1.2.3", " 1", "1 ", "+-1", "a"})
    CHECK_MESSAGE(!parse_rational(bad), bad);
}

TEST_CASE("canonical format round trip") {
  for (const char* s : {"0", "1", "-7", "3/2", "-3/2", "22/7"}) {
    auto r = parse_rational(s);
    REQUIRE(r);
    CHECK(format_rational(*r) == s);
    CHECK(*parse_rational(format_rational(*r)) == *r);
  }
  CHECK(format_rational(*parse_rational("1.25")) == "5/4");
}
