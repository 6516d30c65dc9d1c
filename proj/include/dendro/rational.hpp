#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace dendro {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parse "p/q", "p", or a plain decimal like "1.5" (exactly 15/10).
/// Rejects exponents, hex, inf/nan, empty strings and stray characters.
std::optional<Rational> parse_rational(std::string_view text);

/// Canonical form: "p" when the denominator is 1, else "p/q" in lowest terms.
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

/// Fixed-width decimal rendering for display fields (12 significant digits).
std::string display_decimal(double value);

}  // namespace dendro
