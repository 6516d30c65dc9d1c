#include "dendro/rational.hpp"

#include <cctype>
#include <cstdio>

namespace dendro {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) return std::nullopt;

  auto slash = s.find('/');
  auto dot = s.find('.');
  Rational value;
  if (slash != std::string_view::npos) {
    if (dot != std::string_view::npos) return std::nullopt;
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    BigInt q{std::string(den)};
    if (q == 0) return std::nullopt;
    value = Rational(BigInt{std::string(num)}, q);
  } else if (dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt num = BigInt{std::string(whole)} * scale + BigInt{std::string(frac)};
    value = Rational(num, scale);
  } else {
    if (!all_digits(s)) return std::nullopt;
    value = Rational(BigInt{std::string(s)});
  }
  if (negative) value = -value;
  return value;
}

std::string format_rational(const Rational& value) {
  std::string out = numerator(value).str();
  if (denominator(value) != 1) {
    out += '/';
    out += denominator(value).str();
  }
  return out;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::string display_decimal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace dendro
