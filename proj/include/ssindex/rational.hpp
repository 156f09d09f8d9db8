#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ssindex {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline std::strong_ordering rational_cmp(const Rational& a, const Rational& b) {
  if (a < b) return std::strong_ordering::less;
  if (a == b) return std::strong_ordering::equal;
  return std::strong_ordering::greater;
}

inline Integer rational_num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer rational_den(const Rational& q) { return boost::multiprecision::denominator(q); }

/// Canonical text form: "p" when the denominator is 1, otherwise "p/q" reduced.
inline std::string rational_str(const Rational& q) {
  const Integer num = rational_num(q);
  const Integer den = rational_den(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Parses "p" or "p/q" with an optional leading sign. Throws on malformed input.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  // strip surrounding whitespace
  const auto first = s.find_first_not_of(" \t");
  const auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) throw std::invalid_argument("empty rational literal");
  s = s.substr(first, last - first + 1);

  const auto slash = s.find('/');
  auto parse_int = [](const std::string& part) -> Integer {
    if (part.empty()) throw std::invalid_argument("empty integer in rational literal");
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) throw std::invalid_argument("sign without digits in rational literal");
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9')
        throw std::invalid_argument("bad character '" + std::string(1, part[i]) + "' in rational literal");
    return Integer(part);
  };
  if (slash == std::string::npos) return Rational(parse_int(s));
  const Integer num = parse_int(s.substr(0, slash));
  const Integer den = parse_int(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in rational literal");
  return Rational(num, den);
}

/// Exact square root when the value is a perfect square of a rational.
inline std::optional<Rational> exact_sqrt(const Rational& q) {
  if (q < 0) throw std::invalid_argument("sqrt of negative rational");
  const Integer num = rational_num(q);
  const Integer den = rational_den(q);
  const Integer rn = boost::multiprecision::sqrt(num);
  const Integer rd = boost::multiprecision::sqrt(den);
  if (rn * rn == num && rd * rd == den) return Rational(rn, rd);
  return std::nullopt;
}

struct Interval {
  Rational lo;
  Rational hi;
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  Rational width() const { return hi - lo; }
};

/// Encloses sqrt(q) between rationals; `steps` bisection rounds after an
/// integer-sqrt seed. Exact squares collapse to a point interval.
inline Interval sqrt_enclosure(const Rational& q, int steps = 64) {
  if (q < 0) throw std::invalid_argument("sqrt of negative rational");
  if (q == 0) return {Rational(0), Rational(0)};
  if (auto exact = exact_sqrt(q)) return {*exact, *exact};
  // seed: floor(sqrt(num*den))/den <= sqrt(q) <= (floor+1)/den
  const Integer num = rational_num(q);
  const Integer den = rational_den(q);
  const Integer root = boost::multiprecision::sqrt(Integer(num * den));
  Rational lo(root, den);
  Rational hi(root + 1, den);
  for (int i = 0; i < steps; ++i) {
    const Rational mid = (lo + hi) / 2;
    if (mid * mid <= q)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

/// Deterministic fixed-point decimal rendering (truncated toward zero).
inline std::string decimal_str(const Rational& q, int digits = 9) {
  Integer scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const bool neg = q < 0;
  const Rational a = rational_abs(q);
  const Integer scaled = (rational_num(a) * scale) / rational_den(a);
  const Integer whole = scaled / scale;
  Integer frac = scaled % scale;
  std::string fs = frac.str();
  fs.insert(fs.begin(), static_cast<std::size_t>(digits) - fs.size(), '0');
  return (neg ? "-" : "") + whole.str() + "." + fs;
}

}  // namespace ssindex
