#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "multigerm/errors.hpp"

namespace multigerm {

// Exact arbitrary-precision rational, always kept in lowest terms with a
// positive denominator (boost maintains both invariants).
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline bool is_zero(const Rational& r) { return r.is_zero(); }

inline Rational rational_from(long long num, long long den = 1) {
  if (den == 0) throw ParseError("rational with zero denominator");
  return Rational(num, den);
}

// Accepts "n", "-n", "n/d" with optional sign on the numerator.
inline Rational parse_rational(std::string_view s) {
  if (s.empty()) throw ParseError("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash == std::string_view::npos) {
      return Rational(Integer(std::string(s)));
    }
    Integer num{std::string(s.substr(0, slash))};
    Integer den{std::string(s.substr(slash + 1))};
    if (den == 0) throw ParseError("rational with zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw ParseError("bad rational literal: '" + std::string(s) + "'");
  }
}

inline std::string to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += '/';
    s += denominator(r).str();
  }
  return s;
}

}  // namespace multigerm
