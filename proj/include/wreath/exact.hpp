#pragma once

// Exact integers and rationals shared by every module.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <string>

namespace wreath {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::rational<Integer>;

/// Lowest-terms "p/q"; integers render as "p/1".
inline std::string to_string(const Rational& q) {
  return q.numerator().str() + "/" + q.denominator().str();
}

inline Integer gcd(Integer a, Integer b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Integer t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

/// Generator d of the subgroup d*Z generated by two rationals.
inline Rational rational_gcd(const Rational& a, const Rational& b) {
  // compare numerators: rational<cpp_int> == int recurses in some boost
  // releases
  if (a.numerator() == 0) return b.numerator() < 0 ? -b : b;
  if (b.numerator() == 0) return a.numerator() < 0 ? -a : a;
  const Integer den =
      a.denominator() / gcd(a.denominator(), b.denominator()) * b.denominator();
  const Integer na = a.numerator() * (den / a.denominator());
  const Integer nb = b.numerator() * (den / b.denominator());
  return Rational(gcd(na, nb), den);
}

}  // namespace wreath
