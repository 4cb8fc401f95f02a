#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace qid {

/// Exact rational used for every coefficient in the symbolic core.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& r) { return r.str(); }

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational number: '" + s + "'");
  }
}

inline Rational rational_pow(const Rational& base, int exponent) {
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("zero raised to a negative power");
    return rational_pow(1 / base, -exponent);
  }
  Rational out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational factorial(int n) {
  Rational out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

}  // namespace qid
