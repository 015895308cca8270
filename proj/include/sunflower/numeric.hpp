#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace sunflower {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Exact value of a finite double (every double is a dyadic rational).
inline Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw std::domain_error("cannot convert non-finite value to a rational");
  int exponent = 0;
  double mantissa = std::frexp(x, &exponent);
  // 2^53 * mantissa is an integer.
  auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  Rational r{BigInt{scaled}};
  exponent -= 53;
  BigInt power = BigInt{1} << std::abs(exponent);
  if (exponent >= 0) return r * Rational{power};
  return r / Rational{power};
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const BigInt& b) { return b.convert_to<double>(); }

inline BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (int i = 0; i < k; ++i) {
    result *= (n - i);
    result /= (i + 1);
  }
  return result;
}

inline BigInt factorial(int n) {
  BigInt result = 1;
  for (int i = 2; i <= n; ++i) result *= i;
  return result;
}

inline BigInt power(const BigInt& base, int exponent) {
  BigInt result = 1;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

inline Rational power(const Rational& base, int exponent) {
  Rational result = 1;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

/// ln C(n, k); -inf when the coefficient is zero.
inline double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -kInfinity;
  long double total = 0;
  for (int i = 0; i < k; ++i) total += std::log(static_cast<long double>(n - i)) - std::log(static_cast<long double>(i + 1));
  return static_cast<double>(total);
}

/// ln of a nonnegative big integer; -inf for zero.
inline double log_big(const BigInt& x) {
  if (x <= 0) return -kInfinity;
  unsigned bits = boost::multiprecision::msb(x);
  if (bits < 1000) return std::log(x.convert_to<double>());
  unsigned shift = bits - 60;
  BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

inline std::string to_string(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

/// Parses "p", "p/q", or a plain decimal such as "0.125" or "1e-3" exactly.
inline Rational parse_rational(const std::string& text) {
  auto fail = [&]() -> Rational { throw std::invalid_argument("not a rational number: '" + text + "'"); };
  if (text.empty()) return fail();
  auto slash = text.find('/');
  auto parse_int = [&](const std::string& s) -> BigInt {
    if (s.empty()) fail();
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) fail();
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') fail();
    return BigInt{s};
  };
  if (slash != std::string::npos) {
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) return fail();
    return Rational{num, den};
  }
  std::string mantissa = text;
  long exponent = 0;
  auto e = text.find_first_of("eE");
  if (e != std::string::npos) {
    mantissa = text.substr(0, e);
    try {
      std::size_t used = 0;
      exponent = std::stol(text.substr(e + 1), &used);
      if (used != text.size() - e - 1) fail();
    } catch (const std::logic_error&) {
      fail();
    }
  }
  auto dot = mantissa.find('.');
  if (dot != std::string::npos) {
    std::string digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    exponent -= static_cast<long>(mantissa.size() - dot - 1);
    mantissa = digits;
    if (mantissa == "" || mantissa == "-" || mantissa == "+") fail();
  }
  Rational value{parse_int(mantissa)};
  Rational scale{boost::multiprecision::pow(BigInt{10}, static_cast<unsigned>(std::labs(exponent)))};
  if (exponent >= 0) return value * scale;
  return value / scale;
}

}  // namespace sunflower
