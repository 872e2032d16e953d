// Copyright 2026 The tkq Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

/// @file numeric.hpp
/// Exact arithmetic used throughout tkq: arbitrary precision rationals for
/// model data and QUBO coefficients, a 128-bit integer type for the hot
/// loops, and conversions between them and text.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#include "tkq/errors.hpp"

namespace tkq {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Wide = __int128;

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integral(const Rational& r) { return denominator(r) == 1; }

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;  // truncates toward zero
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline BigInt floor(const Rational& r) { return floor_div(numerator(r), denominator(r)); }
inline BigInt ceil(const Rational& r) { return -floor_div(-numerator(r), denominator(r)); }

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "p" for integers, "p/q" otherwise. Round-trips through parse_rational.
inline std::string to_string(const Rational& r) {
  if (is_integral(r)) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Accepts "p", "p/q", and decimal notation with optional exponent
/// ("10.7", "-1e3", "2.5E-2"). Decimal input is converted exactly.
namespace detail {
// Boost reads a leading 0 as an octal prefix; digits here are always decimal.
inline BigInt decimal_bigint(std::string_view digits) {
  bool negative = !digits.empty() && digits[0] == '-';
  if (negative) digits.remove_prefix(1);
  while (digits.size() > 1 && digits[0] == '0') digits.remove_prefix(1);
  BigInt v{std::string(digits)};
  return negative ? BigInt(-v) : v;
}
}  // namespace detail

inline Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw InputError("not a rational number: '" + std::string(text) + "'");
  };
  if (text.empty()) return fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    auto digits_ok = [](std::string_view s, bool allow_sign) {
      if (!s.empty() && allow_sign && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    if (!digits_ok(num, true) || !digits_ok(den, false)) return fail();
    BigInt n = detail::decimal_bigint(num[0] == '+' ? num.substr(1) : num);
    BigInt d = detail::decimal_bigint(den);
    if (d == 0) return fail();
    return Rational(n, d);
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '-' || text[pos] == '+') negative = text[pos++] == '-';
  std::string mantissa;
  long long scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      mantissa.push_back(c);
      seen_digit = true;
      if (seen_point) --scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) return fail();
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') return fail();
    ++pos;
    long long exponent = 0;
    auto rest = text.substr(pos);
    if (!rest.empty() && rest[0] == '+') rest.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) return fail();
    if (exponent > 4000 || exponent < -4000) return fail();
    scale += exponent;
  }
  BigInt value = detail::decimal_bigint(mantissa);
  if (negative) value = -value;
  BigInt ten_pow = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
  return scale >= 0 ? Rational(value * ten_pow) : Rational(value, ten_pow);
}

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double value) {
  char buffer[400];
  const double mag = std::abs(value);
  const bool fixed = mag == 0 || (mag >= 1e-6 && mag < 1e15);
  auto [ptr, ec] = fixed ? std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::fixed)
                         : std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("format_double");
  return std::string(buffer, ptr);
}

/// The rational the shortest decimal representation of `value` denotes,
/// so 10.7 becomes 107/10 rather than the nearest binary fraction.
inline Rational rational_from_double(double value) { return parse_rational(format_double(value)); }

inline BigInt to_bigint(Wide value) {
  bool negative = value < 0;
  unsigned __int128 magnitude = negative ? -static_cast<unsigned __int128>(value) : static_cast<unsigned __int128>(value);
  BigInt result = static_cast<std::uint64_t>(magnitude >> 64);
  result <<= 64;
  result += static_cast<std::uint64_t>(magnitude);
  return negative ? BigInt(-result) : result;
}

/// Throws Overflow unless |value| < 2^bits.
inline Wide to_wide(const BigInt& value, unsigned bits = 126) {
  BigInt magnitude = value < 0 ? BigInt(-value) : value;
  if (magnitude != 0 && boost::multiprecision::msb(magnitude) >= bits)
    throw Overflow("integer does not fit the 128-bit evaluation range");
  auto low = static_cast<std::uint64_t>(magnitude & BigInt(~std::uint64_t{0}));
  auto high = static_cast<std::uint64_t>(magnitude >> 64);
  Wide result = (static_cast<Wide>(high) << 64) | static_cast<Wide>(low);
  return value < 0 ? -result : result;
}

inline double wide_to_double(Wide value) { return static_cast<double>(value); }

inline Wide wide_abs(Wide value) { return value < 0 ? -value : value; }

}  // namespace tkq
