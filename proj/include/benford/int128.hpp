#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace benford {

using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr i128 kI128Max = static_cast<i128>(~u128{0} >> 1);
inline constexpr i128 kI128Min = -kI128Max - 1;

/// |v| as an unsigned value; well defined for kI128Min.
constexpr u128 uabs(i128 v) noexcept {
  return v < 0 ? u128{0} - static_cast<u128>(v) : static_cast<u128>(v);
}

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

inline std::string to_string(i128 v) {
  return v < 0 ? "-" + to_string(uabs(v)) : to_string(static_cast<u128>(v));
}

inline i128 parse_i128(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw InvalidParams("empty integer literal");
  u128 v = 0;
  const u128 limit = neg ? uabs(kI128Min) : static_cast<u128>(kI128Max);
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw InvalidParams("bad integer literal");
    const u128 digit = static_cast<u128>(ch - '0');
    if (v > (limit - digit) / 10) throw InvalidParams("integer literal out of range");
    v = v * 10 + digit;
  }
  return neg ? static_cast<i128>(u128{0} - v) : static_cast<i128>(v);
}

/// Converts through the top 64 significant bits plus a binary exponent, so
/// the result is v truncated to a 64-bit mantissa.
inline long double to_long_double(u128 mag) {
  if (mag == 0) return 0.0L;
  int shift = 0;
  const auto hi = static_cast<std::uint64_t>(mag >> 64);
  if (hi != 0) {
    shift = 64 - __builtin_clzll(hi);
    mag >>= shift;
  }
  return std::ldexp(static_cast<long double>(static_cast<std::uint64_t>(mag)), shift);
}

inline long double to_long_double(i128 v) {
  const long double r = to_long_double(uabs(v));
  return v < 0 ? -r : r;
}

/// Floor of log2|v|, or -1 for zero.
inline int bit_width_minus_one(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  if (hi != 0) return 127 - __builtin_clzll(hi);
  const auto lo = static_cast<std::uint64_t>(v);
  return lo == 0 ? -1 : 63 - __builtin_clzll(lo);
}

}  // namespace benford
