#pragma once

// Brute-force references for the unit and acceptance suites.  None of these
// share code with the library paths they check.

#include <cstdint>
#include <string>
#include <vector>

#include <benford/int128.hpp>

namespace oracle {

using benford::i128;
using benford::u128;

/// prod_{n=1..X} (1 - q^n)^r truncated at q^X, by repeated multiplication
/// by the binomial (1 - q^n).
inline std::vector<i128> eta_power(std::uint64_t truncation, unsigned r) {
  std::vector<i128> c(truncation + 1, 0);
  c[0] = 1;
  for (std::uint64_t n = 1; n <= truncation; ++n) {
    for (unsigned rep = 0; rep < r; ++rep) {
      for (std::uint64_t i = truncation; i >= n; --i) c[i] -= c[i - n];
    }
  }
  return c;
}

/// tau(1..X) from q prod (1 - q^n)^24.
inline std::vector<i128> tau(std::uint64_t limit) {
  return eta_power(limit - 1, 24);
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> primes_upto(std::uint64_t x) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n <= x; ++n) {
    if (is_prime(n)) out.push_back(n);
  }
  return out;
}

/// Base-b digits of v, most significant first.
inline std::string digits(u128 v, unsigned b) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.insert(s.begin(), "0123456789abcdefghijklmnopqrstuvwxyz"[static_cast<int>(v % b)]);
    v /= b;
  }
  return s;
}

/// #{1 <= n <= x : the base-b expansion of n starts with `prefix`}, by
/// counting each digit-length block in closed form.
inline std::uint64_t count_leading(std::uint64_t x, std::uint64_t prefix, unsigned b) {
  std::uint64_t count = 0;
  for (u128 scale = 1; prefix * scale <= x; scale *= b) {
    const u128 lo = prefix * scale;
    const u128 hi = (prefix + 1) * scale - 1;
    count += static_cast<std::uint64_t>((hi < x ? hi : x) - lo + 1);
  }
  return count;
}

}  // namespace oracle
