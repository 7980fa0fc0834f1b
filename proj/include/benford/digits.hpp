#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "int128.hpp"

namespace benford {

/// A leading-digit pattern S of `length` base-b digits, leading digit nonzero.
class DigitString {
 public:
  DigitString(unsigned base, std::uint64_t value, unsigned length) : base_(base), value_(value), length_(length) {
    if (base < 2 || base > 36) throw InvalidParams("base must be in 2..36");
    if (length < 1) throw InvalidParams("digit string must be non-empty");
    u128 lo = 1;
    for (unsigned i = 1; i < length; ++i) {
      lo *= base;
      if (lo > std::uint64_t{1} << 62) throw InvalidParams("digit string too long");
    }
    if (value < lo || value >= lo * base) {
      throw InvalidParams("value " + std::to_string(value) + " is not a " + std::to_string(length) +
                          "-digit string in base " + std::to_string(base));
    }
    block_ = lo * base;
    if (block_ > u128{1} << 63) throw InvalidParams("digit string too long");
  }

  /// The shortest string whose value is v.
  static DigitString from_value(unsigned base, std::uint64_t value) {
    if (value == 0) throw InvalidParams("digit string value must be positive");
    unsigned len = 0;
    for (std::uint64_t v = value; v != 0; v /= base) ++len;
    return DigitString(base, value, len);
  }

  /// Digits 0-9 then a-z (case-insensitive).
  static DigitString parse(unsigned base, std::string_view digits) {
    if (digits.empty()) throw InvalidParams("empty digit string");
    std::uint64_t v = 0;
    for (char ch : digits) {
      unsigned d;
      if (ch >= '0' && ch <= '9') d = static_cast<unsigned>(ch - '0');
      else if (ch >= 'a' && ch <= 'z') d = static_cast<unsigned>(ch - 'a' + 10);
      else if (ch >= 'A' && ch <= 'Z') d = static_cast<unsigned>(ch - 'A' + 10);
      else throw InvalidParams("bad digit '" + std::string(1, ch) + "'");
      if (d >= base) throw InvalidParams("digit '" + std::string(1, ch) + "' out of range for base " + std::to_string(base));
      if (v > (std::uint64_t{1} << 62) / base) throw InvalidParams("digit string too long");
      v = v * base + d;
    }
    return DigitString(base, v, static_cast<unsigned>(digits.size()));
  }

  unsigned base() const noexcept { return base_; }
  std::uint64_t value() const noexcept { return value_; }
  unsigned length() const noexcept { return length_; }
  /// b^length.
  u128 block() const noexcept { return block_; }

  std::string digits() const {
    std::string s;
    for (std::uint64_t v = value_; v != 0; v /= base_) s.insert(s.begin(), "0123456789abcdefghijklmnopqrstuvwxyz"[v % base_]);
    return s;
  }

  friend bool operator==(const DigitString& a, const DigitString& b) {
    return a.base_ == b.base_ && a.value_ == b.value_ && a.length_ == b.length_;
  }

 private:
  unsigned base_;
  std::uint64_t value_;
  unsigned length_;
  u128 block_ = 0;
};

/// True iff S b^j <= mag < (S+1) b^j for some j >= 0.  Zero is never a member.
inline bool is_member(u128 mag, const DigitString& ds) {
  if (mag < ds.value()) return false;
  const unsigned b = ds.base();
  while (mag >> 64 != 0) mag /= b;
  auto m = static_cast<std::uint64_t>(mag);
  const u128 block = ds.block();
  while (m >= block) m /= b;
  return m == ds.value();
}

inline bool is_member(i128 v, const DigitString& ds) { return is_member(uabs(v), ds); }

/// log_b(1 + 1/S).
inline long double benford_expectation(const DigitString& ds) {
  return std::log1p(1.0L / static_cast<long double>(ds.value())) / std::log(static_cast<long double>(ds.base()));
}

/// Every digit string of the given length in the given base.
inline std::vector<DigitString> all_digit_strings(unsigned base, unsigned length) {
  std::uint64_t lo = 1;
  for (unsigned i = 1; i < length; ++i) lo *= base;
  std::vector<DigitString> out;
  for (std::uint64_t s = lo; s < lo * base; ++s) out.emplace_back(base, s, length);
  return out;
}

}  // namespace benford
