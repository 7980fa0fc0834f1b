#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "int128.hpp"

namespace benford {

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q.
struct WeierstrassCurve {
  std::int64_t a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;

  i128 discriminant() const {
    const i128 b2 = i128{a1} * a1 + 4 * i128{a2};
    const i128 b4 = 2 * i128{a4} + i128{a1} * a3;
    const i128 b6 = i128{a3} * a3 + 4 * i128{a6};
    const i128 b8 = i128{a1} * a1 * a6 + 4 * i128{a2} * a6 - i128{a1} * a3 * a4 +
                    i128{a2} * a3 * a3 - i128{a4} * a4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  }

  bool is_nonsingular() const { return discriminant() != 0; }
};

/// Cremona 11a1, the minimal model of conductor 11.
inline constexpr WeierstrassCurve kCurve11a{0, -1, 1, -10, -20};

namespace detail {
inline std::int64_t mod(i128 v, std::int64_t p) {
  i128 r = v % p;
  return static_cast<std::int64_t>(r < 0 ? r + p : r);
}
}  // namespace detail

/// #E(F_p), including the point at infinity.  For odd p > 3 the equation is
/// completed to (2y + a1 x + a3)^2 = 4(x^3 + a2 x^2 + a4 x + a6) + (a1 x + a3)^2
/// and each x contributes 1 + (rhs / p); p = 2, 3 are enumerated in full.
inline std::uint64_t count_points(const WeierstrassCurve& e, std::uint64_t p) {
  if (p < 2) throw InvalidParams("count_points needs a prime");
  const i128 disc = e.discriminant();
  if (disc % static_cast<i128>(p) == 0) throw BadReduction(p);
  const auto q = static_cast<std::int64_t>(p);

  if (p <= 3) {
    std::uint64_t count = 1;
    for (std::int64_t x = 0; x < q; ++x) {
      for (std::int64_t y = 0; y < q; ++y) {
        const i128 lhs = i128{y} * y + i128{e.a1} * x * y + i128{e.a3} * y;
        const i128 rhs = i128{x} * x * x + i128{e.a2} * x * x + i128{e.a4} * x + e.a6;
        if (detail::mod(lhs - rhs, q) == 0) ++count;
      }
    }
    return count;
  }

  // solutions[r] = #{y : y^2 = r}
  std::vector<std::uint8_t> solutions(p, 0);
  for (std::int64_t y = 0; y < q; ++y) ++solutions[static_cast<std::size_t>(i128{y} * y % q)];

  const std::int64_t a1 = detail::mod(e.a1, q), a2 = detail::mod(e.a2, q), a3 = detail::mod(e.a3, q);
  const std::int64_t a4 = detail::mod(e.a4, q), a6 = detail::mod(e.a6, q);
  std::uint64_t count = 1;
  for (std::int64_t x = 0; x < q; ++x) {
    const i128 cubic = ((i128{x} + a2) * x % q + a4) * x % q + a6;
    const i128 lin = (i128{a1} * x + a3) % q;
    count += solutions[static_cast<std::size_t>(detail::mod(4 * cubic + lin * lin, q))];
  }
  return count;
}

/// a_p = p + 1 - #E(F_p).
inline std::int64_t trace_of_frobenius(const WeierstrassCurve& e, std::uint64_t p) {
  return static_cast<std::int64_t>(p + 1) - static_cast<std::int64_t>(count_points(e, p));
}

}  // namespace benford
