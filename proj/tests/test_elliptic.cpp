#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <benford/elliptic.hpp>

#include "oracles.hpp"

using namespace benford;

namespace {

std::uint64_t brute_count(const WeierstrassCurve& e, std::int64_t p) {
  auto m = [p](i128 v) { return static_cast<std::int64_t>(((v % p) + p) % p); };
  std::uint64_t n = 1;
  for (std::int64_t x = 0; x < p; ++x) {
    for (std::int64_t y = 0; y < p; ++y) {
      const i128 lhs = i128{y} * y + i128{e.a1} * x * y + i128{e.a3} * y;
      const i128 rhs = i128{x} * x * x + i128{e.a2} * x * x + i128{e.a4} * x + e.a6;
      if (m(lhs - rhs) == 0) ++n;
    }
  }
  return n;
}

}  // namespace

TEST(Curve11a, Discriminant) {
  EXPECT_EQ(kCurve11a.discriminant(), -161051);  // -11^5
  EXPECT_TRUE(kCurve11a.is_nonsingular());
}

TEST(Curve11a, SmallTraces) {
  // a_p of the level-11 newform for p = 2, 3, 5, 7, 13.
  EXPECT_EQ(trace_of_frobenius(kCurve11a, 2), -2);
  EXPECT_EQ(trace_of_frobenius(kCurve11a, 3), -1);
  EXPECT_EQ(trace_of_frobenius(kCurve11a, 5), 1);
  EXPECT_EQ(trace_of_frobenius(kCurve11a, 7), -2);
  EXPECT_EQ(trace_of_frobenius(kCurve11a, 13), 4);
}

TEST(Curve11a, BadPrimeRejected) {
  try {
    count_points(kCurve11a, 11);
    FAIL() << "expected BadReduction";
  } catch (const BadReduction& e) {
    EXPECT_EQ(e.prime, 11u);
  }
}

TEST(CountPoints, ShortWeierstrassExample) {
  const WeierstrassCurve e{0, 0, 0, 1, 0};  // y^2 = x^3 + x
  EXPECT_EQ(count_points(e, 5), 4u);
}

TEST(CountPoints, MatchesEnumeration) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> coef(-50, 50);
  const auto primes = oracle::primes_upto(150);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const WeierstrassCurve e{coef(rng) % 2, coef(rng), coef(rng) % 2, coef(rng), coef(rng)};
    if (!e.is_nonsingular()) continue;
    for (std::uint64_t p : primes) {
      if (e.discriminant() % static_cast<i128>(p) == 0) {
        EXPECT_THROW(count_points(e, p), BadReduction);
        continue;
      }
      const std::uint64_t n = count_points(e, p);
      EXPECT_EQ(n, brute_count(e, static_cast<std::int64_t>(p))) << "p = " << p;
      ++checked;
    }
  }
  EXPECT_GT(checked, 500);
}

TEST(CountPoints, HasseBound) {
  for (std::uint64_t p : oracle::primes_upto(20000)) {
    if (p == 11) continue;
    const double a = static_cast<double>(trace_of_frobenius(kCurve11a, p));
    EXPECT_LE(std::fabs(a), 2 * std::sqrt(static_cast<double>(p))) << p;
  }
}
