#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <benford/newforms.hpp>
#include <benford/satotate.hpp>

using namespace benford;

namespace {

/// mu_ST([a, b]) by numerical quadrature of (2/pi) sqrt(1 - t^2).
double quad_measure(double a, double b) {
  if (b <= a) return 0;
  static boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate([](double t) { return 2 / std::numbers::pi * std::sqrt(std::max(0.0, 1 - t * t)); },
                              a, b);
}

/// Measure of the interval family computed from the endpoint formula alone,
/// summed over every j down to negligible size.
double family_oracle(unsigned d, std::uint64_t s, unsigned b, unsigned c) {
  const double bc = std::pow(static_cast<double>(b), c);
  double total = 0;
  for (int j = -64; j < 200; ++j) {
    const double scale = std::pow(static_cast<double>(b), -j);
    const double lo = s * scale / (d * bc - 2);
    const double hi = std::min(1.0, (s + 1) * scale / (d * bc - 1));
    if (lo > 1) continue;
    if (hi < 1e-300) break;
    total += quad_measure(lo, hi);
  }
  return total;
}

/// c -> infinity limit: intervals [S b^-i / d, (S+1) b^-i / d] intersected with [0, 1].
double limit_oracle(unsigned d, std::uint64_t s, unsigned b) {
  double total = 0;
  for (int i = -64; i < 200; ++i) {
    const double scale = std::pow(static_cast<double>(b), -i);
    const double lo = s * scale / d;
    const double hi = std::min(1.0, (s + 1) * scale / d);
    if (lo >= 1) continue;
    total += quad_measure(lo, hi);
  }
  return total;
}

const CoefficientTable& delta_1e5() {
  static const CoefficientTable t = compute_coefficients(find_preset("delta")->spec, 100000);
  return t;
}

}  // namespace

TEST(StMeasure, Examples) {
  EXPECT_NEAR(static_cast<double>(st_measure(Interval(-1, 1))), 1.0, 1e-18);
  EXPECT_NEAR(static_cast<double>(st_measure(Interval(0, 1))), 0.5, 1e-18);
  EXPECT_NEAR(static_cast<double>(st_measure(Interval(0.5L, 1))), 0.195501109477885, 1e-12);
  EXPECT_EQ(st_measure(Interval(0.3L, 0.3L)), 0);
  EXPECT_NEAR(static_cast<double>(st_cdf(-1)), 0.0, 1e-18);
  EXPECT_NEAR(static_cast<double>(st_cdf(1)), 1.0, 1e-18);
}

TEST(StMeasure, AgreesWithQuadrature) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    ASSERT_NEAR(static_cast<double>(st_measure(Interval(a, b))), quad_measure(a, b), 1e-12) << a << " " << b;
  }
}

TEST(StMeasure, AdditiveAndSymmetric) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<long double> u(-1, 1);
  for (int i = 0; i < 500; ++i) {
    long double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const long double m = (a + b) / 2;
    EXPECT_NEAR(static_cast<double>(st_measure(Interval(a, m)) + st_measure(Interval(m, b))),
                static_cast<double>(st_measure(Interval(a, b))), 1e-17);
    EXPECT_NEAR(static_cast<double>(st_measure(Interval(-b, -a))), static_cast<double>(st_measure(Interval(a, b))),
                1e-17);
  }
}

TEST(StMeasure, QuantileInvertsCdf) {
  for (long double q : {0.0L, 0.1L, 0.25L, 0.5L, 0.9L, 1.0L}) {
    EXPECT_NEAR(static_cast<double>(st_cdf(st_quantile(q))), static_cast<double>(q), 1e-15);
  }
}

TEST(Interval, RejectsBadEndpoints) {
  EXPECT_THROW(Interval(0.5L, 0.4L), InvalidParams);
  EXPECT_THROW(Interval(-1.5L, 0), InvalidParams);
  EXPECT_THROW(Interval(0, 1.01L), InvalidParams);
}

TEST(IntervalFamily, FirstComponentsBase10) {
  const IntervalUnion f1 = build_interval_family(1, DigitString(10, 1, 1), 3, 1e-15L);
  ASSERT_GE(f1.parts.size(), 2u);
  // Descending from the top: [1000/998, ...] is outside, so the largest part
  // is [100/998, 200/999].
  const Interval& top = f1.parts.back();
  EXPECT_NEAR(static_cast<double>(top.lo), 100.0 / 998.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(top.hi), 200.0 / 999.0, 1e-15);
  const Interval& next = f1.parts[f1.parts.size() - 2];
  EXPECT_NEAR(static_cast<double>(next.lo), 10.0 / 998.0, 1e-16);
  EXPECT_NEAR(static_cast<double>(next.hi), 20.0 / 999.0, 1e-16);

  const IntervalUnion f2 = build_interval_family(2, DigitString(10, 1, 1), 3, 1e-15L);
  EXPECT_NEAR(static_cast<double>(f2.parts.back().lo), 1000.0 / 1998.0, 1e-15);
  EXPECT_EQ(f2.parts.back().hi, 1.0L);
}

TEST(IntervalFamily, TailBound) {
  for (long double tol : {1e-6L, 1e-10L, 1e-15L}) {
    const IntervalUnion f = build_interval_family(1, DigitString(3, 1, 1), 5, tol);
    EXPECT_LT(f.omitted_mass, tol);
    EXPECT_NEAR(static_cast<double>(f.measure()), family_oracle(1, 1, 3, 5), static_cast<double>(tol) + 1e-12);
  }
}

TEST(IntervalFamily, MatchesQuadratureOracle) {
  for (unsigned b = 3; b <= 16; ++b) {
    for (unsigned c : {3u, 5u, 8u}) {
      for (unsigned d : {1u, 2u}) {
        const IntervalUnion f = build_interval_family(d, DigitString(b, 1, 1), c, 1e-16L);
        EXPECT_NEAR(static_cast<double>(f.measure()), family_oracle(d, 1, b, c), 1e-11) << b << " " << c << " " << d;
      }
    }
  }
  const IntervalUnion f = build_interval_family(3, DigitString(2, 2, 2), 6, 1e-16L);
  EXPECT_NEAR(static_cast<double>(f.measure()), family_oracle(3, 2, 2, 6), 1e-11);
}

TEST(IntervalFamily, RejectsInvalidParameters) {
  EXPECT_THROW(build_interval_family(1, DigitString(2, 1, 1), 5, 1e-12L), InvalidParams);
  EXPECT_THROW(build_interval_family(1, DigitString(10, 1, 1), 2, 1e-12L), InvalidParams);
  EXPECT_THROW(build_interval_family(4, DigitString(10, 1, 1), 5, 1e-12L), InvalidParams);
  EXPECT_THROW(build_interval_family(1, DigitString(10, 1, 1), 5, 0), InvalidParams);
}

TEST(Gap, Base3Limit) {
  // 2 mu([1/2, 1]) - 2 sum_i mu([3^-i, 2 * 3^-i]) in the limit.
  const double want = 2 * limit_oracle(2, 1, 3) - 2 * limit_oracle(1, 1, 3);
  const GapResult g = digit_window_gap(3, 14, 1e-15L);
  EXPECT_NEAR(static_cast<double>(g.gap), want, 1e-5);
  EXPECT_LE(g.error_bound, 4e-15L);
}

TEST(Gap, ExceedsOneFortiethForLargeC) {
  for (unsigned b = 3; b <= 16; ++b) {
    const GapResult g = digit_window_gap(b, 10, 1e-15L);
    EXPECT_GT(g.gap - g.error_bound, 1.0L / 40) << "b = " << b;
    // The finite-c family differs from its limit by O(b^-c).
    EXPECT_NEAR(static_cast<double>(g.gap), 2 * limit_oracle(2, 1, b) - 2 * limit_oracle(1, 1, b),
                4 * std::pow(static_cast<double>(b), -10.0))
        << b;
  }
}

TEST(Gap, Base2IsPositive) {
  const GapResult g = digit_window_gap(2, 10, 1e-15L);
  EXPECT_GT(g.gap - g.error_bound, 0);
  EXPECT_NEAR(static_cast<double>(g.gap), 2 * limit_oracle(3, 2, 2) - 2 * limit_oracle(1, 2, 2), 1e-3);
}

TEST(Gap, ConvergesMonotonicallyInC) {
  for (unsigned b : {3u, 10u}) {
    const long double limit = 2 * limit_oracle(2, 1, b) - 2 * limit_oracle(1, 1, b);
    long double prev_err = 1;
    for (unsigned c = 6; c <= 14; ++c) {
      const long double err = std::fabs(digit_window_gap(b, c, 1e-16L).gap - limit);
      EXPECT_LE(err, prev_err + 1e-12L) << "b = " << b << " c = " << c;
      prev_err = err;
    }
  }
}

TEST(CosTheta, DeltaAtTwo) {
  EXPECT_NEAR(cos_theta(-24, 2, 12), -0.265165042944955, 1e-14);
  EXPECT_EQ(cos_theta(0, 2, 12), 0.0);
}

TEST(CosTheta, AgreesWithFiftyDigitArithmetic) {
  using F = boost::multiprecision::cpp_bin_float_50;
  const PrimeSet ps = sieve(100000);
  const ThetaView v = theta_view(delta_1e5(), ps);
  ASSERT_EQ(v.primes().size(), ps.size());
  for (std::size_t i = 0; i < v.primes().size(); i += 7) {
    const std::uint64_t p = v.primes()[i];
    const i128 lam = delta_1e5()(p);
    F num(to_string(lam));
    const F want = num / (2 * boost::multiprecision::pow(F(p), F(11) / 2));
    ASSERT_NEAR(v.cosines()[i], static_cast<double>(want), 1e-14) << p;
  }
}

TEST(CosTheta, ClampsRoundingOvershootOnly) {
  using boost::multiprecision::cpp_int;
  const std::uint64_t p = 100003;
  const cpp_int bound = 4 * boost::multiprecision::pow(cpp_int(p), 11);
  const cpp_int root = boost::multiprecision::sqrt(bound);
  const i128 lam = parse_i128(cpp_int(root + 1).str());  // exceeds the bound by one unit
  EXPECT_EQ(cos_theta(lam, p, 12), 1.0);
  EXPECT_EQ(cos_theta(-lam, p, 12), -1.0);
  const i128 big = parse_i128(cpp_int(root + root / (cpp_int(1) << 30)).str());
  EXPECT_THROW(cos_theta(big, p, 12), DeligneViolation);
}

TEST(ThetaView, ReportsSmallestViolatingPrime) {
  // Evaluated in parallel, but the error names the smallest bad prime.
  std::vector<i128> values = delta_1e5().values();
  values.resize(100);
  values[6] = 100000;   // p = 7
  values[96] = 1 << 30;  // p = 97
  const CoefficientTable t("bad", 12, 1, values);
  try {
    theta_view(t, sieve(100), 2);
    FAIL() << "expected DeligneViolation";
  } catch (const DeligneViolation& e) {
    EXPECT_EQ(e.prime, 7u);
  }
}

TEST(ThetaView, ThreadCountDoesNotChangeResult) {
  const PrimeSet ps = sieve(100000);
  EXPECT_EQ(theta_view(delta_1e5(), ps, 1).cosines(), theta_view(delta_1e5(), ps, 4).cosines());
}

TEST(Equidistribution, WholeIntervalIsExact) {
  const ThetaView v = theta_view(delta_1e5(), sieve(100000));
  const Comparison c = equidistribution_check(v, 100000, Interval(-1, 1));
  EXPECT_EQ(c.empirical, 1.0L);
  EXPECT_NEAR(static_cast<double>(c.expected), 1.0, 1e-18);
  const Comparison k = reciprocal_check(v, 100000, Interval(-1, 1));
  EXPECT_NEAR(static_cast<double>(k.empirical / k.expected), 1.0, 1e-15);
}

TEST(Equidistribution, CellsAndCdf) {
  const ThetaView v = theta_view(delta_1e5(), sieve(100000));
  const auto cells = equal_measure_cells(v, 100000, 20);
  ASSERT_EQ(cells.size(), 20u);
  long double total = 0;
  for (const Cell& c : cells) {
    total += c.empirical;
    EXPECT_NEAR(static_cast<double>(st_measure(Interval(c.lo, c.hi))), 0.05, 1e-12);
    EXPECT_NEAR(static_cast<double>(c.empirical), 0.05, 0.02);
  }
  EXPECT_NEAR(static_cast<double>(total), 1.0, 1e-15);
  const auto rows = cdf_rows(v, 100000, 100);
  ASSERT_EQ(rows.size(), 101u);
  EXPECT_EQ(rows.back().empirical_cdf, 1.0L);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i].empirical_cdf, rows[i - 1].empirical_cdf);
  EXPECT_LT(ks_statistic(v, 100000, 100), 0.02L);
}

TEST(Sandwich, UnreachableStringHasZeroMiddle) {
  const ThetaView v = theta_view(delta_1e5(), sieve(100000));
  const DigitString never = DigitString::parse(10, "999999999999999999");
  const SandwichReport r = reciprocal_sandwich(delta_1e5(), v, never, 1'000'000'000'000'000'001ull, 100000);
  EXPECT_EQ(r.middle, 0.0L);
  EXPECT_LE(r.lower_natural, r.upper_natural);
}

TEST(Sandwich, EnvelopesOrdered) {
  const ThetaView v = theta_view(delta_1e5(), sieve(100000));
  const SandwichReport r = reciprocal_sandwich(delta_1e5(), v, DigitString(10, 1, 1), 100, 100000);
  EXPECT_LE(r.lower_natural, r.lower_base_b);
  EXPECT_LE(r.lower_base_b, r.upper_base_b);
  EXPECT_LE(r.upper_base_b, r.upper_natural);
  EXPECT_GT(r.middle, 0);
  EXPECT_THROW(reciprocal_sandwich(delta_1e5(), v, DigitString(10, 1, 1), 40, 100000), InvalidParams);
  EXPECT_THROW(reciprocal_sandwich(delta_1e5(), v, DigitString(10, 1, 1), 100, 200000), InvalidParams);
}
