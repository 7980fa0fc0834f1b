#pragma once

// The semicircle (Sato-Tate) measure on [-1, 1], the leading-digit interval
// families and their measure gap, normalized Hecke eigenvalues
// cos(theta_p) = lambda(p) / (2 p^{(k-1)/2}), and empirical checks of their
// distribution.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "digits.hpp"
#include "errors.hpp"
#include "int128.hpp"
#include "newforms.hpp"
#include "parallel.hpp"
#include "primes.hpp"

namespace benford {

struct Interval {
  long double lo;
  long double hi;

  Interval(long double a, long double b) : lo(a), hi(b) {
    if (!(a >= -1 && a <= b && b <= 1)) throw InvalidParams("interval must satisfy -1 <= a <= b <= 1");
  }

  bool contains(long double t) const noexcept { return lo <= t && t <= hi; }
};

/// Antiderivative of (2/pi) sqrt(1 - t^2): (t sqrt(1 - t^2) + asin t) / pi.
inline long double st_antiderivative(long double t) {
  t = std::clamp(t, -1.0L, 1.0L);
  return (t * std::sqrt((1 - t) * (1 + t)) + std::asin(t)) / std::numbers::pi_v<long double>;
}

/// mu_ST([-1, t]).
inline long double st_cdf(long double t) { return st_antiderivative(t) + 0.5L; }

inline long double st_measure(const Interval& i) { return st_antiderivative(i.hi) - st_antiderivative(i.lo); }

/// t with mu_ST([-1, t]) = q, by bisection.
inline long double st_quantile(long double q) {
  if (q <= 0) return -1;
  if (q >= 1) return 1;
  long double lo = -1, hi = 1;
  for (int it = 0; it < 200 && hi - lo > 0; ++it) {
    const long double mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    (st_cdf(mid) < q ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

/// Sorted, pairwise disjoint intervals, plus a bound on the measure of the
/// parts dropped when the family was truncated.
struct IntervalUnion {
  std::vector<Interval> parts;
  long double omitted_mass = 0;

  long double measure() const {
    long double m = 0;
    for (const Interval& i : parts) m += st_measure(i);
    return m;
  }

  bool contains(long double t) const {
    return std::any_of(parts.begin(), parts.end(), [t](const Interval& i) { return i.contains(t); });
  }
};

/// The union over j of [S b^{-j} / (d b^c - 2), (S+1) b^{-j} / (d b^c - 1)],
/// clipped to [0, 1].  |cos theta_p| in this set and
/// (d b^c - 2) b^n <= 2 p^{(k-1)/2} < (d b^c - 1) b^n force lambda(p) to start
/// with S.  Components are generated from the largest downwards and the
/// remainder, contained in [0, r] for the next right endpoint r, is dropped
/// once mu_ST([0, r]) < tail_tol.
inline IntervalUnion build_interval_family(unsigned d, const DigitString& ds, unsigned c, long double tail_tol) {
  const unsigned b = ds.base();
  if (b == 2 ? ds.length() < 2 : b < 3) {
    throw InvalidParams("interval families need b >= 3, or b = 2 with a string of length >= 2");
  }
  if (c < 3) throw InvalidParams("c must be >= 3");
  if (d < 1 || d > 3) throw InvalidParams("d must be 1, 2 or 3");
  if (!(tail_tol > 0)) throw InvalidParams("tail_tol must be positive");

  const long double bc = std::pow(static_cast<long double>(b), static_cast<long double>(c));
  const long double lo0 = static_cast<long double>(ds.value()) / (d * bc - 2);
  const long double hi0 = static_cast<long double>(ds.value() + 1) / (d * bc - 1);
  const long double lb = std::log(static_cast<long double>(b));
  // First j whose left endpoint S b^{-j}/(d b^c - 2) is <= 1.
  long double scale = std::pow(static_cast<long double>(b), std::floor(-std::log(lo0) / lb));
  while (lo0 * scale > 1) scale /= b;
  while (lo0 * scale * b <= 1) scale *= b;

  IntervalUnion u;
  std::vector<Interval> desc;
  for (;;) {
    const long double hi = hi0 * scale;
    if (st_measure(Interval(0, std::min(1.0L, hi))) < tail_tol) {
      u.omitted_mass = st_measure(Interval(0, std::min(1.0L, hi)));
      break;
    }
    desc.emplace_back(lo0 * scale, std::min(1.0L, hi));
    scale /= b;
  }
  u.parts.assign(desc.rbegin(), desc.rend());
  for (std::size_t i = 1; i < u.parts.size(); ++i) {
    if (u.parts[i].lo <= u.parts[i - 1].hi) throw InvalidParams("interval family overlaps; c too small");
  }
  return u;
}

struct GapResult {
  long double gap;
  /// |gap - exact gap| <= error_bound (twice the omitted masses).
  long double error_bound;
};

/// 2 mu_ST(I_{hi_d, S}(c)) - 2 mu_ST(I_{lo_d, S}(c)).
inline GapResult family_gap(const DigitString& ds, unsigned hi_d, unsigned lo_d, unsigned c, long double tail_tol) {
  const IntervalUnion a = build_interval_family(hi_d, ds, c, tail_tol);
  const IntervalUnion b = build_interval_family(lo_d, ds, c, tail_tol);
  return {2 * a.measure() - 2 * b.measure(), 2 * (a.omitted_mass + b.omitted_mass)};
}

/// Measure gap between the two window families with different limiting
/// leading-digit proportions: d = 2 vs d = 1 on S = "1" for b >= 3, and
/// d = 3 vs d = 1 on S = "10" for b = 2.
inline GapResult digit_window_gap(unsigned b, unsigned c, long double tail_tol) {
  if (b == 2) return family_gap(DigitString(2, 2, 2), 3, 1, c, tail_tol);
  return family_gap(DigitString(b, 1, 1), 2, 1, c, tail_tol);
}

/// lambda(p) / (2 p^{(k-1)/2}) without clamping.  Both the coefficient and
/// the integer p^{(k-2)/2} pass through 64-bit-mantissa extraction; only the
/// sqrt(p) factor is rounded separately.
inline long double normalized_coefficient(i128 lambda, std::uint64_t p, unsigned k) {
  if (k < 2 || k % 2 != 0) throw InvalidParams("weight must be even and >= 2");
  u128 pk = 1;
  bool fits = true;
  for (unsigned i = 0; i < (k - 2) / 2 && fits; ++i) fits = !__builtin_mul_overflow(pk, static_cast<u128>(p), &pk);
  const long double pow_part = fits ? to_long_double(pk)
                                    : std::pow(static_cast<long double>(p), static_cast<long double>((k - 2) / 2));
  return to_long_double(lambda) / (2 * pow_part * std::sqrt(static_cast<long double>(p)));
}

inline constexpr long double kDeligneSlack = 0x1p-40L;

/// cos(theta_p) in [-1, 1]; overshoot below 2^-40 from rounding is clamped.
inline double cos_theta(i128 lambda, std::uint64_t p, unsigned k) {
  const long double r = normalized_coefficient(lambda, p, k);
  if (std::fabs(r) > 1 + kDeligneSlack) throw DeligneViolation(p);
  return static_cast<double>(std::clamp(r, -1.0L, 1.0L));
}

/// cos(theta_p) for every prime of the set.
class ThetaView {
 public:
  ThetaView(std::vector<std::uint64_t> primes, std::vector<double> cosines, unsigned weight)
      : primes_(std::move(primes)), cos_(std::move(cosines)), weight_(weight) {}

  const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }
  const std::vector<double>& cosines() const noexcept { return cos_; }
  unsigned weight() const noexcept { return weight_; }
  std::uint64_t limit() const noexcept { return primes_.empty() ? 0 : primes_.back(); }
  std::size_t count_upto(std::uint64_t x) const {
    return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
  }
  double theta(std::size_t i) const { return std::acos(cos_[i]); }

 private:
  std::vector<std::uint64_t> primes_;
  std::vector<double> cos_;
  unsigned weight_;
};

inline ThetaView theta_view(const CoefficientTable& table, const PrimeSet& primes, unsigned threads = 1) {
  std::vector<std::uint64_t> ps;
  for (std::uint64_t p : primes) {
    if (p > table.limit()) break;
    ps.push_back(p);
  }
  std::vector<double> cosines(ps.size());
  std::vector<char> bad(ps.size(), 0);
  parallel_for(ps.size(), threads, [&](std::size_t i) {
    const long double r = normalized_coefficient(table(ps[i]), ps[i], table.weight());
    if (std::fabs(r) > 1 + kDeligneSlack) {
      bad[i] = 1;
      return;
    }
    cosines[i] = static_cast<double>(std::clamp(r, -1.0L, 1.0L));
  });
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (bad[i]) throw DeligneViolation(ps[i]);
  }
  return ThetaView(std::move(ps), std::move(cosines), table.weight());
}

struct Comparison {
  long double empirical;
  long double expected;
};

/// #{p <= x : cos theta_p in I} / pi(x) against mu_ST(I).
inline Comparison equidistribution_check(const ThetaView& v, std::uint64_t x, const Interval& i) {
  const std::size_t n = v.count_upto(x);
  if (n == 0) throw InvalidParams("no primes up to x");
  std::size_t hits = 0;
  for (std::size_t j = 0; j < n; ++j) hits += i.contains(v.cosines()[j]) ? 1 : 0;
  return {static_cast<long double>(hits) / static_cast<long double>(n), st_measure(i)};
}

struct CdfRow {
  long double t;
  long double empirical_cdf;
  long double st_cdf;
};

/// Empirical distribution function of cos theta_p (p <= x) on the grid
/// t_j = -1 + 2j/points, j = 0..points, against mu_ST([-1, t]).
inline std::vector<CdfRow> cdf_rows(const ThetaView& v, std::uint64_t x, unsigned points) {
  const std::size_t n = v.count_upto(x);
  if (n == 0 || points == 0) throw InvalidParams("need primes and at least one grid point");
  std::vector<double> sorted(v.cosines().begin(), v.cosines().begin() + static_cast<std::ptrdiff_t>(n));
  std::sort(sorted.begin(), sorted.end());
  std::vector<CdfRow> rows;
  for (unsigned j = 0; j <= points; ++j) {
    const long double t = -1 + 2.0L * j / points;
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), static_cast<double>(t)) - sorted.begin();
    rows.push_back({t, static_cast<long double>(below) / static_cast<long double>(n), st_cdf(t)});
  }
  return rows;
}

/// Kolmogorov-Smirnov-style discrepancy sup_t |F_emp(t) - F_ST(t)| over the grid.
inline long double ks_statistic(const ThetaView& v, std::uint64_t x, unsigned points) {
  long double worst = 0;
  for (const CdfRow& r : cdf_rows(v, x, points)) worst = std::max(worst, std::fabs(r.empirical_cdf - r.st_cdf));
  return worst;
}

struct Cell {
  long double lo;
  long double hi;
  long double empirical;
  long double expected;
};

/// Frequencies of cos theta_p (p <= x) in the partition of [-1, 1] into
/// `cells` intervals of equal Sato-Tate measure.  Cells are half-open
/// [lo, hi) except the last, which includes 1.
inline std::vector<Cell> equal_measure_cells(const ThetaView& v, std::uint64_t x, unsigned cells) {
  const std::size_t n = v.count_upto(x);
  if (n == 0 || cells == 0) throw InvalidParams("need primes and at least one cell");
  std::vector<long double> edges(cells + 1);
  for (unsigned i = 0; i <= cells; ++i) edges[i] = st_quantile(static_cast<long double>(i) / cells);
  edges.front() = -1;
  edges.back() = 1;
  std::vector<std::size_t> counts(cells, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const long double t = v.cosines()[j];
    auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, t);
    ++counts[static_cast<std::size_t>(it - (edges.begin() + 1))];
  }
  std::vector<Cell> out;
  for (unsigned i = 0; i < cells; ++i) {
    out.push_back({edges[i], edges[i + 1], static_cast<long double>(counts[i]) / static_cast<long double>(n),
                   1.0L / cells});
  }
  return out;
}

/// lhs = sum_{p <= x, cos theta_p in I} 1/p, rhs = mu_ST(I) sum_{p <= x} 1/p.
inline Comparison reciprocal_check(const ThetaView& v, std::uint64_t x, const Interval& i) {
  CompensatedSum lhs, all;
  const std::size_t n = v.count_upto(x);
  for (std::size_t j = 0; j < n; ++j) {
    const long double w = 1.0L / static_cast<long double>(v.primes()[j]);
    all.add(w);
    if (i.contains(v.cosines()[j])) lhs.add(w);
  }
  return {lhs.value(), st_measure(i) * all.value()};
}

/// The reciprocal-prime sum over members with |cos theta_p| > 1/ell, and the
/// two envelopes (log_b(1+1/S) -/+ log(1+1/ell)) log log x (+ 2 log log ell
/// on the upper side), with log(1+1/ell) taken both in base b and natural.
/// The envelopes hold only up to (1+o(1)) factors, so nothing is asserted.
struct SandwichReport {
  long double lower_base_b;
  long double lower_natural;
  long double middle;
  long double upper_base_b;
  long double upper_natural;
};

inline SandwichReport reciprocal_sandwich(const CoefficientTable& table, const ThetaView& v, const DigitString& ds,
                                       std::uint64_t ell, std::uint64_t x) {
  if (ell <= std::max<std::uint64_t>(ds.value(), 40)) throw InvalidParams("ell must exceed max(S, 40)");
  if (x > table.limit()) throw InvalidParams("x beyond the coefficient table");
  if (x < 3) throw InvalidParams("x must be >= 3 so that log log x > 0");
  CompensatedSum middle;
  const long double cutoff = 1.0L / static_cast<long double>(ell);
  const std::size_t n = v.count_upto(x);
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint64_t p = v.primes()[j];
    if (std::fabs(static_cast<long double>(v.cosines()[j])) > cutoff && is_member(table(p), ds)) {
      middle.add(1.0L / static_cast<long double>(p));
    }
  }
  const long double lb = std::log(static_cast<long double>(ds.base()));
  const long double expect = benford_expectation(ds);
  const long double eps_nat = std::log1p(cutoff);
  const long double eps_b = eps_nat / lb;
  const long double llx = std::log(std::log(static_cast<long double>(x)));
  const long double tail = 2 * std::log(std::log(static_cast<long double>(ell)));
  return {(expect - eps_b) * llx, (expect - eps_nat) * llx, middle.value(), (expect + eps_b) * llx + tail,
          (expect + eps_nat) * llx + tail};
}

}  // namespace benford
