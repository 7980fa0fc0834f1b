#pragma once

// Running arithmetic and logarithmic density estimators for leading-digit
// sets, the natural-number baseline, and the window scans used to exhibit
// the oscillation of the arithmetic density over primes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "digits.hpp"
#include "errors.hpp"
#include "newforms.hpp"
#include "primes.hpp"

namespace benford {

enum class DensityMode { arithmetic, logarithmic };

struct Checkpoint {
  std::uint64_t x;
  long double numerator;
  long double denominator;
  double ratio;
};

struct DensitySeries {
  DensityMode mode = DensityMode::arithmetic;
  std::vector<Checkpoint> checkpoints;
  /// Indices <= the last checkpoint whose value is zero; such indices belong
  /// to no leading-digit set but still count in the denominator.
  std::uint64_t zero_values = 0;
};

/// Running density of {i in indices : member(i)} within `indices`, reported
/// at each checkpoint.  Arithmetic mode counts, logarithmic mode sums 1/i
/// with compensation.  `indices` and `checkpoints` must be ascending.
template <class Member, class IsZero>
DensitySeries running_density(std::span<const std::uint64_t> indices, Member&& member, IsZero&& is_zero,
                              std::span<const std::uint64_t> checkpoints, DensityMode mode) {
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw InvalidParams("checkpoints must be ascending");
  }
  DensitySeries out;
  out.mode = mode;
  CompensatedSum num, den;
  std::uint64_t num_count = 0, den_count = 0;
  std::size_t pos = 0;
  for (std::uint64_t x : checkpoints) {
    for (; pos < indices.size() && indices[pos] <= x; ++pos) {
      const std::uint64_t i = indices[pos];
      const bool in = member(i);
      if (is_zero(i)) ++out.zero_values;
      if (mode == DensityMode::arithmetic) {
        ++den_count;
        if (in) ++num_count;
      } else {
        const long double w = 1.0L / static_cast<long double>(i);
        den.add(w);
        if (in) num.add(w);
      }
    }
    Checkpoint c{x, 0, 0, 0};
    if (mode == DensityMode::arithmetic) {
      c.numerator = static_cast<long double>(num_count);
      c.denominator = static_cast<long double>(den_count);
    } else {
      c.numerator = num.value();
      c.denominator = den.value();
    }
    c.ratio = c.denominator > 0 ? static_cast<double>(c.numerator / c.denominator) : 0.0;
    out.checkpoints.push_back(c);
  }
  return out;
}

namespace detail {

inline DensitySeries prime_density(const CoefficientTable& table, const PrimeSet& primes, const DigitString& ds,
                            std::span<const std::uint64_t> checkpoints, DensityMode mode) {
  if (!checkpoints.empty() && (checkpoints.back() > table.limit() || checkpoints.back() > primes.limit())) {
    throw InvalidParams("checkpoint beyond the coefficient table or prime limit");
  }
  return running_density(
      std::span<const std::uint64_t>(primes.primes()), [&](std::uint64_t p) { return is_member(table(p), ds); },
      [&](std::uint64_t p) { return table(p) == 0; }, checkpoints, mode);
}

}  // namespace detail

/// numerator = #{p <= x : lambda(p) starts with S}, denominator = pi(x).
inline DensitySeries arithmetic_density_series(const CoefficientTable& table, const PrimeSet& primes,
                                               const DigitString& ds, std::span<const std::uint64_t> checkpoints) {
  return detail::prime_density(table, primes, ds, checkpoints, DensityMode::arithmetic);
}

/// numerator = sum 1/p over members, denominator = sum_{p <= x} 1/p.
inline DensitySeries logarithmic_density_series(const CoefficientTable& table, const PrimeSet& primes,
                                                const DigitString& ds, std::span<const std::uint64_t> checkpoints) {
  return detail::prime_density(table, primes, ds, checkpoints, DensityMode::logarithmic);
}

/// ceil(ratio^j) for j >= 0, merged with `extra`, deduplicated, restricted
/// to [lo, limit] and always ending at limit.
inline std::vector<std::uint64_t> multiplicative_grid(std::uint64_t limit, long double ratio = 1.02L,
                                                      std::span<const std::uint64_t> extra = {},
                                                      std::uint64_t lo = 2) {
  if (ratio <= 1) throw InvalidParams("grid ratio must exceed 1");
  std::set<std::uint64_t> pts(extra.begin(), extra.end());
  for (int j = 0;; ++j) {
    const long double v = std::ceil(std::pow(ratio, static_cast<long double>(j)));
    if (v > static_cast<long double>(limit)) break;
    pts.insert(static_cast<std::uint64_t>(v));
  }
  pts.insert(limit);
  std::vector<std::uint64_t> out;
  for (std::uint64_t x : pts) {
    if (x >= lo && x <= limit) out.push_back(x);
  }
  return out;
}

inline constexpr std::uint64_t kTableCheckpoints[] = {1000, 10000, 100000, 2000000};

/// The default grid: ceil(1.02^j) plus 10^3, 10^4, 10^5 and 2*10^6.
inline std::vector<std::uint64_t> default_checkpoints(std::uint64_t limit) {
  return multiplicative_grid(limit, 1.02L, kTableCheckpoints);
}

/// Densities of {n <= x : n starts with S} over all positive integers, at
/// x = S b^m - 1, S b^m and (S+1) b^m - 1 (where the arithmetic ratio hits
/// its running extremes) and at x_max.
inline std::pair<DensitySeries, DensitySeries> natural_number_baseline(const DigitString& ds,
                                                                       std::uint64_t x_max) {
  if (x_max < ds.base()) throw InvalidParams("x_max must be at least the base");
  std::set<std::uint64_t> pts{x_max};
  for (u128 scale = 1; scale * ds.value() <= x_max + 1; scale *= ds.base()) {
    for (u128 x : {scale * ds.value() - 1, scale * ds.value(), scale * (ds.value() + 1) - 1}) {
      if (x >= 1 && x <= x_max) pts.insert(static_cast<std::uint64_t>(x));
    }
  }
  const std::vector<std::uint64_t> checkpoints(pts.begin(), pts.end());
  std::vector<std::uint64_t> naturals(x_max);
  for (std::uint64_t i = 0; i < x_max; ++i) naturals[i] = i + 1;
  auto member = [&ds](std::uint64_t n) { return is_member(static_cast<u128>(n), ds); };
  auto never_zero = [](std::uint64_t) { return false; };
  return {running_density(naturals, member, never_zero, checkpoints, DensityMode::arithmetic),
          running_density(naturals, member, never_zero, checkpoints, DensityMode::logarithmic)};
}

/// Windows [alpha beta^n, gamma beta^n).
struct WindowFamily {
  long double alpha;
  long double gamma;
  long double beta;

  /// Integer bounds [lo, hi) of window n.
  std::pair<std::uint64_t, std::uint64_t> bounds(int n) const {
    const long double scale = std::pow(beta, static_cast<long double>(n));
    return {static_cast<std::uint64_t>(std::ceil(alpha * scale)),
            static_cast<std::uint64_t>(std::ceil(gamma * scale))};
  }
};

/// The window family whose primes satisfy
///   (d b^c - 2) b^n <= 2 p^{(k-1)/2} < (d b^c - 1) b^n,
/// i.e. alpha = ((d b^c - 2)/2)^{2/(k-1)}, gamma = ((d b^c - 1)/2)^{2/(k-1)},
/// beta = b^{2/(k-1)}.  Base 2 uses d in {1, 3} with the string "10".
inline WindowFamily oscillation_windows(unsigned b, unsigned c, unsigned k, unsigned d) {
  if (b < 2) throw InvalidParams("base must be >= 2");
  if (c < 2) throw InvalidParams("c must be >= 2");
  if (k < 2 || k % 2 != 0) throw InvalidParams("weight must be even and >= 2");
  if (d < 1 || d > 3) throw InvalidParams("d must be 1, 2 or 3");
  const long double e = 2.0L / static_cast<long double>(k - 1);
  const long double bc = std::pow(static_cast<long double>(b), static_cast<long double>(c));
  return {std::pow((d * bc - 2) / 2, e), std::pow((d * bc - 1) / 2, e), std::pow(static_cast<long double>(b), e)};
}

struct WindowResult {
  int n;
  std::uint64_t lo;  // first integer in the window
  std::uint64_t hi;  // one past the last
  std::uint64_t members;
  std::uint64_t primes;
  std::optional<double> proportion;  // absent for an empty window

  bool empty() const noexcept { return primes == 0; }
};

/// Largest n whose window lies inside [1, limit], or nullopt.
inline std::optional<int> max_window_index(const WindowFamily& w, std::uint64_t limit) {
  std::optional<int> best;
  for (int n = 0; n < 4096; ++n) {
    const auto [lo, hi] = w.bounds(n);
    if (hi == 0 || hi - 1 > limit) break;
    best = n;
  }
  return best;
}

inline std::vector<WindowResult> window_scan(const CoefficientTable& table, const PrimeSet& primes,
                                             const DigitString& ds, const WindowFamily& w, int n_first,
                                             int n_last) {
  if (!(w.alpha < w.gamma)) throw InvalidParams("window needs alpha < gamma");
  if (!(w.beta > 1)) throw InvalidParams("window needs beta > 1");
  std::vector<WindowResult> out;
  const auto& ps = primes.primes();
  for (int n = n_first; n <= n_last; ++n) {
    const auto [lo, hi] = w.bounds(n);
    if (hi > 0 && (hi - 1 > table.limit() || hi - 1 > primes.limit())) {
      throw InvalidParams("window " + std::to_string(n) + " extends beyond the table");
    }
    WindowResult r{n, lo, hi, 0, 0, std::nullopt};
    for (auto it = std::lower_bound(ps.begin(), ps.end(), lo); it != ps.end() && *it < hi; ++it) {
      ++r.primes;
      if (is_member(table(*it), ds)) ++r.members;
    }
    if (r.primes > 0) r.proportion = static_cast<double>(r.members) / static_cast<double>(r.primes);
    out.push_back(r);
  }
  return out;
}

}  // namespace benford
