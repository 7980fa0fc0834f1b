#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "errors.hpp"

namespace benford {

/// The primes up to a limit, ascending.
class PrimeSet {
 public:
  PrimeSet() = default;
  PrimeSet(std::uint64_t limit, std::vector<std::uint64_t> primes)
      : limit_(limit), primes_(std::move(primes)) {}

  std::uint64_t limit() const noexcept { return limit_; }
  const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }
  std::size_t size() const noexcept { return primes_.size(); }
  auto begin() const noexcept { return primes_.begin(); }
  auto end() const noexcept { return primes_.end(); }

  /// pi(x) for x <= limit.
  std::size_t count_upto(std::uint64_t x) const {
    return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
  }

  /// The primes up to x <= limit.
  PrimeSet restricted(std::uint64_t x) const {
    if (x > limit_) throw InvalidParams("restriction beyond the sieve limit");
    return PrimeSet(x, std::vector<std::uint64_t>(primes_.begin(), primes_.begin() + static_cast<std::ptrdiff_t>(count_upto(x))));
  }

  bool contains(std::uint64_t n) const {
    return std::binary_search(primes_.begin(), primes_.end(), n);
  }

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> primes_;
};

inline constexpr std::uint64_t kSieveSegment = std::uint64_t{1} << 20;

/// Segmented sieve of Eratosthenes over [2, x].
inline PrimeSet sieve(std::uint64_t x) {
  if (x < 2) throw InvalidParams("sieve limit must be at least 2");
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(x)));
  while (root * root > x) --root;
  while ((root + 1) * (root + 1) <= x) ++root;

  std::vector<char> small(root + 1, 1);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
  }

  std::vector<std::uint64_t> primes;
  std::vector<char> seg(kSieveSegment);
  for (std::uint64_t lo = 2; lo <= x; lo += kSieveSegment) {
    const std::uint64_t hi = std::min(x, lo + kSieveSegment - 1);
    std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(hi - lo + 1), 1);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j <= hi; j += p) seg[j - lo] = 0;
    }
    for (std::uint64_t n = lo; n <= hi; ++n) {
      if (seg[n - lo]) primes.push_back(n);
    }
  }
  return PrimeSet(x, std::move(primes));
}

/// Neumaier-compensated running sum in extended precision.
class CompensatedSum {
 public:
  void add(long double v) noexcept {
    const long double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  long double value() const noexcept { return sum_ + comp_; }

 private:
  long double sum_ = 0;
  long double comp_ = 0;
};

/// sum_{p <= x} 1/p.
inline long double reciprocal_sum(const PrimeSet& primes, std::uint64_t x) {
  if (x > primes.limit()) throw InvalidParams("reciprocal_sum cutoff exceeds the sieve limit");
  CompensatedSum acc;
  for (std::uint64_t p : primes) {
    if (p > x) break;
    acc.add(1.0L / static_cast<long double>(p));
  }
  return acc.value();
}

/// Raw little-endian u64 list.
inline void save_primes(const PrimeSet& primes, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  auto put = [&out](std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 8);
  };
  for (std::uint64_t p : primes) put(p);
  if (!out) throw IoError("write failed for " + path);
}

/// Reads a prime cache written by save_primes.  The file carries no limit, so
/// the result is only known complete up to its largest prime.
inline PrimeSet load_primes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % 8 != 0) throw FormatError("prime cache length is not a multiple of 8");
  std::vector<std::uint64_t> primes(bytes.size() / 8);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | static_cast<unsigned char>(bytes[8 * i + b]);
    if (v < 2 || (i > 0 && v <= primes[i - 1])) throw FormatError("prime cache is not strictly ascending");
    primes[i] = v;
  }
  if (primes.empty()) throw FormatError("prime cache is empty");
  const std::uint64_t limit = primes.back();
  return PrimeSet(limit, std::move(primes));
}

}  // namespace benford
