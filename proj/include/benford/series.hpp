#pragma once

// Truncated integer power series in q.  Every operation truncates eagerly at
// the series' truncation X: coefficients of q^n for n > X are never stored.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "int128.hpp"

namespace benford {

struct Term {
  std::uint64_t exponent;
  i128 coefficient;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse expansion; exponents strictly increasing, no zero coefficients.
class SparseSeries {
 public:
  SparseSeries() = default;

  /// Terms may arrive in any order; duplicates are summed and zeros dropped.
  /// Terms beyond the truncation are discarded.
  SparseSeries(std::uint64_t truncation, std::vector<Term> terms);

  std::uint64_t truncation() const noexcept { return truncation_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Coefficient of q^e (zero when absent).
  i128 coefficient(std::uint64_t e) const;

  friend bool operator==(const SparseSeries&, const SparseSeries&) = default;

 private:
  std::uint64_t truncation_ = 0;
  std::vector<Term> terms_;
};

/// Dense coefficients c_0..c_X.
class DenseSeries {
 public:
  DenseSeries() : coeffs_(1, 0) {}
  explicit DenseSeries(std::uint64_t truncation) : coeffs_(truncation + 1, 0) {}
  explicit DenseSeries(std::vector<i128> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw InvalidParams("dense series needs at least one coefficient");
  }

  /// The constant series c at truncation X.
  static DenseSeries constant(i128 c, std::uint64_t truncation) {
    DenseSeries s(truncation);
    s.coeffs_[0] = c;
    return s;
  }

  std::uint64_t truncation() const noexcept { return coeffs_.size() - 1; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  i128 operator[](std::size_t i) const { return coeffs_[i]; }
  i128& operator[](std::size_t i) { return coeffs_[i]; }
  const std::vector<i128>& coefficients() const noexcept { return coeffs_; }

  /// Largest |c_i|.
  u128 max_abs() const noexcept {
    u128 m = 0;
    for (i128 c : coeffs_) m = std::max(m, uabs(c));
    return m;
  }

  friend bool operator==(const DenseSeries&, const DenseSeries&) = default;

 private:
  std::vector<i128> coeffs_;
};

inline SparseSeries::SparseSeries(std::uint64_t truncation, std::vector<Term> terms)
    : truncation_(truncation) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
  for (const Term& t : terms) {
    if (t.exponent > truncation_) break;
    if (!terms_.empty() && terms_.back().exponent == t.exponent) {
      terms_.back().coefficient += t.coefficient;
    } else {
      terms_.push_back(t);
    }
  }
  std::erase_if(terms_, [](const Term& t) { return t.coefficient == 0; });
}

inline i128 SparseSeries::coefficient(std::uint64_t e) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const Term& t, std::uint64_t x) { return t.exponent < x; });
  return it != terms_.end() && it->exponent == e ? it->coefficient : 0;
}

inline DenseSeries to_dense(const SparseSeries& s) {
  DenseSeries d(s.truncation());
  for (const Term& t : s.terms()) d[t.exponent] = t.coefficient;
  return d;
}

inline SparseSeries to_sparse(const DenseSeries& d) {
  std::vector<Term> terms;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] != 0) terms.push_back({i, d[i]});
  }
  return SparseSeries(d.truncation(), std::move(terms));
}

/// prod_{n>=1} (1 - q^n) truncated at X, by the pentagonal number theorem:
/// terms (-1)^k q^{k(3k-1)/2} for k in Z.
inline SparseSeries eta_series(std::uint64_t truncation) {
  std::vector<Term> terms{{0, 1}};
  for (std::uint64_t k = 1;; ++k) {
    const std::uint64_t lo = k * (3 * k - 1) / 2;
    if (lo > truncation) break;
    const i128 sign = (k % 2 == 0) ? 1 : -1;
    terms.push_back({lo, sign});
    const std::uint64_t hi = k * (3 * k + 1) / 2;
    if (hi <= truncation) terms.push_back({hi, sign});
  }
  return SparseSeries(truncation, std::move(terms));
}

/// (prod (1 - q^n))^3 truncated at X, by Jacobi's identity:
/// terms (-1)^k (2k+1) q^{k(k+1)/2} for k >= 0.
inline SparseSeries eta_cube_series(std::uint64_t truncation) {
  std::vector<Term> terms;
  for (std::uint64_t k = 0;; ++k) {
    const std::uint64_t e = k * (k + 1) / 2;
    if (e > truncation) break;
    const i128 mag = static_cast<i128>(2 * k + 1);
    terms.push_back({e, (k % 2 == 0) ? mag : -mag});
  }
  return SparseSeries(truncation, std::move(terms));
}

/// Substitutes q -> q^m and re-truncates at X.
inline SparseSeries dilate(const SparseSeries& a, std::uint64_t m, std::uint64_t truncation) {
  if (m == 0) throw InvalidParams("dilation factor must be positive");
  std::vector<Term> terms;
  for (const Term& t : a.terms()) {
    if (t.exponent > truncation / m) break;
    terms.push_back({t.exponent * m, t.coefficient});
  }
  return SparseSeries(truncation, std::move(terms));
}

/// Schoolbook truncated product.  O(X^2); the reference for `multiply`.
inline DenseSeries naive_multiply(const DenseSeries& a, const DenseSeries& b) {
  if (a.truncation() != b.truncation()) throw InvalidParams("truncation mismatch");
  const std::size_t n = a.size();
  DenseSeries out(a.truncation());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < n; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

/// Sparse-by-dense truncated product, O(terms * X).
inline DenseSeries multiply_sparse(const SparseSeries& a, const DenseSeries& b) {
  if (a.truncation() != b.truncation()) throw InvalidParams("truncation mismatch");
  const std::size_t n = b.size();
  DenseSeries out(b.truncation());
  for (const Term& t : a.terms()) {
    for (std::size_t j = 0; t.exponent + j < n; ++j) out[t.exponent + j] += t.coefficient * b[j];
  }
  return out;
}

}  // namespace benford
