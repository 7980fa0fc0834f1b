#pragma once

// Fourier coefficients of eta-quotient newforms, with the structural checks
// (Hecke relations, Deligne bound) used to certify a computed table.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "elliptic.hpp"
#include "errors.hpp"
#include "int128.hpp"
#include "ntt.hpp"
#include "primes.hpp"
#include "series.hpp"

namespace benford {

/// eta(m z)^r.
struct EtaFactor {
  std::uint64_t dilation;
  std::int64_t exponent;

  friend bool operator==(const EtaFactor&, const EtaFactor&) = default;
};

/// prod_i eta(m_i z)^{r_i} with declared level.  Only holomorphic quotients
/// (all r_i >= 1) of even weight >= 2 and integral q-shift are accepted.
class EtaQuotientSpec {
 public:
  EtaQuotientSpec(std::string id, std::vector<EtaFactor> factors, std::uint32_t level)
      : id_(std::move(id)), factors_(std::move(factors)), level_(level) {
    if (id_.empty() || id_.size() > 255) throw InvalidParams("form id must be 1..255 bytes");
    if (factors_.empty()) throw InvalidParams("eta quotient needs at least one factor");
    if (level_ == 0) throw InvalidParams("level must be positive");
    std::int64_t exp_sum = 0;
    std::uint64_t shift_sum = 0;
    for (const EtaFactor& f : factors_) {
      if (f.dilation == 0) throw InvalidParams("eta dilation must be >= 1");
      if (f.exponent < 1) throw InvalidParams("eta exponents must be >= 1 (holomorphic quotients only)");
      exp_sum += f.exponent;
      shift_sum += f.dilation * static_cast<std::uint64_t>(f.exponent);
    }
    if (exp_sum % 2 != 0 || (exp_sum / 2) % 2 != 0) {
      throw InvalidParams("weight sum(r)/2 must be an even integer");
    }
    if (shift_sum % 24 != 0) throw InvalidParams("q-shift sum(m*r)/24 must be an integer");
    weight_ = static_cast<std::uint16_t>(exp_sum / 2);
    q_shift_ = shift_sum / 24;
  }

  const std::string& id() const noexcept { return id_; }
  const std::vector<EtaFactor>& factors() const noexcept { return factors_; }
  std::uint16_t weight() const noexcept { return weight_; }
  std::uint32_t level() const noexcept { return level_; }
  std::uint64_t q_shift() const noexcept { return q_shift_; }

 private:
  std::string id_;
  std::vector<EtaFactor> factors_;
  std::uint32_t level_;
  std::uint16_t weight_ = 0;
  std::uint64_t q_shift_ = 0;
};

struct FormPreset {
  EtaQuotientSpec spec;
  std::optional<WeierstrassCurve> curve;  // weight-2 forms only
};

inline std::vector<FormPreset> form_presets() {
  return {
      {EtaQuotientSpec("delta", {{1, 24}}, 1), std::nullopt},
      {EtaQuotientSpec("level11", {{1, 2}, {11, 2}}, 11), kCurve11a},
      {EtaQuotientSpec("level2", {{1, 8}, {2, 8}}, 2), std::nullopt},
      {EtaQuotientSpec("level5", {{1, 4}, {5, 4}}, 5), std::nullopt},
  };
}

inline std::optional<FormPreset> find_preset(const std::string& name) {
  for (auto& p : form_presets()) {
    if (p.spec.id() == name) return p;
  }
  return std::nullopt;
}

/// lambda(1..X) for one form.
class CoefficientTable {
 public:
  CoefficientTable(std::string form_id, std::uint16_t weight, std::uint32_t level,
                   std::vector<i128> values)
      : form_id_(std::move(form_id)), weight_(weight), level_(level), values_(std::move(values)) {}

  const std::string& form_id() const noexcept { return form_id_; }
  std::uint16_t weight() const noexcept { return weight_; }
  std::uint32_t level() const noexcept { return level_; }
  std::uint64_t limit() const noexcept { return values_.size(); }
  const std::vector<i128>& values() const noexcept { return values_; }

  /// lambda(n), 1 <= n <= limit.
  i128 operator()(std::uint64_t n) const { return values_.at(n - 1); }

  friend bool operator==(const CoefficientTable&, const CoefficientTable&) = default;

 private:
  std::string form_id_;
  std::uint16_t weight_;
  std::uint32_t level_;
  std::vector<i128> values_;
};

/// Expands the eta quotient through the NTT engine.  The product series
/// omits the q^{q_shift} prefactor, so its constant term is lambda(1).
/// eta^r with 3 | r is raised from the sparse Jacobi cube; other exponents
/// from the pentagonal expansion.
inline CoefficientTable compute_coefficients(const EtaQuotientSpec& spec, std::uint64_t limit,
                                             unsigned threads = 1) {
  if (limit < 1) throw InvalidParams("coefficient limit must be >= 1");
  const std::uint64_t trunc = limit - 1;
  const NttPlan plan(trunc);
  std::optional<DenseSeries> product;
  for (const EtaFactor& f : spec.factors()) {
    const bool cube = f.exponent % 3 == 0;
    const SparseSeries base = cube ? eta_cube_series(trunc) : eta_series(trunc);
    const auto e = static_cast<std::uint64_t>(cube ? f.exponent / 3 : f.exponent);
    DenseSeries term = power(to_dense(dilate(base, f.dilation, trunc)), e, plan, threads);
    product = product ? multiply(*product, term, plan, threads) : std::move(term);
  }
  return CoefficientTable(spec.id(), spec.weight(), spec.level(),
                          std::vector<i128>(product->coefficients()));
}

struct HeckeReport {
  bool ok = true;
  std::optional<std::uint64_t> violation;  // smallest failing index
  std::uint64_t relations_checked = 0;
};

/// Checks lambda(1) = 1, lambda(mn) = lambda(m) lambda(n) for coprime m, n,
/// and lambda(p^{r+1}) = lambda(p) lambda(p^r) - chi(p) p^{k-1} lambda(p^{r-1})
/// with chi(p) = 0 for p | N.  Overflow in a relation counts as a violation.
inline HeckeReport hecke_validate(const CoefficientTable& t) {
  HeckeReport report;
  const std::uint64_t limit = t.limit();
  auto fail = [&report](std::uint64_t n) {
    report.ok = false;
    report.violation = n;
    return report;
  };
  if (limit == 0) return report;
  ++report.relations_checked;
  if (t(1) != 1) return fail(1);

  std::vector<std::uint32_t> spf(limit + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf[i] != 0) continue;
    for (std::uint64_t j = i; j <= limit; j += i) {
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
    }
  }

  for (std::uint64_t n = 2; n <= limit; ++n) {
    const std::uint64_t p = spf[n];
    std::uint64_t rest = n;
    unsigned a = 0;
    while (rest % p == 0) {
      rest /= p;
      ++a;
    }
    i128 expected;
    if (rest > 1) {
      if (__builtin_mul_overflow(t(n / rest), t(rest), &expected)) return fail(n);
    } else if (a >= 2) {
      const std::uint64_t prev = n / p;
      const std::uint64_t prev2 = prev / p;
      i128 first;
      if (__builtin_mul_overflow(t(p), t(prev), &first)) return fail(n);
      i128 second = 0;
      if (t.level() % p != 0) {
        i128 pk = 1;
        for (unsigned i = 0; i + 1 < t.weight(); ++i) {
          if (__builtin_mul_overflow(pk, static_cast<i128>(p), &pk)) return fail(n);
        }
        if (__builtin_mul_overflow(pk, t(prev2), &second)) return fail(n);
      }
      if (__builtin_sub_overflow(first, second, &expected)) return fail(n);
    } else {
      continue;  // prime: no relation
    }
    ++report.relations_checked;
    if (expected != t(n)) return fail(n);
  }
  return report;
}

struct DeligneReport {
  bool ok = true;
  std::optional<std::uint64_t> violation;  // first prime with |lambda(p)| > 2 p^{(k-1)/2}
  long double max_ratio = 0;               // max |lambda(p)| / (2 p^{(k-1)/2})
  std::uint64_t argmax = 0;
  std::uint64_t primes_checked = 0;
};

/// Exact test lambda(p)^2 <= 4 p^{k-1} at every prime of the set.
inline DeligneReport deligne_validate(const CoefficientTable& t, const PrimeSet& primes) {
  using boost::multiprecision::cpp_int;
  DeligneReport report;
  const unsigned k = t.weight();
  for (std::uint64_t p : primes) {
    if (p > t.limit()) throw InvalidParams("prime beyond the coefficient table");
    const i128 lam = t(p);
    const u128 mag = uabs(lam);
    cpp_int lhs = cpp_int(static_cast<std::uint64_t>(mag >> 64)) << 64;
    lhs += static_cast<std::uint64_t>(mag);
    lhs *= lhs;
    const cpp_int rhs = 4 * boost::multiprecision::pow(cpp_int(p), k - 1);
    const long double ratio =
        to_long_double(mag) / (2 * std::pow(static_cast<long double>(p), (k - 1) / 2.0L));
    ++report.primes_checked;
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.argmax = p;
    }
    if (lhs > rhs && report.ok) {
      report.ok = false;
      report.violation = p;
    }
  }
  return report;
}

}  // namespace benford
