#pragma once

// Exact truncated multiplication of integer series: number-theoretic
// transforms modulo several 62-bit primes, recombined by Garner's CRT into a
// fixed-width 256-bit intermediate and stored back as 128-bit coefficients.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"
#include "int128.hpp"
#include "parallel.hpp"
#include "series.hpp"

namespace benford {

using u256 = boost::multiprecision::uint256_t;

namespace detail {

/// Montgomery arithmetic modulo an odd p < 2^62 with R = 2^64.  Values are
/// kept fully reduced in [0, p).
class Montgomery {
 public:
  Montgomery() = default;
  explicit Montgomery(std::uint64_t p) : p_(p) {
    std::uint64_t inv = p;
    for (int i = 0; i < 6; ++i) inv *= 2 - p * inv;
    neg_inv_ = ~inv + 1;
    const u128 r = (u128{1} << 64) % p;
    r2_ = static_cast<std::uint64_t>((r * r) % p);
  }

  std::uint64_t modulus() const noexcept { return p_; }

  std::uint64_t reduce(u128 t) const noexcept {
    const std::uint64_t m = static_cast<std::uint64_t>(t) * neg_inv_;
    const auto u = static_cast<std::uint64_t>((t + static_cast<u128>(m) * p_) >> 64);
    return u >= p_ ? u - p_ : u;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    return reduce(static_cast<u128>(a) * b);
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    const std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  std::uint64_t to_mont(std::uint64_t a) const noexcept { return mul(a % p_, r2_); }
  std::uint64_t from_mont(std::uint64_t a) const noexcept { return reduce(a); }

  std::uint64_t to_mont_signed(i128 v) const noexcept {
    i128 r = v % static_cast<i128>(p_);
    if (r < 0) r += p_;
    return to_mont(static_cast<std::uint64_t>(r));
  }

  /// base and result in Montgomery form.
  std::uint64_t pow(std::uint64_t base, std::uint64_t e) const noexcept {
    std::uint64_t result = to_mont(1);
    while (e != 0) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }

 private:
  std::uint64_t p_ = 0;
  std::uint64_t neg_inv_ = 0;
  std::uint64_t r2_ = 0;
};

inline std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
  const Montgomery mg(p);
  return mg.from_mont(mg.pow(mg.to_mont(a), p - 2));
}

}  // namespace detail

/// A prime modulus c * 2^s + 1 with a known primitive root.
struct NttPrime {
  std::uint64_t p;
  unsigned two_adicity;
  std::uint64_t primitive_root;
};

/// Largest primes below 2^62 of the form c*2^s + 1 for s = 40, 39, 38, 37.
inline constexpr std::array<NttPrime, 4> kNttPrimes{{
    {4611615649683210241ULL, 40, 11},
    {4611627194555301889ULL, 39, 7},
    {4611672549409947649ULL, 38, 14},
    {4611685606110527489ULL, 37, 3},
}};

/// Transform length, moduli, twiddle tables and CRT constants for products
/// truncated at X.  Immutable after construction.
class NttPlan {
 public:
  explicit NttPlan(std::uint64_t truncation, std::size_t num_moduli = kNttPrimes.size());

  std::uint64_t truncation() const noexcept { return truncation_; }
  std::size_t length() const noexcept { return std::size_t{1} << log_len_; }
  unsigned log_length() const noexcept { return log_len_; }
  std::size_t num_moduli() const noexcept { return mods_.size(); }
  std::uint64_t modulus(std::size_t i) const { return mods_[i].mg.modulus(); }

  /// Product of the moduli.
  const u256& crt_modulus() const noexcept { return product_; }
  /// log2 of the product of the moduli.
  long double capacity_bits() const noexcept { return capacity_bits_; }

  /// Throws CapacityExceeded unless every coefficient of a*b is provably
  /// below half the CRT modulus in absolute value.
  void check_capacity(const DenseSeries& a, const DenseSeries& b) const;

  /// Per-modulus residues of the truncated product a*b.
  std::vector<std::vector<std::uint64_t>> residues(const DenseSeries& a, const DenseSeries& b,
                                                   unsigned threads = 1) const;

  /// Garner recombination into signed 128-bit coefficients.
  DenseSeries reconstruct(const std::vector<std::vector<std::uint64_t>>& residues,
                          unsigned threads = 1) const;

 private:
  struct ModContext {
    detail::Montgomery mg;
    std::vector<std::uint64_t> roots;  // w^k, k < L/2, Montgomery form
    std::uint64_t inv_len = 0;         // L^{-1}, Montgomery form
  };

  void forward(const ModContext& m, std::vector<std::uint64_t>& a) const;
  void inverse(const ModContext& m, std::vector<std::uint64_t>& a) const;
  std::vector<std::uint64_t> transform_input(const ModContext& m, const DenseSeries& a) const;

  std::uint64_t truncation_;
  unsigned log_len_ = 0;
  std::vector<ModContext> mods_;
  // garner_[i][j] = p_j^{-1} mod p_i (Montgomery form in p_i), j < i.
  std::vector<std::vector<std::uint64_t>> garner_;
  u256 product_;
  u256 half_;
  long double capacity_bits_ = 0;
};

inline NttPlan::NttPlan(std::uint64_t truncation, std::size_t num_moduli)
    : truncation_(truncation) {
  if (num_moduli == 0 || num_moduli > kNttPrimes.size()) {
    throw InvalidParams("NTT plan supports 1.." + std::to_string(kNttPrimes.size()) + " moduli");
  }
  // Cyclic length must exceed 2X so no wrapped term lands at index <= X.
  while ((std::uint64_t{1} << log_len_) < 2 * truncation + 2) ++log_len_;
  const std::size_t len = length();
  product_ = 1;
  for (std::size_t i = 0; i < num_moduli; ++i) {
    const NttPrime& np = kNttPrimes[i];
    if (log_len_ > np.two_adicity) throw InvalidParams("transform too long for NTT prime");
    ModContext ctx{detail::Montgomery(np.p), {}, 0};
    const auto& mg = ctx.mg;
    const std::uint64_t w = mg.pow(mg.to_mont(np.primitive_root), (np.p - 1) >> log_len_);
    ctx.roots.resize(std::max<std::size_t>(1, len / 2));
    ctx.roots[0] = mg.to_mont(1);
    for (std::size_t k = 1; k < ctx.roots.size(); ++k) ctx.roots[k] = mg.mul(ctx.roots[k - 1], w);
    ctx.inv_len = mg.to_mont(detail::inverse_mod(len % np.p, np.p));
    mods_.push_back(std::move(ctx));
    product_ *= np.p;
  }
  garner_.resize(num_moduli);
  for (std::size_t i = 0; i < num_moduli; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const std::uint64_t pi = kNttPrimes[i].p;
      garner_[i].push_back(mods_[i].mg.to_mont(detail::inverse_mod(kNttPrimes[j].p % pi, pi)));
    }
  }
  half_ = (product_ - 1) / 2;
  for (std::size_t i = 0; i < num_moduli; ++i) capacity_bits_ += std::log2l(kNttPrimes[i].p);
}

inline void NttPlan::check_capacity(const DenseSeries& a, const DenseSeries& b) const {
  const u128 ma = a.max_abs();
  const u128 mb = b.max_abs();
  if (ma == 0 || mb == 0) return;
  const long double bound_bits = std::log2l(static_cast<long double>(a.size())) +
                                 std::log2l(to_long_double(ma)) + std::log2l(to_long_double(mb));
  // 2 * bound < M, with a margin for the floating-point estimate.
  if (bound_bits + 1 >= capacity_bits_ - 1e-6L) {
    throw CapacityExceeded("product coefficients may reach 2^" + std::to_string(static_cast<double>(bound_bits)) +
                           " but the CRT modulus holds 2^" +
                           std::to_string(static_cast<double>(capacity_bits_ - 1)) + "; add moduli");
  }
}

inline std::vector<std::uint64_t> NttPlan::transform_input(const ModContext& m,
                                                           const DenseSeries& a) const {
  std::vector<std::uint64_t> out(length(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = m.mg.to_mont_signed(a[i]);
  forward(m, out);
  return out;
}

// Decimation in frequency: natural order in, bit-reversed order out.
inline void NttPlan::forward(const ModContext& m, std::vector<std::uint64_t>& a) const {
  const auto& mg = m.mg;
  const std::size_t len = a.size();
  for (std::size_t half = len / 2; half >= 1; half >>= 1) {
    const std::size_t step = (len / 2) / half;
    for (std::size_t start = 0; start < len; start += 2 * half) {
      std::uint64_t* lo = a.data() + start;
      std::uint64_t* hi = lo + half;
      for (std::size_t j = 0; j < half; ++j) {
        const std::uint64_t u = lo[j];
        const std::uint64_t v = hi[j];
        lo[j] = mg.add(u, v);
        hi[j] = mg.mul(mg.sub(u, v), m.roots[j * step]);
      }
    }
  }
}

// Decimation in time with inverse twiddles: bit-reversed in, natural out,
// scaled by 1/L.  Uses w^{-k} = -w^{L/2-k}.
inline void NttPlan::inverse(const ModContext& m, std::vector<std::uint64_t>& a) const {
  const auto& mg = m.mg;
  const std::size_t len = a.size();
  const std::size_t half_len = len / 2;
  for (std::size_t half = 1; half < len; half <<= 1) {
    const std::size_t step = half_len / half;
    for (std::size_t start = 0; start < len; start += 2 * half) {
      std::uint64_t* lo = a.data() + start;
      std::uint64_t* hi = lo + half;
      for (std::size_t j = 0; j < half; ++j) {
        const std::size_t k = j * step;
        const std::uint64_t v =
            k == 0 ? hi[j] : mg.sub(0, mg.mul(hi[j], m.roots[half_len - k]));
        const std::uint64_t u = lo[j];
        lo[j] = mg.add(u, v);
        hi[j] = mg.sub(u, v);
      }
    }
  }
  for (auto& x : a) x = mg.mul(x, m.inv_len);
}

inline std::vector<std::vector<std::uint64_t>> NttPlan::residues(const DenseSeries& a,
                                                                 const DenseSeries& b,
                                                                 unsigned threads) const {
  if (a.truncation() != b.truncation()) throw InvalidParams("truncation mismatch");
  if (a.truncation() > truncation_) throw InvalidParams("series longer than the NTT plan");
  const bool square = &a == &b || a == b;
  std::vector<std::vector<std::uint64_t>> out(mods_.size());
  parallel_for(mods_.size(), threads, [&](std::size_t i) {
    const ModContext& m = mods_[i];
    std::vector<std::uint64_t> fa = transform_input(m, a);
    if (square) {
      for (auto& x : fa) x = m.mg.mul(x, x);
    } else {
      const std::vector<std::uint64_t> fb = transform_input(m, b);
      for (std::size_t k = 0; k < fa.size(); ++k) fa[k] = m.mg.mul(fa[k], fb[k]);
    }
    inverse(m, fa);
    fa.resize(a.size());
    for (auto& x : fa) x = m.mg.from_mont(x);
    out[i] = std::move(fa);
  });
  return out;
}

inline DenseSeries NttPlan::reconstruct(const std::vector<std::vector<std::uint64_t>>& res,
                                        unsigned threads) const {
  if (res.size() != mods_.size()) throw InvalidParams("residue count does not match plan");
  const std::size_t n = res.front().size();
  const std::size_t k = mods_.size();
  DenseSeries out(n - 1);
  std::vector<int> overflow(n, 0);
  parallel_for_blocks(n, threads, [&](std::size_t lo, std::size_t hi) {
    std::array<std::uint64_t, kNttPrimes.size()> digit{};
    for (std::size_t idx = lo; idx < hi; ++idx) {
      // Mixed-radix digits: value = d0 + p0 (d1 + p1 (d2 + p2 d3)).
      for (std::size_t i = 0; i < k; ++i) {
        const auto& mg = mods_[i].mg;
        const std::uint64_t pi = mg.modulus();
        std::uint64_t x = res[i][idx];
        for (std::size_t j = 0; j < i; ++j) {
          std::uint64_t dj = digit[j];
          if (dj >= pi) dj -= pi;
          x = mg.mul(mg.sub(x, dj), garner_[i][j]);
        }
        digit[i] = x;
      }
      u256 value = digit[k - 1];
      for (std::size_t i = k - 1; i-- > 0;) value = value * mods_[i].mg.modulus() + digit[i];
      const bool negative = value > half_;
      const u256 mag = negative ? product_ - value : value;
      const u256 limit = negative ? (u256(1) << 127) : (u256(1) << 127) - 1;
      if (mag > limit) {
        overflow[idx] = 1;
        continue;
      }
      const u128 m128 = (static_cast<u128>(static_cast<std::uint64_t>(mag >> 64)) << 64) |
                        static_cast<std::uint64_t>(mag & std::numeric_limits<std::uint64_t>::max());
      out[idx] = negative ? static_cast<i128>(u128{0} - m128) : static_cast<i128>(m128);
    }
  });
  for (std::size_t idx = 0; idx < n; ++idx) {
    if (overflow[idx]) {
      throw CapacityExceeded("coefficient " + std::to_string(idx) + " exceeds 128-bit storage");
    }
  }
  return out;
}

/// Exact truncated product a*b.
inline DenseSeries multiply(const DenseSeries& a, const DenseSeries& b, const NttPlan& plan,
                            unsigned threads = 1) {
  plan.check_capacity(a, b);
  return plan.reconstruct(plan.residues(a, b, threads), threads);
}

struct PowerStats {
  unsigned multiplies = 0;
};

/// a^e by left-to-right square-and-multiply: floor(log2 e) squarings and
/// popcount(e) - 1 general multiplies.
inline DenseSeries power(const DenseSeries& a, std::uint64_t e, const NttPlan& plan,
                         unsigned threads = 1, PowerStats* stats = nullptr) {
  if (e == 0) throw InvalidParams("power exponent must be positive");
  DenseSeries result = a;
  for (int bit = std::bit_width(e) - 2; bit >= 0; --bit) {
    result = multiply(result, result, plan, threads);
    if (stats) ++stats->multiplies;
    if ((e >> bit) & 1) {
      result = multiply(result, a, plan, threads);
      if (stats) ++stats->multiplies;
    }
  }
  return result;
}

}  // namespace benford
