#pragma once

// Arithmetic in F_{p^n}, polynomial basis. An element is the packed base-p
// index sum c_s p^s of its coefficient vector (c_0, ..., c_{n-1}).

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gapn/error.hpp"
#include "gapn/numtheory.hpp"
#include "gapn/polyfp.hpp"

namespace gapn {

struct FieldElem {
  u64 index = 0;
  friend auto operator<=>(const FieldElem&, const FieldElem&) = default;
};

enum class TablePolicy { Auto, Never };

inline constexpr u64 kMaxFieldOrder = u64{1} << 48;
inline constexpr u64 kMaxTableOrder = u64{1} << 24;
inline constexpr unsigned kMaxDegree = 48;

/// Smallest monic irreducible of degree n over F_p, lexicographic on
/// (c_{n-1}, ..., c_0).
inline PolyFp find_irreducible(u64 p, unsigned n) {
  if (!nt::is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (n < 1) fail(ErrorCode::InvalidArgument, "degree must be >= 1");
  std::vector<u64> low(n, 0);
  for (;;) {
    std::vector<u64> coeffs(low);
    coeffs.push_back(1);
    PolyFp candidate(p, std::move(coeffs));
    if (is_irreducible(candidate)) return candidate;
    // odometer with c_0 least significant
    std::size_t k = 0;
    while (k < n && ++low[k] == p) low[k++] = 0;
    if (k == n) fail(ErrorCode::InvalidArgument, "no irreducible found");  // unreachable
  }
}

class FieldCtx {
 public:
  static FieldCtx make(u64 p, unsigned n, std::optional<PolyFp> modulus = std::nullopt,
                       TablePolicy policy = TablePolicy::Auto) {
    if (!nt::is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    if (n < 1) fail(ErrorCode::InvalidArgument, "extension degree must be >= 1");
    auto order = nt::checked_pow(p, n, kMaxFieldOrder);
    if (!order) fail(ErrorCode::OrderTooLarge, "p^n exceeds 2^48");
    if (modulus) {
      if (modulus->p() != p || modulus->degree() != static_cast<int>(n) || !modulus->is_monic()) {
        fail(ErrorCode::InvalidArgument, "modulus must be monic of degree n over F_p");
      }
      if (!is_irreducible(*modulus)) fail(ErrorCode::NotIrreducible, modulus->to_string() + " is reducible");
    } else {
      modulus = find_irreducible(p, n);
    }

    auto impl = std::make_shared<Impl>();
    impl->p = p;
    impl->n = n;
    impl->order = *order;
    impl->modulus = *modulus;
    impl->small_p = p < (u64{1} << 31);
    impl->pow_p.resize(n + 1);
    impl->pow_p[0] = 1;
    for (unsigned s = 1; s <= n; ++s) impl->pow_p[s] = impl->pow_p[s - 1] * p;
    impl->mod_low.assign(modulus->coeffs().begin(), modulus->coeffs().begin() + n);
    impl->lazy_reduce = p < (u64{1} << 28);
    for (u64 c : impl->mod_low) impl->mod_neg.push_back((p - c) % p);
    if (p == 2) {
      for (unsigned s = 0; s < n; ++s) impl->mod_bits |= impl->mod_low[s] << s;
    }

    FieldCtx ctx(impl);
    ctx.build_add_tables(*impl);
    if (policy == TablePolicy::Auto && *order <= kMaxTableOrder) ctx.build_log_tables(*impl);
    return ctx;
  }

  u64 p() const noexcept { return impl_->p; }
  unsigned n() const noexcept { return impl_->n; }
  u64 order() const noexcept { return impl_->order; }
  const PolyFp& modulus() const noexcept { return impl_->modulus; }
  bool has_tables() const noexcept { return !impl_->log.empty(); }
  /// Primitive element; only available when log tables are built.
  std::optional<FieldElem> generator() const {
    if (!has_tables()) return std::nullopt;
    return impl_->generator;
  }

  FieldElem element(u64 index) const {
    if (index >= order()) fail(ErrorCode::InvalidArgument, "element index out of range");
    return FieldElem{index};
  }
  FieldElem zero() const noexcept { return FieldElem{0}; }
  FieldElem one() const noexcept { return FieldElem{1}; }

  /// Image of i under F_p -> F_{p^n}.
  FieldElem embed_prime(u64 i) const {
    if (i >= p()) fail(ErrorCode::InvalidArgument, "embed_prime needs 0 <= i < p");
    return FieldElem{i};
  }

  std::vector<u64> digits(FieldElem x) const {
    std::vector<u64> out(n());
    unpack(x.index, out.data());
    return out;
  }
  FieldElem from_digits(std::span<const u64> coeffs) const {
    if (coeffs.size() > n()) fail(ErrorCode::InvalidArgument, "too many coefficients");
    u64 idx = 0;
    for (std::size_t s = coeffs.size(); s-- > 0;) {
      if (coeffs[s] >= p()) fail(ErrorCode::InvalidArgument, "coefficient out of range");
      idx = idx * p() + coeffs[s];
    }
    return FieldElem{idx};
  }
  /// Element of the polynomial class of f mod the field modulus.
  FieldElem from_poly(const PolyFp& f) const {
    PolyFp r = f % modulus();
    return from_digits(r.coeffs());
  }

  FieldElem add(FieldElem a, FieldElem b) const noexcept {
    const Impl& m = *impl_;
    if (m.p == 2) return FieldElem{a.index ^ b.index};
    if (!m.add_full.empty()) return FieldElem{m.add_full[a.index * m.order + b.index]};
    if (!m.add_lo.empty()) {
      u64 alo = a.index % m.lo_size, ahi = a.index / m.lo_size;
      u64 blo = b.index % m.lo_size, bhi = b.index / m.lo_size;
      return FieldElem{m.add_lo[alo * m.lo_size + blo] + m.lo_size * m.add_hi[ahi * m.hi_size + bhi]};
    }
    return FieldElem{add_by_digits(a.index, b.index)};
  }

  FieldElem neg(FieldElem a) const noexcept {
    const Impl& m = *impl_;
    if (m.p == 2 || a.index == 0) return a;
    u64 idx = a.index, out = 0;
    for (unsigned s = 0; s < m.n; ++s) {
      u64 c = idx % m.p;
      idx /= m.p;
      out += (c == 0 ? 0 : m.p - c) * m.pow_p[s];
    }
    return FieldElem{out};
  }

  FieldElem sub(FieldElem a, FieldElem b) const noexcept { return add(a, neg(b)); }

  /// c * x for a scalar c in F_p.
  FieldElem scalar_mul(u64 c, FieldElem x) const noexcept {
    const Impl& m = *impl_;
    c %= m.p;
    u64 idx = x.index, out = 0;
    for (unsigned s = 0; s < m.n; ++s) {
      u64 d = idx % m.p;
      idx /= m.p;
      out += mul_p(d, c) * m.pow_p[s];
    }
    return FieldElem{out};
  }

  FieldElem mul(FieldElem a, FieldElem b) const noexcept {
    const Impl& m = *impl_;
    if (a.index == 0 || b.index == 0) return zero();
    if (!m.log.empty()) {
      u64 k = static_cast<u64>(m.log[a.index]) + m.log[b.index];
      if (k >= m.order - 1) k -= m.order - 1;
      return FieldElem{m.antilog[k]};
    }
    return mul_by_reduction(a, b);
  }

  /// Schoolbook product of the coefficient vectors reduced by the modulus.
  /// Used when tables are absent, to build the tables, and to check them.
  FieldElem mul_by_reduction(FieldElem a, FieldElem b) const noexcept {
    const Impl& m = *impl_;
    const unsigned n = m.n;
    if (m.p == 2) {
      // carry-less shift-and-add with interleaved reduction
      const u64 top = u64{1} << n;
      const u64 full = m.mod_bits | top;
      u64 r = 0, aa = a.index, bb = b.index;
      while (bb != 0) {
        if (bb & 1) r ^= aa;
        bb >>= 1;
        aa <<= 1;
        if (aa & top) aa ^= full;
      }
      return FieldElem{r};
    }
    std::array<u64, kMaxDegree> da{}, db{};
    std::array<u64, 2 * kMaxDegree> prod{};
    unpack(a.index, da.data());
    unpack(b.index, db.data());
    if (m.lazy_reduce) {
      // p < 2^28: sums of at most 2n products stay below 2^64.
      for (unsigned i = 0; i < n; ++i) {
        if (da[i] == 0) continue;
        for (unsigned j = 0; j < n; ++j) prod[i + j] += da[i] * db[j];
      }
      for (unsigned k = 2 * n - 1; k-- > n;) {
        const u64 c = prod[k] % m.p;
        if (c == 0) continue;
        for (unsigned j = 0; j < n; ++j) prod[k - n + j] += c * m.mod_neg[j];
      }
    } else {
      for (unsigned j = 0; j < n; ++j) {
        if (db[j] == 0) continue;
        for (unsigned i = 0; i < n; ++i) {
          if (da[i] == 0) continue;
          prod[i + j] = (prod[i + j] + mul_p(da[i], db[j])) % m.p;
        }
      }
      // X^n = -(m_0 + m_1 X + ... + m_{n-1} X^{n-1})
      for (unsigned k = 2 * n - 1; k-- > n;) {
        const u64 c = prod[k];
        if (c == 0) continue;
        for (unsigned j = 0; j < n; ++j) prod[k - n + j] = (prod[k - n + j] + mul_p(c, m.mod_neg[j])) % m.p;
      }
    }
    u64 out = 0;
    for (unsigned s = n; s-- > 0;) out = out * m.p + prod[s] % m.p;
    return FieldElem{out};
  }

  FieldElem inv(FieldElem a) const {
    if (a.index == 0) fail(ErrorCode::DivisionByZero, "inverse of zero");
    const Impl& m = *impl_;
    if (!m.log.empty()) {
      u64 k = m.log[a.index];
      return FieldElem{m.antilog[k == 0 ? 0 : m.order - 1 - k]};
    }
    return from_poly(inverse_mod(PolyFp(m.p, digits(a)), m.modulus));
  }

  /// a^e with 0^0 = 1.
  FieldElem pow(FieldElem a, u64 e) const noexcept {
    const Impl& m = *impl_;
    if (e == 0) return one();
    if (a.index == 0) return zero();
    if (!m.log.empty()) {
      u64 k = nt::mulmod(m.log[a.index], e % (m.order - 1), m.order - 1);
      return FieldElem{m.antilog[k]};
    }
    FieldElem result = one();
    FieldElem base = a;
    while (e > 0) {
      if (e & 1) result = mul_by_reduction(result, base);
      e >>= 1;
      if (e > 0) base = mul_by_reduction(base, base);
    }
    return result;
  }

  /// x^{p^j}
  FieldElem frobenius(FieldElem x, unsigned j) const {
    if (j >= n()) fail(ErrorCode::InvalidArgument, "frobenius power must satisfy 0 <= j < n");
    if (j == 0 || x.index == 0) return x;
    FieldElem y = x;
    for (unsigned k = 0; k < j; ++k) y = pow(y, p());
    return y;
  }

  /// Discrete log base the generator; tables only, x != 0.
  u64 log(FieldElem x) const {
    if (!has_tables()) fail(ErrorCode::InvalidArgument, "log requires tables");
    if (x.index == 0) fail(ErrorCode::DivisionByZero, "log of zero");
    return impl_->log[x.index];
  }

  std::string describe() const {
    return "F_" + std::to_string(p()) + "^" + std::to_string(n()) + " mod " + modulus().to_string();
  }

 private:
  struct Impl {
    u64 p = 2;
    unsigned n = 1;
    u64 order = 2;
    PolyFp modulus;
    bool small_p = true;
    std::vector<u64> pow_p;
    std::vector<u64> mod_low;
    std::vector<u64> mod_neg;  // (p - m_j) mod p
    u64 mod_bits = 0;          // p = 2: low coefficients as a bit mask
    bool lazy_reduce = true;

    FieldElem generator{};
    std::vector<std::uint32_t> log;
    std::vector<std::uint32_t> antilog;  // length order - 1

    std::vector<std::uint16_t> add_full;
    u64 lo_size = 0, hi_size = 0;
    std::vector<std::uint32_t> add_lo, add_hi;
  };

  explicit FieldCtx(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

  u64 mul_p(u64 a, u64 b) const noexcept {
    return impl_->small_p ? a * b % impl_->p : nt::mulmod(a, b, impl_->p);
  }

  void unpack(u64 idx, u64* out) const noexcept {
    const u64 p = impl_->p;
    for (unsigned s = 0; s < impl_->n; ++s) {
      out[s] = idx % p;
      idx /= p;
    }
  }

  u64 add_by_digits(u64 a, u64 b) const noexcept {
    const Impl& m = *impl_;
    u64 out = 0;
    for (unsigned s = 0; s < m.n; ++s) {
      u64 c = a % m.p + b % m.p;
      if (c >= m.p) c -= m.p;
      out += c * m.pow_p[s];
      a /= m.p;
      b /= m.p;
    }
    return out;
  }

  void build_add_tables(Impl& m) const {
    if (m.p == 2) return;
    constexpr u64 kFullLimit = 2048;
    constexpr u64 kHalfLimit = 2048;
    if (m.order <= kFullLimit) {
      m.add_full.resize(m.order * m.order);
      for (u64 a = 0; a < m.order; ++a)
        for (u64 b = 0; b < m.order; ++b)
          m.add_full[a * m.order + b] = static_cast<std::uint16_t>(add_by_digits(a, b));
      return;
    }
    const unsigned lo_digits = (m.n + 1) / 2;
    m.lo_size = m.pow_p[lo_digits];
    m.hi_size = m.pow_p[m.n - lo_digits];
    if (m.lo_size > kHalfLimit) {
      m.lo_size = m.hi_size = 0;
      return;
    }
    m.add_lo.resize(m.lo_size * m.lo_size);
    for (u64 a = 0; a < m.lo_size; ++a)
      for (u64 b = 0; b < m.lo_size; ++b)
        m.add_lo[a * m.lo_size + b] = static_cast<std::uint32_t>(add_by_digits(a, b));
    m.add_hi.resize(m.hi_size * m.hi_size);
    for (u64 a = 0; a < m.hi_size; ++a)
      for (u64 b = 0; b < m.hi_size; ++b)
        m.add_hi[a * m.hi_size + b] = static_cast<std::uint32_t>(add_by_digits(a, b));
  }

  void build_log_tables(Impl& m) const {
    const u64 group = m.order - 1;
    if (group == 1) {
      // F_2: the multiplicative group is trivial.
      m.generator = FieldElem{1};
      m.log.assign(2, 0);
      m.antilog.assign(1, 1);
      return;
    }
    const auto primes = nt::prime_divisors(group);
    FieldElem g{};
    for (u64 cand = 1; cand < m.order; ++cand) {
      bool primitive = true;
      for (u64 q : primes) {
        if (pow_by_reduction(FieldElem{cand}, group / q).index == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        g = FieldElem{cand};
        break;
      }
    }
    m.generator = g;
    m.log.assign(m.order, 0);
    m.antilog.assign(group, 0);
    FieldElem cur = one();
    for (u64 k = 0; k < group; ++k) {
      m.antilog[k] = static_cast<std::uint32_t>(cur.index);
      m.log[cur.index] = static_cast<std::uint32_t>(k);
      cur = mul_by_reduction(cur, g);
    }
  }

  FieldElem pow_by_reduction(FieldElem a, u64 e) const noexcept {
    FieldElem result = one();
    while (e > 0) {
      if (e & 1) result = mul_by_reduction(result, a);
      e >>= 1;
      if (e > 0) a = mul_by_reduction(a, a);
    }
    return result;
  }

  std::shared_ptr<const Impl> impl_;
};

inline FieldCtx make_field(u64 p, unsigned n, std::optional<PolyFp> modulus = std::nullopt,
                           TablePolicy policy = TablePolicy::Auto) {
  return FieldCtx::make(p, n, std::move(modulus), policy);
}

}  // namespace gapn
