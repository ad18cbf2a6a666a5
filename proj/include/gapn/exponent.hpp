#pragma once

// Base-p digit utilities for monomial exponents.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "gapn/error.hpp"
#include "gapn/numtheory.hpp"

namespace gapn {

using u64 = std::uint64_t;

/// Intrinsic base-p digits of d, least significant first, no trailing zeros.
inline std::vector<u64> p_adic_digits(u64 d, u64 p) {
  std::vector<u64> out;
  while (d > 0) {
    out.push_back(d % p);
    d /= p;
  }
  return out;
}

/// Exactly n digits; requires d < p^n.
inline std::vector<u64> p_adic_digits(u64 d, u64 p, unsigned n) {
  std::vector<u64> out(n, 0);
  for (unsigned s = 0; s < n; ++s) {
    out[s] = d % p;
    d /= p;
  }
  if (d != 0) fail(ErrorCode::ExponentOutOfRange, "exponent needs more than n base-p digits");
  return out;
}

inline u64 p_weight(u64 d, u64 p) {
  u64 w = 0;
  while (d > 0) {
    w += d % p;
    d /= p;
  }
  return w;
}

/// min{ d p^k mod (p^n - 1) : 0 <= k < n }
inline u64 coset_rep(u64 d, u64 p, unsigned n) {
  const u64 q1 = *nt::checked_pow(p, n) - 1;
  if (q1 == 0) return 0;
  u64 cur = d % q1, best = cur;
  for (unsigned k = 1; k < n; ++k) {
    cur = nt::mulmod(cur, p, q1);
    best = std::min(best, cur);
  }
  return best;
}

inline unsigned coset_size(u64 d, u64 p, unsigned n) {
  const u64 q1 = *nt::checked_pow(p, n) - 1;
  const u64 start = d % q1;
  u64 cur = nt::mulmod(start, p, q1);
  unsigned size = 1;
  while (cur != start) {
    cur = nt::mulmod(cur, p, q1);
    ++size;
  }
  return size;
}

/// The orbit of d under multiplication by p mod p^n - 1, sorted.
inline std::vector<u64> coset_members(u64 d, u64 p, unsigned n) {
  const u64 q1 = *nt::checked_pow(p, n) - 1;
  const u64 start = d % q1;
  std::vector<u64> out{start};
  for (u64 cur = nt::mulmod(start, p, q1); cur != start; cur = nt::mulmod(cur, p, q1)) out.push_back(cur);
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_normalized_weight_p(u64 d, u64 p) { return d % p != 0 && p_weight(d, p) == p; }

/// d / p^{i_1}, where i_1 is the lowest nonzero digit position; d must have
/// p-weight exactly p.
inline u64 normalize_weight_p(u64 d, u64 p) {
  if (p_weight(d, p) != p) fail(ErrorCode::WrongWeight, "exponent " + std::to_string(d) + " does not have p-weight p");
  while (d % p == 0) d /= p;
  return d;
}

/// Exponent of x^d on F_{p^n}, with its digit data and coset key.
struct Exponent {
  u64 d = 0;
  u64 p = 0;
  unsigned n = 0;
  std::vector<u64> digits;
  u64 weight = 0;
  u64 coset_rep = 0;

  static Exponent make(u64 d, u64 p, unsigned n) {
    auto order = nt::checked_pow(p, n, u64{1} << 62);
    if (!order) fail(ErrorCode::OrderTooLarge, "p^n too large");
    if (d < 1 || d >= *order - 1) fail(ErrorCode::ExponentOutOfRange, "exponent must satisfy 1 <= d < p^n - 1");
    Exponent e;
    e.d = d;
    e.p = p;
    e.n = n;
    e.digits = p_adic_digits(d, p, n);
    for (u64 c : e.digits) e.weight += c;
    e.coset_rep = gapn::coset_rep(d, p, n);
    return e;
  }
};

}  // namespace gapn
