#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "gapn/error.hpp"

namespace gapn::nt {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// base^exp if it does not exceed `limit`, otherwise nullopt.
inline std::optional<u64> checked_pow(u64 base, unsigned exp, u64 limit = ~u64{0}) {
  u128 acc = 1;
  for (unsigned i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > limit) return std::nullopt;
  }
  return static_cast<u64>(acc);
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

// Brent's variant of Pollard rho; n must be odd and composite.
inline u64 pollard_brent(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    const u64 m = 128;
    u64 r = 1;
    auto step = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = step(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = step(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_rec(u64 n, std::vector<u64>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  u64 f = pollard_brent(n);
  factor_rec(f, primes);
  factor_rec(n / f, primes);
}

}  // namespace detail

/// Prime factorization as sorted (prime, exponent) pairs. Trial division up to
/// 10^7, Pollard rho on whatever cofactor remains.
inline std::vector<std::pair<u64, unsigned>> factor(u64 n) {
  std::vector<u64> primes;
  constexpr u64 kTrialLimit = 10'000'000;
  for (u64 d = 2; d <= kTrialLimit && d * d <= n; d += (d == 2 ? 1 : 2)) {
    while (n % d == 0) {
      primes.push_back(d);
      n /= d;
    }
  }
  if (n > 1) detail::factor_rec(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 q : primes) {
    if (!out.empty() && out.back().first == q) {
      ++out.back().second;
    } else {
      out.emplace_back(q, 1);
    }
  }
  return out;
}

inline std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> out;
  for (auto [q, e] : factor(n)) out.push_back(q);
  return out;
}

inline u64 lcm(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

/// Order of an element g of a group of size `group_order`. `pow(e)` returns
/// g^e and `is_one` tests for the identity.
template <typename PowFn, typename IsOne>
u64 element_order(u64 group_order, PowFn&& pow, IsOne&& is_one) {
  u64 e = group_order;
  for (auto [q, mult] : factor(group_order)) {
    for (unsigned k = 0; k < mult; ++k) {
      if (is_one(pow(e / q))) {
        e /= q;
      } else {
        break;
      }
    }
  }
  return e;
}

}  // namespace gapn::nt
