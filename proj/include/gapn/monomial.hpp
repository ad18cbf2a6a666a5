#pragma once

// Exponent analytics for x^d: the digit polynomial D(X) of a p-weight-p
// exponent, the gcd and circulant-rank deciders, exceptionality profiles and
// the named families.

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gapn/error.hpp"
#include "gapn/exponent.hpp"
#include "gapn/linalg.hpp"
#include "gapn/numtheory.hpp"
#include "gapn/polyfp.hpp"

namespace gapn {

namespace detail {

inline void require_normalized_weight_p(u64 d, u64 p) {
  if (p_weight(d, p) != p) {
    fail(ErrorCode::WrongWeight, "exponent " + std::to_string(d) + " does not have p-weight " + std::to_string(p));
  }
  if (d % p == 0) fail(ErrorCode::NotNormalized, "exponent " + std::to_string(d) + " has a zero constant digit");
}

inline u64 order_of(u64 p, unsigned n) {
  auto q = nt::checked_pow(p, n, u64{1} << 62);
  if (!q) fail(ErrorCode::OrderTooLarge, "p^n too large");
  return *q;
}

}  // namespace detail

/// D(X) = sum_s d_s X^s over the n digit positions of d (requires d < p^n).
inline PolyFp build_D(u64 d, u64 p, unsigned n) {
  detail::require_normalized_weight_p(d, p);
  return PolyFp(p, p_adic_digits(d, p, n));
}

/// D(X) over the intrinsic digit positions of d.
inline PolyFp build_D(u64 d, u64 p) {
  detail::require_normalized_weight_p(d, p);
  return PolyFp(p, p_adic_digits(d, p));
}

struct CriterionReport {
  u64 d = 0;
  u64 p = 0;
  unsigned n = 0;
  PolyFp D;
  /// gcd(D, X^n - 1)
  PolyFp g;
  bool is_gapn = false;
  /// Irreducible factors of g other than X - 1.
  std::vector<PolyFp> offending_factors;
  /// Multiplicity of X - 1 in g; GAPN needs exactly 1.
  unsigned unit_root_multiplicity = 0;
};

/// x^d is GAPN on F_{p^n} iff gcd(D, X^n - 1) = X - 1. When p does not divide
/// n this is the root condition "D(b) != 0 for b^n = 1, b != 1". When p | n,
/// X^n - 1 has X - 1 as a repeated factor and a repeated root 1 of D also
/// enlarges the kernel of the linearized map, so the multiplicity is checked.
inline CriterionReport criterion_gapn(u64 d, u64 p, unsigned n) {
  CriterionReport r;
  r.d = d;
  r.p = p;
  r.n = n;
  r.D = build_D(d, p, n);
  r.g = gcd(r.D, PolyFp::x_pow_minus_one(p, n));
  const PolyFp x_minus_one = PolyFp::x_pow_minus_one(p, 1);
  for (const auto& [h, mult] : factorize(r.g).factors) {
    if (h == x_minus_one) {
      r.unit_root_multiplicity = mult;
    } else {
      r.offending_factors.push_back(h);
    }
  }
  r.is_gapn = r.offending_factors.empty() && r.unit_root_multiplicity == 1;
  return r;
}

/// Rank over F_p of the n x n circulant with first column (d_0, ..., d_{n-1}).
inline unsigned circulant_rank(u64 d, u64 p, unsigned n) {
  detail::require_normalized_weight_p(d, p);
  const auto alpha = p_adic_digits(d, p, n);
  MatrixFp m(n, std::vector<u64>(n, 0));
  for (unsigned r = 0; r < n; ++r)
    for (unsigned c = 0; c < n; ++c) m[r][c] = alpha[(r + n - c) % n];
  return static_cast<unsigned>(rank_mod_p(std::move(m), p));
}

struct ExceptionalProfile {
  u64 d = 0;
  u64 p = 0;
  PolyFp D;
  Factorization factorization;
  /// Distinct multiplicative orders of the roots of D other than 1, sorted.
  std::vector<u64> root_orders;
  /// Multiplicity of X - 1 in D; at least 1 because D(1) = p = 0.
  unsigned unit_root_multiplicity = 0;
  /// Smallest n with p^n > d.
  unsigned min_n = 1;
  /// Smallest n >= min_n on which x^d is GAPN.
  unsigned witness_n = 0;

  /// GAPN on F_{p^n}: no root order divides n, and if p | n then 1 is a simple
  /// root of D.
  bool gapn_on(unsigned n) const {
    if (n < min_n) fail(ErrorCode::ExponentOutOfRange, "dimension too small: need p^n > d");
    for (u64 nj : root_orders) {
      if (n % nj == 0) return false;
    }
    return unit_root_multiplicity == 1 || n % p != 0;
  }

  std::vector<unsigned> gapn_dimensions(unsigned max_n) const {
    std::vector<unsigned> out;
    for (unsigned n = min_n; n <= max_n; ++n) {
      if (gapn_on(n)) out.push_back(n);
    }
    return out;
  }
};

inline ExceptionalProfile exceptional_profile(u64 d, u64 p) {
  ExceptionalProfile prof;
  prof.d = d;
  prof.p = p;
  prof.D = build_D(d, p);
  prof.factorization = factorize(prof.D);
  const PolyFp x_minus_one = PolyFp::x_pow_minus_one(p, 1);
  std::set<u64> orders;
  for (const auto& [h, mult] : prof.factorization.factors) {
    if (h == x_minus_one) {
      prof.unit_root_multiplicity = mult;
      continue;
    }
    orders.insert(root_order(h));
  }
  prof.root_orders.assign(orders.begin(), orders.end());
  prof.min_n = static_cast<unsigned>(p_adic_digits(d, p).size());
  if (prof.min_n == 0) prof.min_n = 1;
  // A prime n larger than every root order and different from p always works.
  for (unsigned n = prof.min_n;; ++n) {
    if (prof.gapn_on(n)) {
      prof.witness_n = n;
      break;
    }
  }
  return prof;
}

/// Smallest prime q such that x^d stays GAPN on F_{p^{qn}}: q is coprime to
/// every root order, and q != p when 1 is a repeated root of D.
inline u64 extension_prime(const ExceptionalProfile& profile, unsigned n) {
  if (!profile.gapn_on(n)) fail(ErrorCode::InvalidArgument, "exponent is not GAPN on the given dimension");
  for (u64 q = 2;; ++q) {
    if (!nt::is_prime(q)) continue;
    if (profile.unit_root_multiplicity > 1 && q == profile.p) continue;
    bool coprime = std::all_of(profile.root_orders.begin(), profile.root_orders.end(),
                               [&](u64 nj) { return std::gcd(nj, q) == 1; });
    if (coprime) return q;
  }
}

// Families.

inline u64 gold_exponent(u64 p, unsigned i) { return *nt::checked_pow(p, i) + p - 1; }

struct WelchExponent {
  u64 d = 0;
  unsigned t = 0;
  bool predicted = false;
};

/// d = p^t + p + 1 with t = (n - 1)/2 for odd n and n/2 for even n; predicted
/// GAPN exactly for p = 3, or p = 2 with n odd.
inline WelchExponent welch_exponent(u64 p, unsigned n) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "Welch exponent needs n >= 2");
  WelchExponent w;
  w.t = n % 2 == 1 ? (n - 1) / 2 : n / 2;
  w.d = *nt::checked_pow(p, w.t) + p + 1;
  w.predicted = (p == 2 && n % 2 == 1) || p == 3;
  return w;
}

/// {p^n - p^j - 1 : 0 <= j < n}, the exponents of p-weight n(p-1) - 1.
inline std::vector<u64> max_degree_family(u64 p, unsigned n) {
  if (p == 2) fail(ErrorCode::EvenCharacteristic, "maximum-degree family is stated for odd p");
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  const u64 q = detail::order_of(p, n);
  std::vector<u64> out;
  for (unsigned j = 0; j < n; ++j) {
    u64 d = q - *nt::checked_pow(p, j) - 1;
    if (p_weight(d, p) != n * (p - 1) - 1) throw std::logic_error("maximum-degree exponent has unexpected weight");
    out.push_back(d);
  }
  return out;
}

/// Names of the families whose cyclotomic coset contains d on F_{p^n}.
inline std::vector<std::string> identify_family(u64 p, unsigned n, u64 d) {
  std::vector<std::string> out;
  const u64 q = detail::order_of(p, n);
  if (d < 1 || d >= q - 1) return out;
  const u64 rep = coset_rep(d, p, n);
  for (unsigned i = 1; i < n; ++i) {
    u64 g = gold_exponent(p, i);
    if (g < q - 1 && coset_rep(g, p, n) == rep) out.push_back("Gold (i=" + std::to_string(i) + ")");
  }
  if (n >= 2) {
    auto w = welch_exponent(p, n);
    if (w.d < q - 1 && coset_rep(w.d, p, n) == rep) out.push_back("Welch (t=" + std::to_string(w.t) + ")");
  }
  if (q > 3 && coset_rep(q - 2, p, n) == rep) out.push_back("inverse class");
  return out;
}

}  // namespace gapn
