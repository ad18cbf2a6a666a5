#pragma once

// Dense univariate polynomials over a prime field F_p, with the pieces needed
// for criterion work: Euclid, Rabin irreducibility, Cantor-Zassenhaus
// factorization and multiplicative orders of roots.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gapn/error.hpp"
#include "gapn/numtheory.hpp"

namespace gapn {

using u64 = std::uint64_t;

class PolyFp {
 public:
  PolyFp() = default;

  /// Coefficients lowest degree first. Values are reduced mod p and trailing
  /// zeros are dropped.
  PolyFp(u64 p, std::vector<u64> coeffs) : p_(p), coeffs_(std::move(coeffs)) {
    if (p_ < 2) fail(ErrorCode::InvalidArgument, "polynomial modulus p must be >= 2");
    for (auto& c : coeffs_) c %= p_;
    trim();
  }

  static PolyFp zero(u64 p) { return PolyFp(p, {}); }
  static PolyFp constant(u64 p, u64 c) { return PolyFp(p, {c}); }
  static PolyFp one(u64 p) { return constant(p, 1); }
  static PolyFp monomial(u64 p, std::size_t degree, u64 c = 1) {
    std::vector<u64> v(degree + 1, 0);
    v[degree] = c;
    return PolyFp(p, std::move(v));
  }
  static PolyFp x(u64 p) { return monomial(p, 1); }
  /// X^n - 1
  static PolyFp x_pow_minus_one(u64 p, std::size_t n) {
    std::vector<u64> v(n + 1, 0);
    v[n] = 1;
    v[0] = (v[0] + p - 1) % p;
    return PolyFp(p, std::move(v));
  }

  u64 p() const noexcept { return p_; }
  const std::vector<u64>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  u64 coeff(std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0; }
  u64 lead() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }
  bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == 1; }
  bool is_one() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == 1; }
  bool is_constant() const noexcept { return coeffs_.size() <= 1; }

  u64 eval(u64 x) const {
    u64 acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc = (nt::mulmod(acc, x % p_, p_) + *it) % p_;
    }
    return acc;
  }

  PolyFp scaled(u64 c) const {
    std::vector<u64> v(coeffs_);
    for (auto& a : v) a = nt::mulmod(a, c % p_, p_);
    return PolyFp(p_, std::move(v));
  }

  PolyFp monic() const {
    if (is_zero()) return *this;
    return scaled(inverse_mod(lead()));
  }

  PolyFp derivative() const {
    std::vector<u64> v;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) v.push_back(nt::mulmod(coeffs_[i], i % p_, p_));
    return PolyFp(p_, std::move(v));
  }

  u64 inverse_mod(u64 a) const {
    a %= p_;
    if (a == 0) fail(ErrorCode::DivisionByZero, "inverse of zero in F_p");
    return nt::powmod(a, p_ - 2, p_);
  }

  friend PolyFp operator+(const PolyFp& a, const PolyFp& b) {
    check_same(a, b);
    std::vector<u64> v(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (a.coeff(i) + b.coeff(i)) % a.p_;
    return PolyFp(a.p_, std::move(v));
  }
  friend PolyFp operator-(const PolyFp& a, const PolyFp& b) {
    check_same(a, b);
    std::vector<u64> v(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (a.coeff(i) + a.p_ - b.coeff(i)) % a.p_;
    return PolyFp(a.p_, std::move(v));
  }
  friend PolyFp operator*(const PolyFp& a, const PolyFp& b) {
    check_same(a, b);
    if (a.is_zero() || b.is_zero()) return zero(a.p_);
    std::vector<u64> v(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
        v[i + j] = (v[i + j] + nt::mulmod(a.coeffs_[i], b.coeffs_[j], a.p_)) % a.p_;
      }
    }
    return PolyFp(a.p_, std::move(v));
  }

  friend bool operator==(const PolyFp& a, const PolyFp& b) = default;

  /// Human form, e.g. "X^2 + 2X + 1"; coefficients printed as residues in [0, p).
  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      u64 c = coeffs_[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      if (!first) os << " + ";
      first = false;
      if (i == 0 || c != 1) os << c;
      if (i >= 1) os << 'X';
      if (i >= 2) os << '^' << i;
    }
    return os.str();
  }

 private:
  static void check_same(const PolyFp& a, const PolyFp& b) {
    if (a.p_ != b.p_) fail(ErrorCode::InvalidArgument, "polynomials over different prime fields");
  }
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  u64 p_ = 2;
  std::vector<u64> coeffs_;
};

/// Order used for canonical factor lists and the irreducible search: by degree,
/// then lexicographically on (c_{d-1}, ..., c_0).
inline bool poly_less(const PolyFp& a, const PolyFp& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    auto k = static_cast<std::size_t>(i);
    if (a.coeff(k) != b.coeff(k)) return a.coeff(k) < b.coeff(k);
  }
  return false;
}

inline std::pair<PolyFp, PolyFp> divrem(const PolyFp& a, const PolyFp& b) {
  if (b.is_zero()) fail(ErrorCode::DivisionByZero, "polynomial division by zero");
  if (a.p() != b.p()) fail(ErrorCode::InvalidArgument, "polynomials over different prime fields");
  const u64 p = a.p();
  if (a.degree() < b.degree()) return {PolyFp::zero(p), a};
  std::vector<u64> r(a.coeffs());
  const auto& bc = b.coeffs();
  const std::size_t db = bc.size() - 1;
  const u64 inv_lead = b.inverse_mod(b.lead());
  std::vector<u64> q(r.size() - db, 0);
  for (std::size_t k = r.size(); k-- > db;) {
    u64 c = nt::mulmod(r[k], inv_lead, p);
    if (c == 0) continue;
    q[k - db] = c;
    for (std::size_t j = 0; j <= db; ++j) {
      u64 sub = nt::mulmod(c, bc[j], p);
      r[k - db + j] = (r[k - db + j] + p - sub) % p;
    }
  }
  r.resize(db);
  return {PolyFp(p, std::move(q)), PolyFp(p, std::move(r))};
}

inline PolyFp operator%(const PolyFp& a, const PolyFp& b) { return divrem(a, b).second; }
inline PolyFp operator/(const PolyFp& a, const PolyFp& b) { return divrem(a, b).first; }

/// Monic gcd by Euclid.
inline PolyFp gcd(PolyFp a, PolyFp b) {
  if (a.is_zero() && b.is_zero()) fail(ErrorCode::BothZero, "gcd(0, 0) is undefined");
  while (!b.is_zero()) {
    PolyFp r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

inline PolyFp mulmod(const PolyFp& a, const PolyFp& b, const PolyFp& m) { return (a * b) % m; }

inline PolyFp powmod(PolyFp base, u64 exp, const PolyFp& m) {
  PolyFp result = PolyFp::one(m.p()) % m;
  base = base % m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    exp >>= 1;
    if (exp > 0) base = mulmod(base, base, m);
  }
  return result;
}

/// a^{-1} mod m by the extended Euclidean algorithm; gcd(a, m) must be 1.
inline PolyFp inverse_mod(const PolyFp& a, const PolyFp& m) {
  const u64 p = m.p();
  PolyFp r0 = m, r1 = a % m;
  PolyFp s0 = PolyFp::zero(p), s1 = PolyFp::one(p);
  while (!r1.is_zero()) {
    auto [q, r] = divrem(r0, r1);
    PolyFp s = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.degree() != 0) fail(ErrorCode::DivisionByZero, "polynomial is not invertible modulo m");
  return (s0.scaled(r0.inverse_mod(r0.lead()))) % m;
}

/// Multiplicity of `factor` in `f` (f nonzero, factor of positive degree).
inline unsigned multiplicity(PolyFp f, const PolyFp& factor) {
  unsigned k = 0;
  while (!f.is_zero()) {
    auto [q, r] = divrem(f, factor);
    if (!r.is_zero()) break;
    f = std::move(q);
    ++k;
  }
  return k;
}

/// Rabin's test: X^{p^n} = X mod f and gcd(X^{p^{n/r}} - X, f) = 1 for every
/// prime r dividing n.
inline bool is_irreducible(const PolyFp& f_in) {
  if (f_in.degree() < 1) fail(ErrorCode::InvalidArgument, "irreducibility needs degree >= 1");
  const PolyFp f = f_in.monic();
  const auto n = static_cast<u64>(f.degree());
  if (n == 1) return true;
  const u64 p = f.p();
  const PolyFp x = PolyFp::x(p) % f;
  // frob[k] = X^{p^k} mod f
  std::vector<PolyFp> frob{x};
  for (u64 k = 1; k <= n; ++k) frob.push_back(powmod(frob.back(), p, f));
  if (frob[n] != x) return false;
  for (u64 r : nt::prime_divisors(n)) {
    if (!gcd(frob[n / r] - x, f).is_one()) return false;
  }
  return true;
}

struct Factorization {
  u64 unit = 1;
  std::vector<std::pair<PolyFp, unsigned>> factors;

  PolyFp expand(u64 p) const {
    PolyFp acc = PolyFp::constant(p, unit);
    for (const auto& [h, mult] : factors) {
      for (unsigned k = 0; k < mult; ++k) acc = acc * h;
    }
    return acc;
  }
};

namespace detail {

// Square-free decomposition of a monic polynomial: (square-free part, multiplicity).
inline void squarefree(const PolyFp& f, unsigned scale, std::vector<std::pair<PolyFp, unsigned>>& out) {
  const u64 p = f.p();
  if (f.degree() < 1) return;
  PolyFp c = gcd(f, f.derivative());
  PolyFp w = f / c;
  unsigned i = 1;
  while (!w.is_one()) {
    PolyFp y = gcd(w, c);
    PolyFp fac = w / y;
    if (fac.degree() > 0) out.emplace_back(fac.monic(), i * scale);
    w = y;
    c = c / y;
    ++i;
  }
  if (!c.is_one()) {
    // c is a p-th power: c(X) = g(X^p).
    std::vector<u64> root;
    for (std::size_t k = 0; k < c.coeffs().size(); k += p) root.push_back(c.coeffs()[k]);
    squarefree(PolyFp(p, std::move(root)).monic(), scale * static_cast<unsigned>(p), out);
  }
}

inline std::vector<std::pair<PolyFp, unsigned>> distinct_degree(PolyFp f) {
  const u64 p = f.p();
  std::vector<std::pair<PolyFp, unsigned>> out;
  PolyFp h = PolyFp::x(p) % f;
  const PolyFp x = PolyFp::x(p);
  for (unsigned i = 1; f.degree() >= 2 * static_cast<int>(i); ++i) {
    h = powmod(h, p, f);
    PolyFp g = gcd(f, h - x);
    if (!g.is_one()) {
      out.emplace_back(g, i);
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.emplace_back(f, static_cast<unsigned>(f.degree()));
  return out;
}

inline PolyFp random_poly(u64 p, int degree_below, std::mt19937_64& rng) {
  std::vector<u64> v(static_cast<std::size_t>(degree_below));
  for (auto& c : v) c = rng() % p;
  return PolyFp(p, std::move(v));
}

// Cantor-Zassenhaus splitting of a product of distinct irreducibles of degree d.
inline void equal_degree(const PolyFp& g, unsigned d, std::mt19937_64& rng, std::vector<PolyFp>& out) {
  if (g.degree() == static_cast<int>(d)) {
    out.push_back(g.monic());
    return;
  }
  const u64 p = g.p();
  for (;;) {
    PolyFp h = random_poly(p, g.degree(), rng);
    if (h.degree() < 1) continue;
    PolyFp u;
    if (p == 2) {
      // Trace map h + h^2 + ... + h^{2^{d-1}}.
      PolyFp t = h % g;
      u = t;
      for (unsigned k = 1; k < d; ++k) {
        t = mulmod(t, t, g);
        u = u + t;
      }
    } else {
      // h^{(p^d - 1)/2} = (h^{1 + p + ... + p^{d-1}})^{(p-1)/2}
      PolyFp hk = h % g;
      PolyFp acc = hk;
      for (unsigned k = 1; k < d; ++k) {
        hk = powmod(hk, p, g);
        acc = mulmod(acc, hk, g);
      }
      u = powmod(acc, (p - 1) / 2, g) - PolyFp::one(p);
    }
    if (u.is_zero()) continue;
    PolyFp split = gcd(g, u);
    if (split.degree() > 0 && split.degree() < g.degree()) {
      equal_degree(split, d, rng, out);
      equal_degree(g / split, d, rng, out);
      return;
    }
  }
}

}  // namespace detail

/// Full factorization into monic irreducibles, sorted by poly_less. The random
/// stream for equal-degree splitting is seeded with a fixed constant.
inline Factorization factorize(const PolyFp& f) {
  if (f.is_zero()) fail(ErrorCode::InvalidArgument, "cannot factor the zero polynomial");
  Factorization result;
  result.unit = f.lead();
  std::mt19937_64 rng(0x5eed'9a9e'00d1'2024ULL);
  std::vector<std::pair<PolyFp, unsigned>> sqf;
  detail::squarefree(f.monic(), 1, sqf);
  for (const auto& [part, mult] : sqf) {
    for (const auto& [chunk, d] : detail::distinct_degree(part)) {
      std::vector<PolyFp> pieces;
      detail::equal_degree(chunk, d, rng, pieces);
      for (auto& piece : pieces) result.factors.emplace_back(std::move(piece), mult);
    }
  }
  std::sort(result.factors.begin(), result.factors.end(),
            [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  // Equal irreducibles can come from different square-free layers.
  std::vector<std::pair<PolyFp, unsigned>> merged;
  for (auto& [h, m] : result.factors) {
    if (!merged.empty() && merged.back().first == h) {
      merged.back().second += m;
    } else {
      merged.emplace_back(std::move(h), m);
    }
  }
  result.factors = std::move(merged);
  return result;
}

/// Multiplicative order of a root of the monic irreducible h, i.e. the order of
/// X in F_p[X]/(h).
inline u64 root_order(const PolyFp& h) {
  if (!h.is_monic() || h.degree() < 1) fail(ErrorCode::InvalidArgument, "root_order needs a monic polynomial of degree >= 1");
  const u64 p = h.p();
  if (h == PolyFp::x(p)) fail(ErrorCode::RootIsZero, "X has the root 0, which has no multiplicative order");
  constexpr int kMaxDegree = 24;
  if (h.degree() > kMaxDegree) fail(ErrorCode::FactorizationTooLarge, "root_order supports degree <= 24");
  auto group = nt::checked_pow(p, static_cast<unsigned>(h.degree()), u64{1} << 62);
  if (!group) fail(ErrorCode::FactorizationTooLarge, "p^m - 1 exceeds the factorization budget");
  if (!is_irreducible(h)) fail(ErrorCode::InvalidArgument, "root_order needs an irreducible polynomial");
  const PolyFp x = PolyFp::x(p);
  return nt::element_order(
      *group - 1, [&](u64 e) { return powmod(x, e, h); }, [](const PolyFp& v) { return v.is_one(); });
}

}  // namespace gapn
