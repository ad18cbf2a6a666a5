#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "gapn/field.hpp"
#include "support/oracles.hpp"

using namespace gapn;

TEST(FindIrreducible, MatchesTrialDivisionOracle) {
  for (u64 p : {2, 3, 5, 7}) {
    for (unsigned n = 1; n <= (p == 2 ? 7u : p == 3 ? 5u : 3u); ++n) {
      EXPECT_EQ(find_irreducible(p, n), oracle::smallest_irreducible(p, n)) << "p=" << p << " n=" << n;
    }
  }
}

TEST(FindIrreducible, KnownSmallCases) {
  EXPECT_EQ(find_irreducible(3, 2), PolyFp(3, {1, 0, 1}));     // X^2 + 1
  EXPECT_EQ(find_irreducible(2, 3), PolyFp(2, {1, 1, 0, 1}));  // X^3 + X + 1
  for (u64 p : {2, 3, 5, 7, 11}) EXPECT_EQ(find_irreducible(p, 1), PolyFp::x(p));
}

TEST(MakeField, Construction) {
  auto f3 = make_field(3, 1);
  EXPECT_EQ(f3.modulus(), PolyFp::x(3));
  EXPECT_EQ(f3.order(), 3u);
  auto f9 = make_field(3, 2);
  EXPECT_EQ(f9.modulus(), PolyFp(3, {1, 0, 1}));
  EXPECT_TRUE(f9.has_tables());
}

TEST(MakeField, Errors) {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;  // sentinel: nothing thrown
  };
  EXPECT_EQ(code_of([] { make_field(4, 2); }), ErrorCode::NotPrime);
  EXPECT_EQ(code_of([] { make_field(1, 2); }), ErrorCode::NotPrime);
  EXPECT_EQ(code_of([] { make_field(2, 49); }), ErrorCode::OrderTooLarge);
  EXPECT_EQ(code_of([] { make_field(3, 31); }), ErrorCode::OrderTooLarge);
  EXPECT_EQ(code_of([] { make_field(3, 2, PolyFp(3, {2, 0, 1})); }), ErrorCode::NotIrreducible);  // X^2 - 1
  EXPECT_EQ(code_of([] { make_field(3, 2, PolyFp(3, {1, 1})); }), ErrorCode::InvalidArgument);
  EXPECT_NO_THROW(make_field(2, 48, std::nullopt, TablePolicy::Never));
}

TEST(FieldOps, F9Examples) {
  auto f = make_field(3, 2);
  const FieldElem x{3};  // the class of X
  EXPECT_EQ(f.mul(x, x).index, 2u);              // X^2 = -1
  EXPECT_EQ(f.mul_by_reduction(x, x).index, 2u);
  EXPECT_EQ(f.frobenius(x, 1).index, 6u);        // X^3 = -X
  EXPECT_EQ(f.frobenius(x, 0), x);
  EXPECT_EQ(f.inv(f.one()), f.one());
  EXPECT_EQ(f.pow(f.zero(), 0), f.one());
  EXPECT_EQ(f.pow(f.zero(), 7), f.zero());
  EXPECT_THROW(f.inv(f.zero()), Error);
}

TEST(FieldOps, EmbedPrimeAndCharacteristic) {
  for (auto [p, n] : std::vector<std::pair<u64, unsigned>>{{3, 3}, {5, 2}, {7, 1}, {2, 5}}) {
    auto f = make_field(p, n);
    EXPECT_EQ(f.embed_prime(0), f.zero());
    EXPECT_EQ(f.embed_prime(1), f.one());
    FieldElem acc = f.zero();
    for (u64 i = 0; i < p; ++i) acc = f.add(acc, f.embed_prime(1));
    EXPECT_EQ(acc, f.zero());
    EXPECT_THROW(f.embed_prime(p), Error);
  }
}

TEST(FieldOps, DigitRoundTrip) {
  auto f = make_field(5, 3);
  for (u64 i = 0; i < f.order(); ++i) {
    auto d = f.digits(FieldElem{i});
    EXPECT_EQ(f.from_digits(d).index, i);
  }
}

namespace {

struct FieldCase {
  u64 p;
  unsigned n;
};

void check_axioms_exhaustive(const FieldCtx& f) {
  const u64 q = f.order();
  for (u64 a = 0; a < q; ++a) {
    const FieldElem A{a};
    EXPECT_EQ(f.add(A, f.neg(A)), f.zero());
    if (a != 0) {
      EXPECT_EQ(f.mul(A, f.inv(A)), f.one());
      EXPECT_EQ(f.pow(A, q - 1), f.one());
    }
    for (u64 b = 0; b < q; ++b) {
      const FieldElem B{b};
      ASSERT_EQ(f.add(A, B), f.add(B, A));
      ASSERT_EQ(f.mul(A, B), f.mul(B, A));
      ASSERT_EQ(f.mul(A, B), f.mul_by_reduction(A, B));
      const FieldElem ab_sum = f.add(A, B);
      const FieldElem ab_mul = f.mul(A, B);
      for (u64 c = 0; c < q; ++c) {
        const FieldElem C{c};
        const bool ok = f.add(ab_sum, C) == f.add(A, f.add(B, C)) && f.mul(ab_mul, C) == f.mul(A, f.mul(B, C)) &&
                        f.mul(A, f.add(B, C)) == f.add(ab_mul, f.mul(A, C));
        if (!ok) {
          FAIL() << f.describe() << " axiom failure at " << a << "," << b << "," << c;
        }
      }
    }
  }
}

void check_axioms_random(const FieldCtx& f, int trials) {
  std::mt19937_64 rng(1234 + f.order());
  auto any = [&] { return FieldElem{rng() % f.order()}; };
  for (int t = 0; t < trials; ++t) {
    const FieldElem a = any(), b = any(), c = any();
    ASSERT_EQ(f.add(a, b), f.add(b, a));
    ASSERT_EQ(f.mul(a, b), f.mul(b, a));
    ASSERT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
    ASSERT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
    ASSERT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
    ASSERT_EQ(f.sub(f.add(a, b), b), a);
    if (a.index != 0) {
      ASSERT_EQ(f.mul(a, f.inv(a)), f.one());
    }
    ASSERT_EQ(f.mul(a, b), f.mul_by_reduction(a, b));
  }
}

}  // namespace

TEST(FieldProperties, AxiomsExhaustiveSmallFields) {
  for (auto c : std::vector<FieldCase>{{2, 1}, {3, 1}, {2, 4}, {3, 2}, {3, 3}, {5, 2}, {7, 2}, {3, 4}, {5, 3}, {2, 8}, {3, 5}}) {
    check_axioms_exhaustive(make_field(c.p, c.n));
  }
}

TEST(FieldProperties, AxiomsExhaustive3to6) { check_axioms_exhaustive(make_field(3, 6)); }

TEST(FieldProperties, AxiomsRandomLargeFields) {
  for (auto c : std::vector<FieldCase>{{3, 7}, {3, 10}, {5, 6}, {2, 20}, {7, 5}, {3, 13}}) {
    check_axioms_random(make_field(c.p, c.n), 100000);
  }
  // Without tables: reduction-based multiplication and digit-loop addition.
  check_axioms_random(make_field(3, 20, std::nullopt, TablePolicy::Never), 100000);
  check_axioms_random(make_field(2, 45, std::nullopt, TablePolicy::Never), 100000);
  check_axioms_random(make_field(1009, 4, std::nullopt, TablePolicy::Never), 100000);
}

TEST(FieldProperties, LogTablesConsistent) {
  for (auto c : std::vector<FieldCase>{{3, 2}, {3, 5}, {5, 3}, {2, 9}, {7, 3}, {2, 1}, {13, 1}}) {
    auto f = make_field(c.p, c.n);
    ASSERT_TRUE(f.has_tables());
    const FieldElem g = *f.generator();
    const u64 group = f.order() - 1;
    for (u64 x = 1; x < f.order(); ++x) EXPECT_EQ(f.pow(g, f.log(FieldElem{x})).index, x);
    // generator has order exactly p^n - 1
    auto no_table = make_field(c.p, c.n, std::nullopt, TablePolicy::Never);
    if (group > 1) {
      for (u64 r : nt::prime_divisors(group)) EXPECT_NE(no_table.pow(g, group / r), no_table.one());
    }
    EXPECT_EQ(no_table.pow(g, group), no_table.one());
  }
}

TEST(FieldProperties, FrobeniusAdditiveAndConsistent) {
  for (auto c : std::vector<FieldCase>{{3, 2}, {3, 3}, {3, 5}, {5, 3}, {2, 6}}) {
    auto f = make_field(c.p, c.n);
    for (u64 a = 0; a < f.order(); ++a) {
      const FieldElem A{a};
      EXPECT_EQ(f.frobenius(A, 1), f.pow(A, c.p));
      FieldElem back = f.frobenius(A, 1);
      for (unsigned k = 1; k < c.n; ++k) back = f.frobenius(back, 1);
      EXPECT_EQ(back, A);
      for (u64 b = 0; b < f.order(); ++b) {
        const FieldElem B{b};
        ASSERT_EQ(f.frobenius(f.add(A, B), 1), f.add(f.frobenius(A, 1), f.frobenius(B, 1)));
      }
    }
    for (unsigned j = 0; j < c.n; ++j) {
      for (u64 a = 0; a < f.order(); a += 7) {
        EXPECT_EQ(f.frobenius(f.frobenius(FieldElem{a}, j), (c.n - j) % c.n), FieldElem{a});
      }
    }
  }
}
