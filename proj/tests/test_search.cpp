#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "gapn/search.hpp"

using namespace gapn;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

std::set<u64> gapn_exponents(const SearchResult& r) {
  std::set<u64> out;
  for (const auto& c : r.gapn_cosets) {
    for (u64 d : coset_members(c.coset_rep, r.p, r.n)) out.insert(d);
  }
  return out;
}

std::set<u64> brute_gapn_exponents(u64 p, unsigned n) {
  auto ctx = make_field(p, n);
  std::set<u64> out;
  for (u64 d = 2; d + 1 < ctx.order(); ++d) {
    if (differential_spectrum(monomial_table(ctx, d), SpectrumMode::VerdictOnly).is_gapn) out.insert(d);
  }
  return out;
}

SearchJob job(u64 p, unsigned n, SearchMode mode = SearchMode::Exhaustive) {
  SearchJob j;
  j.p = p;
  j.n = n;
  j.mode = mode;
  return j;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("gapn_cache_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST(Cosets, CompletenessAndMinimality) {
  for (auto [p, n] : std::vector<std::pair<u64, unsigned>>{{3, 2}, {3, 4}, {3, 6}, {5, 3}, {2, 8}, {7, 3}, {2, 10}}) {
    const u64 q = *nt::checked_pow(p, n);
    std::vector<int> hits(q - 1, 0);
    u64 total = 0;
    for (const auto& c : coset_representatives(p, n)) {
      auto members = coset_members(c.rep, p, n);
      ASSERT_EQ(members.front(), c.rep);
      ASSERT_EQ(members.size(), c.size);
      ASSERT_EQ(c.weight, p_weight(c.rep, p));
      for (u64 d : members) ++hits[d];
      total += c.size;
    }
    // plus the coset of 1 (size n), {0} and the exponent p^n - 1
    EXPECT_EQ(total + n + 2, q);
    for (u64 d : coset_members(1, p, n)) ++hits[d];
    ++hits[0];
    for (u64 d = 0; d < q - 1; ++d) ASSERT_EQ(hits[d], 1) << "p=" << p << " n=" << n << " d=" << d;
  }
}

TEST(RunSearch, F9) {
  auto r = run_search(job(3, 2));
  EXPECT_EQ(gapn_exponents(r), (std::set<u64>{5, 7}));
  ASSERT_EQ(r.gapn_cosets.size(), 1u);
  EXPECT_EQ(r.gapn_cosets[0].coset_rep, 5u);
  EXPECT_EQ(r.gapn_cosets[0].deciders, (std::vector<std::string>{"criterion", "circulant-rank"}));
}

TEST(RunSearch, F81OddWeightsAndInverse) {
  auto r = run_search(job(3, 4));
  bool inverse = false;
  for (const auto& c : r.gapn_cosets) {
    EXPECT_EQ(c.weight % 2, 1u);
    EXPECT_GE(c.weight, 3u);
    if (c.coset_rep == coset_rep(79, 3, 4)) inverse = true;
    if (c.weight == 3) {
      EXPECT_EQ(c.deciders.size(), 2u);
    }
  }
  EXPECT_TRUE(inverse);
}

TEST(RunSearch, MatchesUnfilteredBruteForce) {
  for (auto [p, n] : std::vector<std::pair<u64, unsigned>>{{3, 3}, {3, 4}, {3, 5}, {5, 2}, {5, 3}, {2, 6}, {7, 2}}) {
    auto expected = brute_gapn_exponents(p, n);
    auto filtered = run_search(job(p, n));
    EXPECT_EQ(gapn_exponents(filtered), expected) << "p=" << p << " n=" << n;
    SearchJob raw = job(p, n);
    raw.filters.skip_even_weight = false;
    raw.filters.skip_low_weight = false;
    raw.use_fast_path = false;
    auto unfiltered = run_search(raw);
    EXPECT_EQ(gapn_exponents(unfiltered), expected) << "p=" << p << " n=" << n;
    EXPECT_TRUE(unfiltered.filtered.empty());
    EXPECT_EQ(unfiltered.decided, unfiltered.scanned);
  }
}

TEST(RunSearch, DeterministicAcrossWorkers) {
  SearchJob a = job(3, 6, SearchMode::Conjecture);
  SearchJob b = a;
  b.jobs = 3;
  auto ra = run_search(a);
  auto rb = run_search(b);
  ASSERT_EQ(ra.gapn_cosets.size(), rb.gapn_cosets.size());
  for (std::size_t i = 0; i < ra.gapn_cosets.size(); ++i) {
    EXPECT_EQ(ra.gapn_cosets[i].coset_rep, rb.gapn_cosets[i].coset_rep);
    EXPECT_EQ(ra.gapn_cosets[i].deciders, rb.gapn_cosets[i].deciders);
  }
  EXPECT_EQ(ra.filtered, rb.filtered);
  EXPECT_EQ(ra.conjecture_holds, rb.conjecture_holds);
}

TEST(RunSearch, FilterSoundness) {
  for (unsigned n : {4u, 5u}) {
    SearchJob j = job(3, n);
    j.filters.verify_filters = true;
    auto r = run_search(j);
    ASSERT_TRUE(r.filter_check);
    u64 filtered = r.filtered["low_weight"] + r.filtered["even_weight"];
    EXPECT_EQ(r.filter_check->sampled, std::min<u64>(100, filtered));
    EXPECT_EQ(r.filter_check->confirmed, r.filter_check->sampled);
    EXPECT_TRUE(r.filter_check->violations.empty());
  }
}

TEST(RunSearch, EvenWeightFilterOnlyForOddP) {
  // Gold exponents 2^i + 1 have weight 2 and are APN.
  auto r = run_search(job(2, 5));
  EXPECT_EQ(r.filtered.count("even_weight"), 0u);
  auto exps = gapn_exponents(r);
  EXPECT_TRUE(exps.count(3));
  EXPECT_TRUE(exps.count(5));
}

TEST(RunSearch, ConjectureSmallDimensions) {
  for (unsigned n : {2u, 3u, 4u, 6u}) {
    auto r = run_search(job(3, n, SearchMode::Conjecture));
    ASSERT_TRUE(r.conjecture_holds);
    EXPECT_TRUE(*r.conjecture_holds) << "n=" << n;
  }
  // F_{3^5} does have intermediate-weight GAPN exponents; the violations must
  // be exactly the brute-force GAPN cosets with 3 < weight < 9.
  auto r5 = run_search(job(3, 5, SearchMode::Conjecture));
  ASSERT_TRUE(r5.conjecture_holds);
  EXPECT_FALSE(*r5.conjecture_holds);
  std::set<u64> expected;
  for (u64 d : brute_gapn_exponents(3, 5)) {
    const u64 w = p_weight(d, 3);
    if (w > 3 && w < 9) expected.insert(coset_rep(d, 3, 5));
  }
  EXPECT_FALSE(expected.empty());
  EXPECT_EQ(std::set<u64>(r5.conjecture_violations.begin(), r5.conjecture_violations.end()), expected);
}

TEST(RunSearch, ModesRestrictCandidates) {
  auto wp = run_search(job(3, 5, SearchMode::WeightPOnly));
  for (const auto& c : wp.gapn_cosets) EXPECT_EQ(c.weight, 3u);
  EXPECT_GT(wp.filtered["not_weight_p"], 0u);
  auto fam = run_search(job(3, 5, SearchMode::FamiliesOnly));
  auto reps = family_coset_reps(3, 5);
  for (const auto& c : fam.gapn_cosets) EXPECT_TRUE(reps.count(c.coset_rep));
  EXPECT_TRUE(reps.count(coset_rep(241, 3, 5)));
}

TEST(RunSearch, Errors) {
  EXPECT_EQ(code_of([] { run_search(job(3, 8)); }), ErrorCode::BudgetExceeded);
  EXPECT_EQ(code_of([] { run_search(job(9, 2)); }), ErrorCode::NotPrime);
  EXPECT_EQ(parse_search_mode("conjecture"), SearchMode::Conjecture);
  EXPECT_EQ(code_of([] { parse_search_mode("all"); }), ErrorCode::InvalidArgument);
}

TEST(Cache, RoundTripAndResume) {
  TempDir tmp;
  {
    VerdictCache cache(tmp.path.string(), 3, 4);
    EXPECT_FALSE(cache.lookup(5));
    cache.store({3, 4, 5, 3, true, "criterion+circulant-rank", kVersion});
    auto rec = cache.lookup(5);
    ASSERT_TRUE(rec);
    EXPECT_TRUE(rec->is_gapn);
  }
  VerdictCache reopened(tmp.path.string(), 3, 4);
  auto rec = reopened.lookup(5);
  ASSERT_TRUE(rec);
  EXPECT_EQ(rec->decider, "criterion+circulant-rank");
  EXPECT_EQ(rec->weight, 3u);
}

TEST(Cache, RerunSkipsDecidedCosets) {
  TempDir tmp;
  SearchJob j = job(3, 5);
  j.cache_dir = tmp.path.string();
  auto first = run_search(j);
  EXPECT_EQ(first.cache_hits, 0u);
  auto second = run_search(j);
  EXPECT_EQ(second.cache_hits, second.decided);
  EXPECT_EQ(gapn_exponents(first), gapn_exponents(second));
  auto plain = run_search(job(3, 5));
  ASSERT_EQ(plain.gapn_cosets.size(), second.gapn_cosets.size());
  for (std::size_t i = 0; i < plain.gapn_cosets.size(); ++i) {
    EXPECT_EQ(plain.gapn_cosets[i].deciders, second.gapn_cosets[i].deciders);
  }
}

TEST(Cache, CorruptLineFailsLoudly) {
  TempDir tmp;
  { VerdictCache(tmp.path.string(), 3, 3).store({3, 3, 5, 3, true, "criterion", kVersion}); }
  const auto file = tmp.path / "gapn_p3_n3.csv";
  std::string text;
  {
    std::ifstream in(file);
    std::getline(in, text);
  }
  ASSERT_NE(text.find(",gapn,"), std::string::npos);
  text.replace(text.find(",gapn,"), 6, ",not-gapn,");
  {
    std::ofstream out(file, std::ios::trunc);
    out << text << '\n';
  }
  EXPECT_EQ(code_of([&] { VerdictCache(tmp.path.string(), 3, 3); }), ErrorCode::CacheCorrupt);
  {
    std::ofstream out(file, std::ios::trunc);
    out << "garbage\n";
  }
  EXPECT_EQ(code_of([&] { VerdictCache(tmp.path.string(), 3, 3); }), ErrorCode::CacheCorrupt);
}

TEST(Cache, ChecksumIsCrc32OfBody) {
  const std::string line = cache_line({3, 2, 5, 3, true, "criterion+circulant-rank", "0.1.0"});
  const std::string body = "3,2,5,3,gapn,criterion+circulant-rank,0.1.0";
  EXPECT_EQ(line.substr(0, body.size()), body);
  // reference CRC-32 (IEEE) of "123456789"
  EXPECT_EQ(crc32_of("123456789"), 0xCBF43926u);
  EXPECT_EQ(line.substr(body.size() + 1), std::to_string(crc32_of(body)));
}

TEST(Families, Examples) {
  auto r35 = verify_families(3, 5);
  EXPECT_EQ(r35.mismatches(), 0u);
  for (const auto& e : r35.entries) {
    if (e.family == "gold") {
      EXPECT_TRUE(e.verdict) << e.label;
    }
  }
  auto r34 = verify_families(3, 4);
  bool found = false;
  for (const auto& e : r34.entries) {
    if (e.family == "gold" && e.d == 11) {
      EXPECT_FALSE(e.verdict);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  auto r53 = verify_families(5, 3);
  int maxdeg = 0;
  for (const auto& e : r53.entries) {
    if (e.family == "max-degree") {
      EXPECT_TRUE(e.verdict);
      EXPECT_EQ(e.deciders.front(), "brute-force");
      ++maxdeg;
    }
  }
  EXPECT_EQ(maxdeg, 3);
}

TEST(Families, NoMismatchesAcrossFields) {
  for (auto [p, n] : std::vector<std::pair<u64, unsigned>>{
           {3, 2}, {3, 3}, {3, 4}, {3, 5}, {3, 6}, {3, 7}, {5, 2}, {5, 3}, {7, 2}, {7, 3}, {2, 3}, {2, 4}, {2, 5}, {2, 7}}) {
    auto r = verify_families(p, n);
    EXPECT_EQ(r.mismatches(), 0u) << "p=" << p << " n=" << n;
    for (const auto& e : r.entries) {
      EXPECT_TRUE(e.match()) << e.family << " " << e.label << " p=" << p << " n=" << n;
    }
  }
}
