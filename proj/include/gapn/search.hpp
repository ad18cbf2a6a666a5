#pragma once

// Search over monomial exponents of F_{p^n}: one representative per
// cyclotomic coset, weight filters, algebraic or table deciders, a verdict
// cache and family verification.

#include <zlib.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapn/concurrency.hpp"
#include "gapn/differential.hpp"
#include "gapn/error.hpp"
#include "gapn/exponent.hpp"
#include "gapn/field.hpp"
#include "gapn/monomial.hpp"
#include "gapn/version.hpp"

namespace gapn {

/// Fields above this order need SearchJob::long_running.
inline constexpr u64 kSoftBudgetOrder = 4096;
/// Family verification uses brute force up to this order.
inline constexpr u64 kFamilyBruteForceOrder = 729;

enum class SearchMode { Exhaustive, WeightPOnly, FamiliesOnly, Conjecture };

inline std::string to_string(SearchMode m) {
  switch (m) {
    case SearchMode::Exhaustive: return "exhaustive";
    case SearchMode::WeightPOnly: return "weight-p-only";
    case SearchMode::FamiliesOnly: return "families-only";
    case SearchMode::Conjecture: return "conjecture";
  }
  return "?";
}

inline SearchMode parse_search_mode(const std::string& s) {
  for (auto m : {SearchMode::Exhaustive, SearchMode::WeightPOnly, SearchMode::FamiliesOnly, SearchMode::Conjecture}) {
    if (to_string(m) == s) return m;
  }
  fail(ErrorCode::InvalidArgument, "unknown search mode '" + s + "'");
}

struct SearchFilters {
  bool skip_even_weight = true;  // odd p only
  bool skip_low_weight = true;
  bool verify_filters = false;
};

struct SearchJob {
  u64 p = 3;
  unsigned n = 2;
  SearchMode mode = SearchMode::Exhaustive;
  SearchFilters filters;
  unsigned jobs = 1;
  std::optional<std::string> cache_dir;
  bool long_running = false;
  bool use_fast_path = true;
};

struct CosetInfo {
  u64 rep = 0;
  u64 weight = 0;
  unsigned size = 0;
};

struct CosetVerdict {
  u64 coset_rep = 0;
  u64 weight = 0;
  unsigned coset_size = 0;
  bool is_gapn = false;
  std::vector<std::string> deciders;
};

struct FilterCheck {
  u64 sampled = 0;
  u64 confirmed = 0;
  std::vector<u64> violations;
};

struct SearchResult {
  u64 p = 0;
  unsigned n = 0;
  SearchMode mode = SearchMode::Exhaustive;
  std::vector<CosetVerdict> gapn_cosets;
  /// Coset representatives in [2, p^n - 2].
  u64 scanned = 0;
  u64 decided = 0;
  std::map<std::string, u64> filtered;
  u64 cache_hits = 0;
  bool fast_path_validated = false;
  std::optional<bool> conjecture_holds;
  std::vector<u64> conjecture_violations;
  std::optional<FilterCheck> filter_check;
  double elapsed_seconds = 0;
};

/// Cyclotomic cosets of Z/(p^n - 1) whose least element lies in [2, p^n - 2],
/// in increasing order of representative. The coset of 1 (weight 1) and {0}
/// are left out.
inline std::vector<CosetInfo> coset_representatives(u64 p, unsigned n) {
  const u64 q = detail::order_of(p, n);
  if (q > kMaxTableFieldOrder) fail(ErrorCode::OrderTooLarge, "field too large for coset enumeration");
  const u64 q1 = q - 1;
  std::vector<CosetInfo> out;
  std::vector<bool> seen(q1, false);
  for (u64 d = 1; d < q1; ++d) {
    if (seen[d]) continue;
    unsigned size = 0;
    u64 cur = d;
    do {
      seen[cur] = true;
      ++size;
      cur = cur * p % q1;
    } while (cur != d);
    if (d >= 2) out.push_back({d, p_weight(d, p), size});
  }
  return out;
}

/// Coset representatives of the Gold, Welch and inverse exponents.
inline std::set<u64> family_coset_reps(u64 p, unsigned n) {
  std::set<u64> reps;
  const u64 q = detail::order_of(p, n);
  if (n < 2) return reps;
  for (unsigned i = 1; i < n; ++i) reps.insert(coset_rep(gold_exponent(p, i), p, n));
  auto w = welch_exponent(p, n);
  if (w.d < q - 1) reps.insert(coset_rep(w.d, p, n));
  reps.insert(coset_rep(q - 2, p, n));
  return reps;
}

// Verdict cache: one append-only CSV per (p, n) with lines
// p,n,coset_rep,weight,verdict,decider,version,checksum where the checksum is
// the CRC-32 of the text before the last comma.

struct CacheRecord {
  u64 p = 0;
  unsigned n = 0;
  u64 coset_rep = 0;
  u64 weight = 0;
  bool is_gapn = false;
  std::string decider;
  std::string version = kVersion;
};

inline std::uint32_t crc32_of(const std::string& s) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size())));
}

inline std::string cache_line(const CacheRecord& r) {
  std::ostringstream body;
  body << r.p << ',' << r.n << ',' << r.coset_rep << ',' << r.weight << ',' << (r.is_gapn ? "gapn" : "not-gapn") << ','
       << r.decider << ',' << r.version;
  const std::string text = body.str();
  return text + ',' + std::to_string(crc32_of(text));
}

class VerdictCache {
 public:
  VerdictCache(const std::string& dir, u64 p, unsigned n) : p_(p), n_(n) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorCode::Io, "cannot create cache directory " + dir + ": " + ec.message());
    path_ = (std::filesystem::path(dir) / ("gapn_p" + std::to_string(p) + "_n" + std::to_string(n) + ".csv")).string();
    load();
  }

  const std::string& path() const noexcept { return path_; }
  std::size_t size() const noexcept { return records_.size(); }

  std::optional<CacheRecord> lookup(u64 coset_rep) const {
    std::lock_guard lock(mutex_);
    auto it = records_.find(coset_rep);
    if (it == records_.end()) return std::nullopt;
    return it->second;
  }

  void store(const CacheRecord& r) {
    std::lock_guard lock(mutex_);
    std::ofstream out(path_, std::ios::app);
    if (!out) fail(ErrorCode::Io, "cannot append to cache file " + path_);
    out << cache_line(r) << '\n';
    out.flush();
    if (!out) fail(ErrorCode::Io, "write to cache file failed: " + path_);
    records_[r.coset_rep] = r;
  }

 private:
  void load() {
    std::ifstream in(path_);
    if (!in) return;  // empty cache
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto corrupt = [&](const std::string& why) {
        fail(ErrorCode::CacheCorrupt, path_ + ":" + std::to_string(line_no) + ": " + why);
      };
      const auto last = line.rfind(',');
      if (last == std::string::npos) corrupt("malformed record");
      const std::string body = line.substr(0, last);
      const std::string sum = line.substr(last + 1);
      if (sum.empty() || sum.find_first_not_of("0123456789") != std::string::npos ||
          std::to_string(crc32_of(body)) != sum) {
        corrupt("checksum mismatch");
      }
      std::vector<std::string> f;
      std::stringstream ss(body);
      for (std::string tok; std::getline(ss, tok, ',');) f.push_back(tok);
      if (f.size() != 7) corrupt("expected 8 fields");
      CacheRecord r;
      try {
        r.p = std::stoull(f[0]);
        r.n = static_cast<unsigned>(std::stoul(f[1]));
        r.coset_rep = std::stoull(f[2]);
        r.weight = std::stoull(f[3]);
      } catch (const std::exception&) {
        corrupt("non-numeric field");
      }
      if (f[4] != "gapn" && f[4] != "not-gapn") corrupt("bad verdict");
      r.is_gapn = f[4] == "gapn";
      r.decider = f[5];
      r.version = f[6];
      if (r.p != p_ || r.n != n_) corrupt("record for a different field");
      if (r.version == kVersion) records_[r.coset_rep] = r;
    }
  }

  u64 p_;
  unsigned n_;
  std::string path_;
  std::map<u64, CacheRecord> records_;
  mutable std::mutex mutex_;
};

inline std::string join_deciders(const std::vector<std::string>& ds) {
  std::string s;
  for (const auto& d : ds) s += (s.empty() ? "" : "+") + d;
  return s;
}

inline std::vector<std::string> split_deciders(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, '+');) out.push_back(tok);
  return out;
}

namespace detail {

struct Verdict {
  bool is_gapn = false;
  std::vector<std::string> deciders;
};

// Criterion and circulant rank on a normalized weight-p exponent; a
// disagreement is a library bug.
inline Verdict algebraic_verdict(u64 d, u64 p, unsigned n) {
  const bool crit = criterion_gapn(d, p, n).is_gapn;
  const bool circ = circulant_rank(d, p, n) + 1 == n;
  if (crit != circ) {
    throw std::logic_error("criterion and circulant rank disagree for d=" + std::to_string(d) + " p=" +
                           std::to_string(p) + " n=" + std::to_string(n));
  }
  return {crit, {"criterion", "circulant-rank"}};
}

// Checks the a = 1 reduction against the full brute-force spectrum on a spread
// of exponents of this field before it is trusted.
inline void validate_fast_path(const FieldCtx& ctx, const std::vector<u64>& candidates) {
  std::vector<u64> sample;
  const std::size_t want = 6;
  for (std::size_t k = 0; k < want && k < candidates.size(); ++k) {
    sample.push_back(candidates[k * candidates.size() / std::min(want, candidates.size())]);
  }
  sample.push_back(coset_rep(ctx.order() - 2, ctx.p(), ctx.n()));
  for (u64 d : sample) {
    auto brute = differential_spectrum(monomial_table(ctx, d), SpectrumMode::Full);
    auto fast = monomial_gapn_fast(ctx, d, SpectrumMode::Full);
    if (brute.spectrum != fast.spectrum || brute.is_gapn != fast.is_gapn) {
      throw std::logic_error("monomial fast path disagrees with brute force for d=" + std::to_string(d));
    }
  }
}

}  // namespace detail

inline SearchResult run_search(const SearchJob& job) {
  const auto start = std::chrono::steady_clock::now();
  const u64 p = job.p;
  const unsigned n = job.n;
  if (!nt::is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  const u64 q = detail::order_of(p, n);
  if (q > kSoftBudgetOrder && !job.long_running) {
    fail(ErrorCode::BudgetExceeded, "p^n = " + std::to_string(q) + " exceeds the soft budget of " +
                                        std::to_string(kSoftBudgetOrder) + "; use --long-running to proceed");
  }
  const FieldCtx ctx = make_field(p, n);

  SearchResult result;
  result.p = p;
  result.n = n;
  result.mode = job.mode;
  const auto cosets = coset_representatives(p, n);
  result.scanned = cosets.size();

  const std::set<u64> family_reps =
      job.mode == SearchMode::FamiliesOnly ? family_coset_reps(p, n) : std::set<u64>{};
  std::vector<CosetInfo> candidates;
  std::vector<CosetInfo> filtered;
  for (const auto& c : cosets) {
    if (job.filters.skip_low_weight && c.weight < p) {
      ++result.filtered["low_weight"];
      filtered.push_back(c);
    } else if (job.filters.skip_even_weight && p % 2 == 1 && c.weight % 2 == 0) {
      ++result.filtered["even_weight"];
      filtered.push_back(c);
    } else if (job.mode == SearchMode::WeightPOnly && c.weight != p) {
      ++result.filtered["not_weight_p"];
    } else if (job.mode == SearchMode::FamiliesOnly && !family_reps.count(c.rep)) {
      ++result.filtered["not_family"];
    } else {
      candidates.push_back(c);
    }
  }

  std::optional<VerdictCache> cache;
  if (job.cache_dir) cache.emplace(*job.cache_dir, p, n);

  std::vector<u64> table_candidates;
  for (const auto& c : candidates) {
    if (c.weight != p && !(cache && cache->lookup(c.rep))) table_candidates.push_back(c.rep);
  }
  const bool fast = job.use_fast_path && !table_candidates.empty();
  if (fast) {
    detail::validate_fast_path(ctx, table_candidates);
    result.fast_path_validated = true;
  }

  std::vector<CosetVerdict> verdicts(candidates.size());
  std::atomic<u64> hits{0};
  WorkQueue queue(candidates.size());
  run_workers(job.jobs, [&](unsigned) {
    while (auto slot = queue.pop()) {
      const auto& c = candidates[*slot];
      CosetVerdict& v = verdicts[*slot];
      v.coset_rep = c.rep;
      v.weight = c.weight;
      v.coset_size = c.size;
      if (cache) {
        if (auto rec = cache->lookup(c.rep)) {
          v.is_gapn = rec->is_gapn;
          v.deciders = split_deciders(rec->decider);
          ++hits;
          continue;
        }
      }
      if (c.weight == p) {
        auto alg = detail::algebraic_verdict(c.rep, p, n);
        v.is_gapn = alg.is_gapn;
        v.deciders = alg.deciders;
      } else if (fast) {
        v.is_gapn = monomial_gapn_fast(ctx, c.rep, SpectrumMode::VerdictOnly).is_gapn;
        v.deciders = {"monomial-fast"};
      } else {
        v.is_gapn = differential_spectrum(monomial_table(ctx, c.rep), SpectrumMode::VerdictOnly).is_gapn;
        v.deciders = {"brute-force"};
      }
      if (cache) cache->store({p, n, c.rep, c.weight, v.is_gapn, join_deciders(v.deciders), kVersion});
    }
  });
  result.cache_hits = hits.load();
  result.decided = candidates.size();
  for (auto& v : verdicts) {
    if (v.is_gapn) result.gapn_cosets.push_back(std::move(v));
  }

  if (job.filters.verify_filters) {
    // Round-robin over weights so every filtered weight class is sampled.
    std::map<u64, std::vector<u64>> by_weight;
    for (const auto& c : filtered) by_weight[c.weight].push_back(c.rep);
    std::vector<u64> sample;
    const std::size_t target = 100;
    for (std::size_t round = 0; sample.size() < std::min(target, filtered.size()); ++round) {
      for (auto& [w, reps] : by_weight) {
        if (round < reps.size() && sample.size() < target) sample.push_back(reps[round]);
      }
    }
    std::sort(sample.begin(), sample.end());
    std::vector<char> gapn(sample.size(), 0);
    WorkQueue fq(sample.size());
    run_workers(job.jobs, [&](unsigned) {
      while (auto slot = fq.pop()) {
        gapn[*slot] = differential_spectrum(monomial_table(ctx, sample[*slot]), SpectrumMode::VerdictOnly).is_gapn;
      }
    });
    FilterCheck check;
    check.sampled = sample.size();
    for (std::size_t i = 0; i < sample.size(); ++i) {
      if (gapn[i]) {
        check.violations.push_back(sample[i]);
      } else {
        ++check.confirmed;
      }
    }
    result.filter_check = check;
  }

  if (job.mode == SearchMode::Conjecture) {
    // No GAPN power function with p < weight < n(p - 1) - 1.
    const u64 hi = n * (p - 1) - 1;
    for (const auto& v : result.gapn_cosets) {
      if (v.weight > p && v.weight < hi) result.conjecture_violations.push_back(v.coset_rep);
    }
    result.conjecture_holds = result.conjecture_violations.empty();
  }

  result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

struct FamilyEntry {
  std::string family;
  std::string label;
  u64 d = 0;
  u64 coset_rep = 0;
  u64 weight = 0;
  bool predicted = false;
  bool verdict = false;
  std::vector<std::string> deciders;
  bool match() const { return predicted == verdict; }
};

struct FamilyReport {
  u64 p = 0;
  unsigned n = 0;
  std::vector<FamilyEntry> entries;
  u64 mismatches() const {
    return static_cast<u64>(std::count_if(entries.begin(), entries.end(), [](const FamilyEntry& e) { return !e.match(); }));
  }
};

/// Verdict for x^d from every decider that applies at this field size; all of
/// them must agree.
inline detail::Verdict decide_exponent(const FieldCtx& ctx, u64 d) {
  const u64 p = ctx.p();
  const unsigned n = ctx.n();
  const u64 w = p_weight(d, p);
  const u64 rep = coset_rep(d, p, n);
  std::vector<std::pair<std::string, bool>> votes;
  if (ctx.order() <= kFamilyBruteForceOrder) {
    votes.emplace_back("brute-force", differential_spectrum(monomial_table(ctx, d), SpectrumMode::VerdictOnly).is_gapn);
  }
  if (w == p) {
    auto alg = detail::algebraic_verdict(rep, p, n);
    for (const auto& name : alg.deciders) votes.emplace_back(name, alg.is_gapn);
  } else if (w < p) {
    votes.emplace_back("low-weight-rule", false);
  } else if (p % 2 == 1 && w % 2 == 0) {
    votes.emplace_back("even-weight-rule", false);
  }
  if (votes.empty()) votes.emplace_back("monomial-fast", monomial_gapn_fast(ctx, rep, SpectrumMode::VerdictOnly).is_gapn);
  detail::Verdict v;
  v.is_gapn = votes.front().second;
  for (const auto& [name, verdict] : votes) {
    if (verdict != v.is_gapn) {
      throw std::logic_error("deciders disagree on d=" + std::to_string(d) + " over F_" + std::to_string(p) + "^" +
                             std::to_string(n));
    }
    v.deciders.push_back(name);
  }
  return v;
}

inline FamilyReport verify_families(u64 p, unsigned n) {
  if (!nt::is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (n < 2) fail(ErrorCode::InvalidArgument, "family verification needs n >= 2");
  const FieldCtx ctx = make_field(p, n);
  if (ctx.order() > kMaxTableFieldOrder) fail(ErrorCode::OrderTooLarge, "field too large for family verification");
  const u64 q = ctx.order();
  FamilyReport report;
  report.p = p;
  report.n = n;
  auto add = [&](std::string family, std::string label, u64 d, bool predicted) {
    FamilyEntry e;
    e.family = std::move(family);
    e.label = std::move(label);
    e.d = d;
    e.coset_rep = coset_rep(d, p, n);
    e.weight = p_weight(d, p);
    e.predicted = predicted;
    auto v = decide_exponent(ctx, d);
    e.verdict = v.is_gapn;
    e.deciders = std::move(v.deciders);
    report.entries.push_back(std::move(e));
  };
  for (unsigned i = 1; i < n; ++i) {
    add("gold", "i=" + std::to_string(i), gold_exponent(p, i), std::gcd(i, n) == 1);
  }
  auto w = welch_exponent(p, n);
  if (w.d < q - 1) add("welch", "t=" + std::to_string(w.t), w.d, w.predicted);
  if (p == 2) {
    add("inverse", "d=2^n-2", q - 2, n % 2 == 1);
  } else {
    auto family = max_degree_family(p, n);
    for (unsigned j = 0; j < family.size(); ++j) add("max-degree", "j=" + std::to_string(j), family[j], true);
  }
  return report;
}

}  // namespace gapn
