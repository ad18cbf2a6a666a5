#pragma once

// Ground-truth GAPN testing on value tables: generalized derivatives
// sum_{i in F_p} f(x + i a), differential spectra and the monomial deciders
// that only need field arithmetic.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gapn/concurrency.hpp"
#include "gapn/error.hpp"
#include "gapn/exponent.hpp"
#include "gapn/field.hpp"
#include "gapn/linalg.hpp"

namespace gapn {

inline constexpr u64 kMaxTableFieldOrder = u64{1} << 26;

/// A function F -> F stored as its value table, index -> index.
class FnTable {
 public:
  FnTable(FieldCtx ctx, std::vector<u64> values) : ctx_(std::move(ctx)), values_(std::move(values)) {
    if (values_.size() != ctx_.order()) fail(ErrorCode::InvalidArgument, "table length must equal p^n");
    for (u64 v : values_) {
      if (v >= ctx_.order()) fail(ErrorCode::InvalidArgument, "table entry out of range");
    }
  }

  const FieldCtx& ctx() const noexcept { return ctx_; }
  const std::vector<u64>& values() const noexcept { return values_; }
  FieldElem operator()(FieldElem x) const noexcept { return FieldElem{values_[x.index]}; }
  std::size_t size() const noexcept { return values_.size(); }

  friend bool operator==(const FnTable& a, const FnTable& b) { return a.values_ == b.values_; }

 private:
  FieldCtx ctx_;
  std::vector<u64> values_;
};

enum class SpectrumMode { Full, VerdictOnly };

struct GapnReport {
  bool is_gapn = false;
  /// max over a != 0 and b of N(a, b); a lower bound when the spectrum is partial.
  u64 max_count = 0;
  /// N value -> number of (a, b) pairs attaining it.
  std::map<u64, u64> spectrum;
  /// (a, b) with N(a, b) > p.
  std::optional<std::pair<u64, u64>> witness;
  std::vector<std::string> deciders_agreed;
  bool spectrum_complete = true;

  u64 total_pairs() const {
    u64 t = 0;
    for (auto [count, pairs] : spectrum) t += pairs;
    return t;
  }
};

inline FnTable gen_derivative(const FnTable& f, FieldElem a) {
  const FieldCtx& ctx = f.ctx();
  if (a.index == 0) fail(ErrorCode::ZeroDirection, "generalized derivative needs a != 0");
  const u64 p = ctx.p();
  std::vector<FieldElem> steps(p);
  for (u64 i = 0; i < p; ++i) steps[i] = ctx.scalar_mul(i, a);
  std::vector<u64> out(ctx.order());
  for (u64 x = 0; x < ctx.order(); ++x) {
    FieldElem acc = ctx.zero();
    for (u64 i = 0; i < p; ++i) acc = ctx.add(acc, f(ctx.add(FieldElem{x}, steps[i])));
    out[x] = acc.index;
  }
  return FnTable(ctx, std::move(out));
}

namespace detail {

struct DirectionResult {
  std::map<u64, u64> histogram;
  u64 max_count = 0;
  std::optional<u64> witness_b;
  bool aborted = false;
};

// Scratch buffers owned by one worker.
struct SpectrumScratch {
  std::vector<std::uint32_t> buckets;
  std::vector<u64> touched;
  std::vector<FieldElem> steps;
  explicit SpectrumScratch(u64 order) : buckets(order, 0) { touched.reserve(order); }
};

// N(a, b) for all b. The derivative is constant on each line x + F_p a, so one
// representative per line is evaluated: the points whose digit at the lowest
// nonzero position of a is 0.
inline DirectionResult direction_spectrum(const FnTable& f, FieldElem a, SpectrumMode mode, SpectrumScratch& s) {
  const FieldCtx& ctx = f.ctx();
  const u64 p = ctx.p();
  const u64 q = ctx.order();
  s.steps.resize(p);
  for (u64 i = 0; i < p; ++i) s.steps[i] = ctx.scalar_mul(i, a);

  u64 pivot_pow = 1;
  for (u64 idx = a.index; idx % p == 0; idx /= p) pivot_pow *= p;
  const u64 upper = pivot_pow * p;
  const u64 high_count = q / upper;

  DirectionResult res;
  s.touched.clear();
  const auto& values = f.values();
  for (u64 hi = 0; hi < high_count && !res.aborted; ++hi) {
    for (u64 lo = 0; lo < pivot_pow; ++lo) {
      const FieldElem x{lo + hi * upper};
      FieldElem acc{values[x.index]};
      for (u64 i = 1; i < p; ++i) acc = ctx.add(acc, FieldElem{values[ctx.add(x, s.steps[i]).index]});
      auto& bucket = s.buckets[acc.index];
      if (bucket == 0) s.touched.push_back(acc.index);
      bucket += static_cast<std::uint32_t>(p);
      if (bucket > p && !res.witness_b) {
        res.witness_b = acc.index;
        if (mode == SpectrumMode::VerdictOnly) {
          res.aborted = true;
          break;
        }
      }
    }
  }
  u64 conserved = 0;
  for (u64 b : s.touched) {
    const u64 count = s.buckets[b];
    conserved += count;
    res.histogram[count] += 1;
    res.max_count = std::max(res.max_count, count);
    s.buckets[b] = 0;
  }
  if (!res.aborted) {
    if (conserved != q) throw std::logic_error("spectrum conservation violated: sum_b N(a, b) != p^n");
    if (s.touched.size() < q) res.histogram[0] += q - s.touched.size();
  }
  return res;
}

inline void merge_histogram(std::map<u64, u64>& into, const std::map<u64, u64>& from, u64 scale = 1) {
  for (auto [count, pairs] : from) into[count] += pairs * scale;
}

}  // namespace detail

/// N(a, b) histogram over every direction a != 0. In VerdictOnly mode a
/// direction stops at the first bucket exceeding p, and directions above the
/// smallest offending one are skipped; the witness is then the smallest
/// offending direction regardless of worker count.
inline GapnReport differential_spectrum(const FnTable& f, SpectrumMode mode = SpectrumMode::Full, unsigned jobs = 1) {
  const FieldCtx& ctx = f.ctx();
  const u64 q = ctx.order();
  const u64 p = ctx.p();
  if (q > kMaxTableFieldOrder) fail(ErrorCode::OrderTooLarge, "field too large for table analysis");

  WorkQueue queue(q - 1);
  std::atomic<u64> best{std::numeric_limits<u64>::max()};
  std::mutex merge_mutex;
  GapnReport report;
  std::map<u64, std::pair<u64, bool>> violations;  // a -> (b, aborted)

  run_workers(jobs, [&](unsigned) {
    detail::SpectrumScratch scratch(q);
    std::map<u64, u64> local_hist;
    u64 local_max = 0;
    std::map<u64, std::pair<u64, bool>> local_viol;
    while (auto slot = queue.pop()) {
      const u64 a = *slot + 1;
      if (mode == SpectrumMode::VerdictOnly && a > best.load(std::memory_order_relaxed)) break;
      auto res = detail::direction_spectrum(f, FieldElem{a}, mode, scratch);
      local_max = std::max(local_max, res.max_count);
      if (!res.aborted) detail::merge_histogram(local_hist, res.histogram);
      if (res.witness_b) {
        local_viol[a] = {*res.witness_b, res.aborted};
        u64 cur = best.load();
        while (a < cur && !best.compare_exchange_weak(cur, a)) {
        }
      }
    }
    std::lock_guard lock(merge_mutex);
    detail::merge_histogram(report.spectrum, local_hist);
    report.max_count = std::max(report.max_count, local_max);
    violations.insert(local_viol.begin(), local_viol.end());
  });

  report.is_gapn = violations.empty();
  if (!report.is_gapn) {
    const auto& [a, wb] = *violations.begin();
    u64 b = wb.first;
    if (mode == SpectrumMode::Full) {
      // Smallest b with N(a, b) > p in the smallest offending direction.
      auto deriv = gen_derivative(f, FieldElem{a});
      std::vector<u64> counts(q, 0);
      for (u64 v : deriv.values()) ++counts[v];
      for (u64 bb = 0; bb < q; ++bb) {
        if (counts[bb] > p) {
          b = bb;
          break;
        }
      }
    }
    report.witness = std::make_pair(a, b);
  }
  report.spectrum_complete = report.is_gapn || mode == SpectrumMode::Full;
  if (!report.spectrum_complete) report.spectrum.clear();
  report.deciders_agreed = {"brute-force"};
  return report;
}

/// Value table of x -> x^d, with 0^0 = 1.
inline FnTable monomial_table(const FieldCtx& ctx, u64 d) {
  const u64 q = ctx.order();
  if (q > kMaxTableFieldOrder) fail(ErrorCode::OrderTooLarge, "field too large for a value table");
  if (d >= q) fail(ErrorCode::ExponentOutOfRange, "exponent must satisfy 0 <= d < p^n");
  std::vector<u64> values(q);
  for (u64 x = 0; x < q; ++x) values[x] = ctx.pow(FieldElem{x}, d).index;
  return FnTable(ctx, std::move(values));
}

/// Verdict for x^d from the a = 1 direction only. For monomials
/// D_a f(x) = a^d D_1 f(x / a), so every direction has the same multiset of
/// counts and the full spectrum is the a = 1 histogram scaled by p^n - 1.
inline GapnReport monomial_gapn_fast(const FieldCtx& ctx, u64 d, SpectrumMode mode = SpectrumMode::Full) {
  if (d < 1) fail(ErrorCode::ExponentOutOfRange, "monomial fast path needs d >= 1");
  const FnTable f = monomial_table(ctx, d);
  const u64 q = ctx.order();
  detail::SpectrumScratch scratch(q);
  auto res = detail::direction_spectrum(f, ctx.one(), mode, scratch);
  GapnReport report;
  report.max_count = res.max_count;
  report.is_gapn = !res.witness_b.has_value();
  if (res.witness_b) report.witness = std::make_pair(u64{1}, *res.witness_b);
  report.spectrum_complete = !res.aborted;
  if (!res.aborted) detail::merge_histogram(report.spectrum, res.histogram, q - 1);
  report.deciders_agreed = {"monomial-fast"};
  return report;
}

/// dim_Fp Ker(phi), phi(x) = sum_s d_s x^{p^s}, for a normalized p-weight-p
/// exponent. The matrix of phi is built from actual field arithmetic on the
/// polynomial basis; x^d is GAPN exactly when the kernel is F_p (dimension 1).
/// Digit positions at or beyond n fold back modulo n, since x^{p^n} = x.
inline unsigned linearized_kernel_dim(const FieldCtx& ctx, u64 d) {
  const u64 p = ctx.p();
  const unsigned n = ctx.n();
  if (p_weight(d, p) != p) fail(ErrorCode::WrongWeight, "linearized kernel needs p-weight p");
  if (d % p == 0) fail(ErrorCode::NotNormalized, "exponent is not normalized (constant digit is 0)");
  std::vector<u64> alpha(n, 0);
  const auto digits = p_adic_digits(d, p);
  for (std::size_t s = 0; s < digits.size(); ++s) alpha[s % n] = (alpha[s % n] + digits[s]) % p;
  MatrixFp rows(n, std::vector<u64>(n, 0));
  for (unsigned k = 0; k < n; ++k) {
    const FieldElem basis{*nt::checked_pow(p, k)};
    FieldElem image = ctx.zero();
    for (unsigned s = 0; s < n; ++s) {
      if (alpha[s] == 0) continue;
      image = ctx.add(image, ctx.scalar_mul(alpha[s], ctx.frobenius(basis, s)));
    }
    const auto col = ctx.digits(image);
    for (unsigned r = 0; r < n; ++r) rows[r][k] = col[r];
  }
  return n - static_cast<unsigned>(rank_mod_p(std::move(rows), p));
}

// Table I/O. Raw format: p^n little-endian uint32 values. CSV: "x,f(x)" rows
// in decimal, each x exactly once, any order.

inline void write_table_raw(std::ostream& os, const FnTable& f) {
  for (u64 v : f.values()) {
    const auto w = static_cast<std::uint32_t>(v);
    const unsigned char bytes[4] = {static_cast<unsigned char>(w), static_cast<unsigned char>(w >> 8),
                                    static_cast<unsigned char>(w >> 16), static_cast<unsigned char>(w >> 24)};
    os.write(reinterpret_cast<const char*>(bytes), 4);
  }
}

inline FnTable read_table_raw(std::istream& is, const FieldCtx& ctx) {
  std::vector<u64> values;
  values.reserve(ctx.order());
  unsigned char bytes[4];
  while (is.read(reinterpret_cast<char*>(bytes), 4)) {
    values.push_back(u64{bytes[0]} | (u64{bytes[1]} << 8) | (u64{bytes[2]} << 16) | (u64{bytes[3]} << 24));
  }
  if (is.gcount() != 0) fail(ErrorCode::Io, "raw table length is not a multiple of 4 bytes");
  if (values.size() != ctx.order()) fail(ErrorCode::Io, "raw table has " + std::to_string(values.size()) + " entries, expected p^n");
  return FnTable(ctx, std::move(values));
}

inline void write_table_csv(std::ostream& os, const FnTable& f) {
  for (u64 x = 0; x < f.size(); ++x) os << x << ',' << f.values()[x] << '\n';
}

inline FnTable read_table_csv(std::istream& is, const FieldCtx& ctx) {
  const u64 q = ctx.order();
  std::vector<u64> values(q, 0);
  std::vector<bool> seen(q, false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    u64 x = 0, y = 0;
    char comma = 0;
    if (!(ls >> x >> comma >> y) || comma != ',' || !(ls >> std::ws).eof()) {
      fail(ErrorCode::Io, "malformed CSV table line " + std::to_string(line_no));
    }
    if (x >= q || y >= q) fail(ErrorCode::Io, "CSV table value out of range on line " + std::to_string(line_no));
    if (seen[x]) fail(ErrorCode::Io, "duplicate x in CSV table on line " + std::to_string(line_no));
    seen[x] = true;
    values[x] = y;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) fail(ErrorCode::Io, "CSV table does not cover every x");
  return FnTable(ctx, std::move(values));
}

}  // namespace gapn
