// gapn_cli: command-line front end for the GAPN deciders, profiles, family
// checks and exponent searches.
//
// Exit codes: 0 success, 1 domain error (JSON on stderr), 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "gapn/differential.hpp"
#include "gapn/json_io.hpp"
#include "gapn/monomial.hpp"
#include "gapn/search.hpp"
#include "gapn/version.hpp"

using namespace gapn;

namespace {

enum class Format { Human, Json, Csv };

struct Options {
  std::string format = "human";
  unsigned jobs = 1;
  u64 p = 0;
  unsigned n = 0;
  u64 d = 0;
  unsigned max_n = 12;
  std::string cache;
  bool long_running = false;
  std::string mode = "exhaustive";
  bool keep_even = false;
  bool keep_low = false;
  bool verify_filters = false;
  bool no_fast_path = false;
  std::string table;
  std::string table_format = "csv";
};

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  return Format::Human;
}

void emit_json(const json& j) { std::cout << j.dump(2) << '\n'; }

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : sep) + x;
  return s;
}

template <typename T>
std::string join_nums(const std::vector<T>& v, const char* sep = " ") {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : sep) + std::to_string(x);
  return s;
}

void require_prime(u64 p) {
  if (!nt::is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
}

u64 require_order(u64 p, unsigned n, u64 cap) {
  require_prime(p);
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  auto q = nt::checked_pow(p, n, cap);
  if (!q) fail(ErrorCode::OrderTooLarge, "p^n exceeds the supported order " + std::to_string(cap));
  return *q;
}

std::string poly_text(const PolyFp& f) { return f.to_string(); }

int cmd_test(const Options& o) {
  const u64 q = require_order(o.p, o.n, kMaxTableFieldOrder);
  if (o.d < 1 || o.d >= q) fail(ErrorCode::ExponentOutOfRange, "d must satisfy 1 <= d < p^n");
  const FieldCtx ctx = make_field(o.p, o.n);
  const auto report = differential_spectrum(monomial_table(ctx, o.d), SpectrumMode::Full, o.jobs);
  const auto families = identify_family(o.p, o.n, o.d);
  const u64 weight = p_weight(o.d, o.p);
  switch (parse_format(o.format)) {
    case Format::Json: {
      json j{{"p", o.p}, {"n", o.n}, {"d", o.d}, {"weight", weight}, {"families", families}};
      j["report"] = to_json_value(report);
      emit_json(j);
      break;
    }
    case Format::Csv:
      std::cout << "p,n,d,weight,is_gapn,max_count\n"
                << o.p << ',' << o.n << ',' << o.d << ',' << weight << ',' << (report.is_gapn ? 1 : 0) << ','
                << report.max_count << '\n';
      break;
    case Format::Human:
      std::cout << "GAPN: " << (report.is_gapn ? "yes" : "no") << " (max count " << report.max_count << ")\n";
      std::cout << "degree (p-weight): " << weight << '\n';
      if (!families.empty()) std::cout << "family: " << join(families, ", ") << '\n';
      if (report.witness) std::cout << "witness: a=" << report.witness->first << " b=" << report.witness->second << '\n';
      break;
  }
  return 0;
}

int cmd_criterion(const Options& o) {
  require_order(o.p, o.n, u64{1} << 62);
  const auto r = criterion_gapn(o.d, o.p, o.n);
  std::vector<std::string> offending;
  for (const auto& h : r.offending_factors) offending.push_back(poly_text(h));
  switch (parse_format(o.format)) {
    case Format::Json: emit_json(to_json_value(r)); break;
    case Format::Csv:
      std::cout << "d,p,n,is_gapn,unit_root_multiplicity,offending_factors\n"
                << r.d << ',' << r.p << ',' << r.n << ',' << (r.is_gapn ? 1 : 0) << ',' << r.unit_root_multiplicity
                << ",\"" << join(offending, ";") << "\"\n";
      break;
    case Format::Human:
      std::cout << "D(X) = " << poly_text(r.D) << '\n';
      std::cout << "gcd(D, X^" << r.n << " - 1) = " << poly_text(r.g) << '\n';
      std::cout << "multiplicity of X - 1: " << r.unit_root_multiplicity << '\n';
      std::cout << "offending factors: " << (offending.empty() ? "none" : join(offending, ", ")) << '\n';
      std::cout << "GAPN: " << (r.is_gapn ? "yes" : "no") << '\n';
      break;
  }
  return 0;
}

int cmd_profile(const Options& o) {
  require_prime(o.p);
  const auto prof = exceptional_profile(o.d, o.p);
  const auto dims = prof.gapn_dimensions(o.max_n);
  switch (parse_format(o.format)) {
    case Format::Json: {
      json j = to_json_value(prof);
      j["max_n"] = o.max_n;
      j["gapn_dimensions"] = dims;
      emit_json(j);
      break;
    }
    case Format::Csv:
      std::cout << "n,gapn\n";
      for (unsigned n = prof.min_n; n <= o.max_n; ++n) std::cout << n << ',' << (prof.gapn_on(n) ? 1 : 0) << '\n';
      break;
    case Format::Human: {
      std::cout << "D(X) = " << poly_text(prof.D) << '\n';
      std::string fac;
      for (const auto& [h, m] : prof.factorization.factors) {
        fac += (fac.empty() ? "" : " * ") + ("(" + poly_text(h) + ")") + (m > 1 ? "^" + std::to_string(m) : "");
      }
      std::cout << "factorization: " << fac << '\n';
      std::cout << "root_orders: [" << join_nums(prof.root_orders, ", ") << "]\n";
      std::cout << "multiplicity of X - 1: " << prof.unit_root_multiplicity << '\n';
      std::cout << "GAPN dimensions (" << prof.min_n << " <= n <= " << o.max_n << "): " << join_nums(dims) << '\n';
      std::cout << "witness_n: " << prof.witness_n << '\n';
      break;
    }
  }
  return 0;
}

int cmd_families(const Options& o) {
  require_order(o.p, o.n, kMaxTableFieldOrder);
  const auto r = verify_families(o.p, o.n);
  switch (parse_format(o.format)) {
    case Format::Json: emit_json(to_json_value(r)); break;
    case Format::Csv:
      std::cout << "family,label,d,coset_rep,weight,predicted,verdict,deciders\n";
      for (const auto& e : r.entries) {
        std::cout << e.family << ',' << e.label << ',' << e.d << ',' << e.coset_rep << ',' << e.weight << ','
                  << (e.predicted ? 1 : 0) << ',' << (e.verdict ? 1 : 0) << ',' << join(e.deciders, "+") << '\n';
      }
      break;
    case Format::Human:
      for (const auto& e : r.entries) {
        std::cout << e.family << " (" << e.label << ") d=" << e.d << " weight " << e.weight
                  << ": predicted " << (e.predicted ? "GAPN" : "not GAPN") << ", verdict "
                  << (e.verdict ? "GAPN" : "not GAPN") << " [" << join(e.deciders, ", ") << "]"
                  << (e.match() ? "" : "  MISMATCH") << '\n';
      }
      std::cout << "mismatches: " << r.mismatches() << '\n';
      break;
  }
  return 0;
}

SearchJob make_job(const Options& o, SearchMode mode) {
  SearchJob job;
  job.p = o.p;
  job.n = o.n;
  job.mode = mode;
  job.jobs = o.jobs;
  job.filters.skip_even_weight = !o.keep_even;
  job.filters.skip_low_weight = !o.keep_low;
  job.filters.verify_filters = o.verify_filters;
  if (!o.cache.empty()) job.cache_dir = o.cache;
  job.long_running = o.long_running;
  job.use_fast_path = !o.no_fast_path;
  return job;
}

void print_cosets_csv(const SearchResult& r) {
  std::cout << "coset_rep,weight,coset_size,deciders\n";
  for (const auto& c : r.gapn_cosets) {
    std::cout << c.coset_rep << ',' << c.weight << ',' << c.coset_size << ',' << join(c.deciders, "+") << '\n';
  }
}

void print_search_human(const SearchResult& r) {
  std::cout << "GAPN cosets on F_" << r.p << "^" << r.n << ": " << r.gapn_cosets.size() << '\n';
  for (const auto& c : r.gapn_cosets) {
    std::cout << "  " << c.coset_rep << "  weight " << c.weight << "  size " << c.coset_size << "  ["
              << join(c.deciders, ", ") << "]\n";
  }
  std::cout << "scanned " << r.scanned << " cosets, decided " << r.decided;
  for (const auto& [name, count] : r.filtered) std::cout << ", " << name << " " << count;
  std::cout << '\n';
  if (r.cache_hits) std::cout << "cache hits: " << r.cache_hits << '\n';
  if (r.filter_check) {
    std::cout << "filter check: " << r.filter_check->confirmed << "/" << r.filter_check->sampled
              << " sampled filtered cosets confirmed non-GAPN\n";
  }
}

int cmd_search(const Options& o) {
  require_order(o.p, o.n, kMaxTableFieldOrder);
  const auto r = run_search(make_job(o, parse_search_mode(o.mode)));
  switch (parse_format(o.format)) {
    case Format::Json: emit_json(to_json_value(r)); break;
    case Format::Csv: print_cosets_csv(r); break;
    case Format::Human: print_search_human(r); break;
  }
  return 0;
}

int cmd_conjecture(const Options& o) {
  require_order(o.p, o.n, kMaxTableFieldOrder);
  const auto r = run_search(make_job(o, SearchMode::Conjecture));
  const std::string tag = "(" + std::to_string(o.p) + "," + std::to_string(o.n) + ")";
  switch (parse_format(o.format)) {
    case Format::Json: emit_json(to_json_value(r)); break;
    case Format::Csv:
      std::cout << "p,n,holds,violations\n"
                << o.p << ',' << o.n << ',' << (*r.conjecture_holds ? 1 : 0) << ",\""
                << join_nums(r.conjecture_violations, ";") << "\"\n";
      break;
    case Format::Human:
      if (*r.conjecture_holds) {
        std::cout << "conjecture holds for " << tag << '\n';
      } else {
        std::cout << "conjecture fails for " << tag << ": GAPN cosets " << join_nums(r.conjecture_violations)
                  << " have intermediate weight\n";
      }
      print_search_human(r);
      break;
  }
  return 0;
}

int cmd_spectrum(const Options& o) {
  const u64 q = require_order(o.p, o.n, kMaxTableFieldOrder);
  const FieldCtx ctx = make_field(o.p, o.n);
  std::optional<FnTable> table;
  if (!o.table.empty()) {
    std::ifstream in(o.table, o.table_format == "raw" ? std::ios::binary : std::ios::in);
    if (!in) fail(ErrorCode::Io, "cannot open table file " + o.table);
    table = o.table_format == "raw" ? read_table_raw(in, ctx) : read_table_csv(in, ctx);
  } else {
    if (o.d >= q) fail(ErrorCode::ExponentOutOfRange, "d must satisfy 0 <= d < p^n");
    table = monomial_table(ctx, o.d);
  }
  const auto r = differential_spectrum(*table, SpectrumMode::Full, o.jobs);
  if (parse_format(o.format) == Format::Json) {
    emit_json(to_json_value(r));
  } else {
    std::cout << "count,pairs\n";
    for (auto [count, pairs] : r.spectrum) std::cout << count << ',' << pairs << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GAPN power function analysis"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"human", "json", "csv"}));
  app.add_option("--jobs", o.jobs, "worker threads (0 = all cores)");

  auto field_opts = [&](CLI::App* sub, bool need_n) {
    sub->add_option("-p", o.p, "characteristic")->required();
    if (need_n) sub->add_option("-n", o.n, "extension degree")->required()->check(CLI::Range(1u, 64u));
  };

  auto* test = app.add_subcommand("test", "brute-force GAPN test of x^d with its full spectrum");
  field_opts(test, true);
  test->add_option("-d", o.d, "exponent")->required();

  auto* crit = app.add_subcommand("criterion", "gcd criterion for a normalized p-weight-p exponent");
  field_opts(crit, true);
  crit->add_option("-d", o.d, "exponent")->required();

  auto* prof = app.add_subcommand("profile", "exceptionality profile and GAPN dimensions");
  field_opts(prof, false);
  prof->add_option("-d", o.d, "exponent")->required();
  prof->add_option("--max-n", o.max_n, "largest dimension in the table")->check(CLI::Range(1u, 4096u));

  auto* fam = app.add_subcommand("families", "check Gold, Welch and inverse-class predictions");
  field_opts(fam, true);

  auto search_opts = [&](CLI::App* sub) {
    field_opts(sub, true);
    sub->add_option("--cache", o.cache, "verdict cache directory");
    sub->add_flag("--long-running", o.long_running, "allow fields above the soft budget");
    sub->add_flag("--keep-even-weight", o.keep_even, "do not skip even-weight cosets");
    sub->add_flag("--keep-low-weight", o.keep_low, "do not skip cosets of weight below p");
    sub->add_flag("--verify-filters", o.verify_filters, "brute-force a sample of filtered cosets");
    sub->add_flag("--no-fast-path", o.no_fast_path, "decide by full brute force only");
  };
  auto* search = app.add_subcommand("search", "scan cyclotomic cosets for GAPN exponents");
  search_opts(search);
  search->add_option("--mode", o.mode, "exhaustive | weight-p-only | families-only | conjecture")
      ->check(CLI::IsMember({"exhaustive", "weight-p-only", "families-only", "conjecture"}));

  auto* conj = app.add_subcommand("conjecture", "check that no GAPN exponent has intermediate weight");
  search_opts(conj);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "differential spectrum as count,pairs rows");
  field_opts(spectrum_cmd, true);
  auto* d_opt = spectrum_cmd->add_option("-d", o.d, "exponent");
  auto* t_opt = spectrum_cmd->add_option("--table", o.table, "value table file");
  spectrum_cmd->add_option("--table-format", o.table_format, "raw | csv")->check(CLI::IsMember({"raw", "csv"}));
  d_opt->excludes(t_opt);
  spectrum_cmd->callback([&] {
    if (d_opt->count() == 0 && t_opt->count() == 0) throw CLI::RequiredError("-d or --table");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*test) return cmd_test(o);
    if (*crit) return cmd_criterion(o);
    if (*prof) return cmd_profile(o);
    if (*fam) return cmd_families(o);
    if (*search) return cmd_search(o);
    if (*conj) return cmd_conjecture(o);
    if (*spectrum_cmd) return cmd_spectrum(o);
  } catch (const Error& e) {
    std::cerr << json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 2;
}
