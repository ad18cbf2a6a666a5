#pragma once

// JSON forms of the reports. Polynomials are coefficient arrays, lowest
// degree first.

#include <json.hpp>

#include "gapn/differential.hpp"
#include "gapn/monomial.hpp"
#include "gapn/search.hpp"

namespace gapn {

using json = nlohmann::ordered_json;

inline json poly_json(const PolyFp& f) { return json(f.coeffs()); }

inline json to_json_value(const GapnReport& r) {
  json spectrum = json::array();
  for (auto [count, pairs] : r.spectrum) spectrum.push_back({{"count", count}, {"pairs", pairs}});
  json j;
  j["is_gapn"] = r.is_gapn;
  j["max_count"] = r.max_count;
  j["spectrum"] = spectrum;
  j["spectrum_complete"] = r.spectrum_complete;
  j["witness"] = r.witness ? json{{"a", r.witness->first}, {"b", r.witness->second}} : json(nullptr);
  j["deciders_agreed"] = r.deciders_agreed;
  return j;
}

inline json to_json_value(const CriterionReport& r) {
  json offending = json::array();
  for (const auto& h : r.offending_factors) offending.push_back(poly_json(h));
  json j;
  j["d"] = r.d;
  j["p"] = r.p;
  j["n"] = r.n;
  j["D"] = poly_json(r.D);
  j["g"] = poly_json(r.g);
  j["is_gapn"] = r.is_gapn;
  j["offending_factors"] = offending;
  j["unit_root_multiplicity"] = r.unit_root_multiplicity;
  return j;
}

inline json to_json_value(const Factorization& f) {
  json factors = json::array();
  for (const auto& [h, m] : f.factors) factors.push_back({{"factor", poly_json(h)}, {"multiplicity", m}});
  return {{"unit", f.unit}, {"factors", factors}};
}

inline json to_json_value(const ExceptionalProfile& p) {
  json j;
  j["d"] = p.d;
  j["p"] = p.p;
  j["D"] = poly_json(p.D);
  j["factorization"] = to_json_value(p.factorization);
  j["root_orders"] = p.root_orders;
  j["unit_root_multiplicity"] = p.unit_root_multiplicity;
  j["min_n"] = p.min_n;
  j["witness_n"] = p.witness_n;
  return j;
}

inline json to_json_value(const SearchResult& r, bool with_elapsed = true) {
  json cosets = json::array();
  for (const auto& c : r.gapn_cosets) {
    cosets.push_back(
        {{"coset_rep", c.coset_rep}, {"weight", c.weight}, {"coset_size", c.coset_size}, {"deciders", c.deciders}});
  }
  json j;
  j["p"] = r.p;
  j["n"] = r.n;
  j["mode"] = to_string(r.mode);
  j["gapn_cosets"] = cosets;
  j["scanned"] = r.scanned;
  j["decided"] = r.decided;
  j["filtered"] = json::object();
  for (const auto& [name, count] : r.filtered) j["filtered"][name] = count;
  j["cache_hits"] = r.cache_hits;
  j["fast_path_validated"] = r.fast_path_validated;
  j["conjecture_holds"] = r.conjecture_holds ? json(*r.conjecture_holds) : json(nullptr);
  j["conjecture_violations"] = r.conjecture_violations;
  if (r.filter_check) {
    j["filter_check"] = {{"sampled", r.filter_check->sampled},
                         {"confirmed", r.filter_check->confirmed},
                         {"violations", r.filter_check->violations}};
  } else {
    j["filter_check"] = nullptr;
  }
  if (with_elapsed) j["elapsed_seconds"] = r.elapsed_seconds;
  return j;
}

inline json to_json_value(const FamilyReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"family", e.family},
                       {"label", e.label},
                       {"d", e.d},
                       {"coset_rep", e.coset_rep},
                       {"weight", e.weight},
                       {"predicted", e.predicted},
                       {"verdict", e.verdict},
                       {"deciders", e.deciders},
                       {"match", e.match()}});
  }
  return {{"p", r.p}, {"n", r.n}, {"entries", entries}, {"mismatches", r.mismatches()}};
}

}  // namespace gapn
