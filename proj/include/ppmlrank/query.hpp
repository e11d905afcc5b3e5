#pragma once

// Search over the six basic attributes, then refinement by advanced filters.
//
// Within a set-valued attribute, a record matches if it has ANY of the requested
// values; across attributes, all specified attributes must match. An empty set
// means the attribute is unspecified.

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppmlrank/catalog.hpp"
#include "ppmlrank/errors.hpp"
#include "ppmlrank/record.hpp"

namespace ppmlrank {

struct SearchQuery {
  std::optional<Technique> technique;
  std::set<std::string> ml_models;
  std::set<ThreatModel> threat_models;
  std::set<std::string> datasets;
  std::optional<TrainingSupport> training_status;
  std::optional<bool> open_source;

  bool operator==(const SearchQuery&) const = default;
};

struct FilterSet {
  std::set<Accelerator> acceleration;
  std::set<std::string> schemes_or_protocols;
  std::set<std::string> libraries;
  /// Feature name -> required value, e.g. {"bootstrapping", "true"}. See technique_filter_keys().
  std::map<std::string, std::string> technique_specific;

  bool empty() const {
    return acceleration.empty() && schemes_or_protocols.empty() && libraries.empty() && technique_specific.empty();
  }
  bool operator==(const FilterSet&) const = default;
};

/// Whether a record with `have` support satisfies a search for `wanted`.
/// A framework covering both phases satisfies a search for either single phase.
constexpr bool training_covers(TrainingSupport have, TrainingSupport wanted) {
  return have == wanted || have == TrainingSupport::Both;
}

namespace detail {

template <typename T>
bool any_of_in(const std::vector<T>& have, const std::set<T>& wanted) {
  return std::any_of(have.begin(), have.end(), [&](const T& v) { return wanted.count(v) > 0; });
}

inline void require_known(const std::set<std::string>& queried, const std::vector<std::string>& known,
                          std::string_view what) {
  for (const auto& q : queried) {
    if (!std::binary_search(known.begin(), known.end(), q)) {
      throw UnknownVocabularyError("unknown " + std::string(what) + " '" + q + "'");
    }
  }
}

enum class FilterValueKind { Boolean, Count, Text, Methodology, TechniqueName };

struct TechniqueFilterKey {
  std::string_view key;
  Technique technique;
  FilterValueKind kind;
};

inline constexpr std::array<TechniqueFilterKey, 11> kTechniqueFilterKeys{{
    {"fl_methodology", Technique::FL, FilterValueKind::Methodology},
    {"min_clients", Technique::FL, FilterValueKind::Count},
    {"aggregation_algorithm", Technique::FL, FilterValueKind::Text},
    {"edge_support", Technique::TEE, FilterValueKind::Boolean},
    {"integrity_check", Technique::TEE, FilterValueKind::Boolean},
    {"protected_attack", Technique::TEE, FilterValueKind::Text},
    {"min_participants", Technique::MPC, FilterValueKind::Count},
    {"bootstrapping", Technique::HE, FilterValueKind::Boolean},
    {"normalization_support", Technique::HE, FilterValueKind::Boolean},
    {"min_parties", Technique::Hybrid, FilterValueKind::Count},
    {"combines", Technique::Hybrid, FilterValueKind::TechniqueName},
}};

inline const TechniqueFilterKey* find_filter_key(std::string_view key) {
  for (const auto& k : kTechniqueFilterKeys) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

inline bool parse_bool_value(std::string_view key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw InvalidFilterError("filter '" + std::string(key) + "' expects true or false, got '" + std::string(v) + "'");
}

inline int parse_count_value(std::string_view key, std::string_view v) {
  int n = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec != std::errc{} || ptr != v.data() + v.size() || n < 0) {
    throw InvalidFilterError("filter '" + std::string(key) + "' expects a non-negative integer, got '" +
                             std::string(v) + "'");
  }
  return n;
}

/// Evaluates one technique-specific predicate against an extension of the owning technique.
inline bool technique_predicate(const TechniqueFilterKey& k, std::string_view value, const TechniqueExtension& ext) {
  const std::string_view key = k.key;
  switch (k.technique) {
    case Technique::FL: {
      const auto& f = std::get<FlFeatures>(ext);
      if (key == "fl_methodology") {
        auto m = parse_enum<FlMethodology>(value);
        if (!m) throw InvalidFilterError("filter 'fl_methodology' got unknown value '" + std::string(value) + "'");
        return f.methodology == *m || f.methodology == FlMethodology::Both;
      }
      if (key == "min_clients") return f.num_clients >= parse_count_value(key, value);
      return std::find(f.aggregation_algorithms.begin(), f.aggregation_algorithms.end(), value) !=
             f.aggregation_algorithms.end();
    }
    case Technique::TEE: {
      const auto& f = std::get<TeeFeatures>(ext);
      if (key == "edge_support") return f.edge_support == parse_bool_value(key, value);
      if (key == "integrity_check") return f.integrity_check == parse_bool_value(key, value);
      return std::find(f.protected_attacks.begin(), f.protected_attacks.end(), value) != f.protected_attacks.end();
    }
    case Technique::MPC:
      return std::get<MpcFeatures>(ext).num_participants >= parse_count_value(key, value);
    case Technique::HE: {
      const auto& f = std::get<HeFeatures>(ext);
      if (key == "bootstrapping") return f.bootstrapping == parse_bool_value(key, value);
      return f.normalization_support == parse_bool_value(key, value);
    }
    case Technique::Hybrid: {
      const auto& f = std::get<HybridFeatures>(ext);
      if (key == "min_parties") return f.num_parties >= parse_count_value(key, value);
      auto t = parse_enum<Technique>(value);
      if (!t) throw InvalidFilterError("filter 'combines' got unknown technique '" + std::string(value) + "'");
      return std::find(f.techniques.begin(), f.techniques.end(), *t) != f.techniques.end();
    }
    case Technique::DP:
      break;
  }
  return false;
}

}  // namespace detail

/// Technique-specific filter names available for a technique.
inline std::vector<std::string> technique_filter_keys(Technique t) {
  std::vector<std::string> out;
  for (const auto& k : detail::kTechniqueFilterKeys) {
    if (k.technique == t) out.emplace_back(k.key);
  }
  return out;
}

/// Whether `r` satisfies every specified search attribute. No vocabulary checks.
inline bool matches(const FrameworkRecord& r, const SearchQuery& q) {
  if (q.technique && r.technique != *q.technique) return false;
  if (!q.ml_models.empty() && !detail::any_of_in(r.ml_models, q.ml_models)) return false;
  if (!q.threat_models.empty()) {
    bool any = std::any_of(r.threat_models.begin(), r.threat_models.end(),
                           [&](ThreatModel m) { return q.threat_models.count(m) > 0; });
    if (!any) return false;
  }
  if (!q.datasets.empty() && !detail::any_of_in(r.datasets, q.datasets)) return false;
  if (q.training_status && !training_covers(r.training_support, *q.training_status)) return false;
  if (q.open_source && r.open_source != *q.open_source) return false;
  return true;
}

/// Records of the catalog matching the query, in catalog (id) order.
/// Throws UnknownVocabularyError when a queried model or dataset is not known to the catalog.
inline std::vector<FrameworkRecord> search(const Catalog& catalog, const SearchQuery& query) {
  if (!query.ml_models.empty() || !query.datasets.empty()) {
    const auto vocab = vocabularies(catalog);
    detail::require_known(query.ml_models, vocab.ml_models, "ML model");
    detail::require_known(query.datasets, vocab.datasets, "dataset");
  }
  std::vector<FrameworkRecord> out;
  for (const auto& r : catalog.records()) {
    if (matches(r, query)) out.push_back(r);
  }
  return out;
}

/// Checks that every technique-specific key exists and belongs to the query's technique,
/// and that its value parses. Throws InvalidFilterError.
inline void check_filters(const SearchQuery& query, const FilterSet& filters) {
  for (const auto& [key, value] : filters.technique_specific) {
    const auto* k = detail::find_filter_key(key);
    if (k == nullptr) throw InvalidFilterError("unknown technique filter '" + key + "'");
    if (!query.technique) {
      throw InvalidFilterError("technique filter '" + key + "' requires a technique in the search");
    }
    if (k->technique != *query.technique) {
      throw InvalidFilterError("technique filter '" + key + "' does not apply to " +
                               std::string(to_string(*query.technique)));
    }
    // Validates the value format; the extension is a throwaway of the right kind.
    TechniqueExtension probe;
    switch (k->technique) {
      case Technique::FL: probe = FlFeatures{}; break;
      case Technique::TEE: probe = TeeFeatures{}; break;
      case Technique::MPC: probe = MpcFeatures{}; break;
      case Technique::HE: probe = HeFeatures{}; break;
      case Technique::Hybrid: probe = HybridFeatures{}; break;
      case Technique::DP: probe = DpFeatures{}; break;
    }
    detail::technique_predicate(*k, value, probe);
  }
}

/// Whether `r` passes every specified filter. Throws InvalidFilterError when a
/// technique-specific key does not apply to the record's technique.
inline bool passes(const FrameworkRecord& r, const FilterSet& f) {
  if (!f.acceleration.empty()) {
    auto acc = accelerators_of(r.extension);
    if (!detail::any_of_in(acc, f.acceleration)) return false;
  }
  if (!f.schemes_or_protocols.empty() && !detail::any_of_in(schemes_of(r.extension), f.schemes_or_protocols)) {
    return false;
  }
  if (!f.libraries.empty() && !detail::any_of_in(libraries_of(r.extension), f.libraries)) return false;
  for (const auto& [key, value] : f.technique_specific) {
    const auto* k = detail::find_filter_key(key);
    if (k == nullptr) throw InvalidFilterError("unknown technique filter '" + key + "'");
    if (k->technique != r.technique) {
      throw InvalidFilterError("technique filter '" + key + "' does not apply to " + std::string(to_string(r.technique)) +
                               " framework '" + r.id + "'");
    }
    if (!detail::technique_predicate(*k, value, r.extension)) return false;
  }
  return true;
}

/// Subset of `records` passing every filter, in input order.
inline std::vector<FrameworkRecord> apply_filters(std::span<const FrameworkRecord> records, const FilterSet& filters) {
  std::vector<FrameworkRecord> out;
  for (const auto& r : records) {
    if (passes(r, filters)) out.push_back(r);
  }
  return out;
}

}  // namespace ppmlrank
