#pragma once

// JSON representations shared by the HTTP service and the CLI, so that both
// front doors produce byte-identical output for the same request.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ppmlrank/codec.hpp"
#include "ppmlrank/query.hpp"
#include "ppmlrank/ranker.hpp"
#include "ppmlrank/scoring.hpp"

namespace ppmlrank {

/// Search plus refinement, as decoded from a query string or a request body.
struct Selection {
  SearchQuery query;
  FilterSet filters;
};

struct RankRequest {
  SearchQuery query;
  FilterSet filters;
  /// Six integers on the 0..10 scale; default weights when absent.
  std::optional<std::array<int, kFactorCount>> ui_weights;
};

using QueryParams = std::vector<std::pair<std::string, std::string>>;

inline constexpr std::string_view kTechParamPrefix = "tech.";

namespace detail {

template <typename E>
E param_enum(const std::string& key, const std::string& value) {
  auto e = parse_enum<E>(value);
  if (!e) throw ParseError("parameter '" + key + "': unknown value '" + value + "'");
  return *e;
}

template <typename T>
void set_once(std::optional<T>& slot, T value, const std::string& key) {
  if (slot && *slot != value) throw ParseError("parameter '" + key + "' given conflicting values");
  slot = value;
}

inline std::string_view filter_kind_name(FilterValueKind k) {
  switch (k) {
    case FilterValueKind::Boolean: return "boolean";
    case FilterValueKind::Count: return "count";
    case FilterValueKind::Text: return "text";
    case FilterValueKind::Methodology: return "fl_methodology";
    case FilterValueKind::TechniqueName: return "technique";
  }
  return "text";
}

}  // namespace detail

/// Decodes the query-string encoding: repeated keys for set values, booleans as
/// true/false, technique-specific filters as tech.<key>=<value>. Throws ParseError
/// on an unknown parameter or an unparseable value.
inline Selection parse_query_params(const QueryParams& params) {
  Selection s;
  for (const auto& [key, value] : params) {
    if (key == "technique") {
      detail::set_once(s.query.technique, detail::param_enum<Technique>(key, value), key);
    } else if (key == "ml_model") {
      s.query.ml_models.insert(value);
    } else if (key == "threat_model") {
      s.query.threat_models.insert(detail::param_enum<ThreatModel>(key, value));
    } else if (key == "dataset") {
      s.query.datasets.insert(value);
    } else if (key == "training_status") {
      detail::set_once(s.query.training_status, detail::param_enum<TrainingSupport>(key, value), key);
    } else if (key == "open_source") {
      if (value != "true" && value != "false") throw ParseError("parameter 'open_source' expects true or false");
      detail::set_once(s.query.open_source, value == "true", key);
    } else if (key == "acceleration") {
      s.filters.acceleration.insert(detail::param_enum<Accelerator>(key, value));
    } else if (key == "scheme") {
      s.filters.schemes_or_protocols.insert(value);
    } else if (key == "library") {
      s.filters.libraries.insert(value);
    } else if (key.starts_with(kTechParamPrefix) && key.size() > kTechParamPrefix.size()) {
      auto name = key.substr(kTechParamPrefix.size());
      auto [it, inserted] = s.filters.technique_specific.emplace(name, value);
      if (!inserted && it->second != value) throw ParseError("parameter '" + key + "' given conflicting values");
    } else {
      throw ParseError("unknown parameter '" + key + "'");
    }
  }
  return s;
}

inline SearchQuery search_query_from_json(const Json& j) {
  detail::ObjectReader in(j, "query");
  SearchQuery q;
  if (in.get("technique")) q.technique = in.enumeration<Technique>("technique");
  for (auto& m : in.strings("ml_models")) q.ml_models.insert(std::move(m));
  for (auto t : in.enumerations<ThreatModel>("threat_models")) q.threat_models.insert(t);
  for (auto& d : in.strings("datasets")) q.datasets.insert(std::move(d));
  if (in.get("training_status")) q.training_status = in.enumeration<TrainingSupport>("training_status");
  if (in.get("open_source")) q.open_source = in.boolean("open_source", true);
  in.finish();
  return q;
}

inline FilterSet filter_set_from_json(const Json& j) {
  detail::ObjectReader in(j, "filters");
  FilterSet f;
  for (auto a : in.enumerations<Accelerator>("acceleration")) f.acceleration.insert(a);
  for (auto& s : in.strings("schemes_or_protocols")) f.schemes_or_protocols.insert(std::move(s));
  for (auto& l : in.strings("libraries")) f.libraries.insert(std::move(l));
  if (const Json* tech = in.get("technique_specific")) {
    if (!tech->is_object()) detail::ObjectReader::fail("filters.technique_specific", "expected an object");
    for (const auto& [key, value] : tech->items()) {
      // Booleans and counts may be sent as JSON literals or as strings.
      std::string text;
      if (value.is_string()) {
        text = value.get<std::string>();
      } else if (value.is_boolean() || value.is_number_integer()) {
        text = value.dump();
      } else {
        detail::ObjectReader::fail("filters.technique_specific." + key, "expected a string, boolean or integer");
      }
      f.technique_specific.emplace(key, std::move(text));
    }
  }
  in.finish();
  return f;
}

/// Decodes a rank request body. Throws ParseError when the body is malformed.
/// Weight range is checked later, by weights_from_ui_scale.
inline RankRequest rank_request_from_json(const Json& j) {
  detail::ObjectReader in(j, "");
  RankRequest req;
  if (const Json* q = in.get("query")) req.query = search_query_from_json(*q);
  if (const Json* f = in.get("filters")) req.filters = filter_set_from_json(*f);
  if (const Json* w = in.get("ui_weights")) {
    if (!w->is_array() || w->size() != kFactorCount) {
      detail::ObjectReader::fail("ui_weights", "expected an array of six integers");
    }
    std::array<int, kFactorCount> values{};
    for (std::size_t i = 0; i < kFactorCount; ++i) {
      const Json& v = (*w)[i];
      if (!v.is_number_integer()) detail::ObjectReader::fail("ui_weights", "expected an array of six integers");
      const auto n = v.get<std::int64_t>();
      // Clamp far-out values so they still report as a range error, not an overflow.
      values[i] = static_cast<int>(std::clamp<std::int64_t>(n, -1, kUiWeightMax + 1));
    }
    req.ui_weights = values;
  }
  in.finish();
  return req;
}

inline RankRequest parse_rank_request(std::string_view body) {
  Json j;
  try {
    j = Json::parse(body.begin(), body.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return rank_request_from_json(j);
}

/// Search then refine. Throws InvalidFilterError or UnknownVocabularyError.
inline std::vector<FrameworkRecord> select_frameworks(const Catalog& catalog, const SearchQuery& query,
                                                     const FilterSet& filters) {
  check_filters(query, filters);
  return apply_filters(search(catalog, query), filters);
}

inline WeightVector weights_of(const RankRequest& req) {
  return req.ui_weights ? weights_from_ui_scale(*req.ui_weights) : default_weights();
}

/// Full pipeline behind a rank request. Throws OutOfRangeError for bad weights.
inline RankedList evaluate(const Catalog& catalog, const RankRequest& req) {
  const auto weights = weights_of(req);
  return rank(select_frameworks(catalog, req.query, req.filters), weights, catalog);
}

template <typename Tag>
Json sextuple_json(const detail::UnitSextuple<Tag>& v) {
  Json j = Json::object();
  for (auto f : kFactorKinds) j[std::string(factor_key(f))] = v[f];
  return j;
}

inline Json ranked_list_json(const RankedList& list) {
  Json entries = Json::array();
  std::size_t position = 0;
  for (const auto& e : list.entries) {
    Json row;
    row["rank"] = ++position;
    row["id"] = e.id;
    row["name"] = e.name;
    row["score"] = e.score;
    row["factor_vector"] = sextuple_json(e.points);
    entries.push_back(std::move(row));
  }
  Json j;
  j["catalog_version"] = list.catalog_version;
  j["weights_used"] = sextuple_json(list.weights_used);
  j["entries"] = std::move(entries);
  return j;
}

/// The exact text returned for a rank request by every front door.
inline std::string ranked_list_document(const RankedList& list) { return ranked_list_json(list).dump(2) + "\n"; }

inline Json framework_summary_json(const FrameworkRecord& r, const ScoringContext& ctx) {
  Json j;
  j["id"] = r.id;
  j["name"] = r.name;
  j["technique"] = std::string(to_string(r.technique));
  j["factor_vector"] = sextuple_json(factor_vector(r, ctx));
  return j;
}

/// One page of search results with the total count before paging.
inline Json framework_list_json(const Catalog& catalog, const std::vector<FrameworkRecord>& found,
                                std::size_t offset = 0,
                                std::size_t limit = std::numeric_limits<std::size_t>::max()) {
  const auto ctx = ScoringContext::of(catalog);
  Json list = Json::array();
  for (std::size_t i = offset; i < found.size() && i - offset < limit; ++i) {
    list.push_back(framework_summary_json(found[i], ctx));
  }
  Json j;
  j["catalog_version"] = catalog.version();
  j["total"] = found.size();
  j["frameworks"] = std::move(list);
  return j;
}

inline Json framework_detail_json(const Catalog& catalog, const FrameworkRecord& r) {
  Json published = Json::array();
  Json verified = Json::array();
  for (const auto& e : r.results) {
    (e.source == ResultSource::Verified ? verified : published).push_back(detail::result_to_json(e));
  }
  Json j;
  j["catalog_version"] = catalog.version();
  j["record"] = record_to_json(r);
  j["factor_vector"] = sextuple_json(factor_vector(r, catalog));
  j["published_results"] = std::move(published);
  j["verified_results"] = std::move(verified);
  j["verification_notes"] = r.verification_notes ? Json(*r.verification_notes) : Json(nullptr);
  j["links"] = detail::string_array(r.links);
  return j;
}

template <typename Table>
Json enum_names(const Table& table) {
  Json arr = Json::array();
  for (const auto& [value, name] : table) arr.push_back(std::string(name));
  return arr;
}

/// Everything a client needs to populate its controls.
inline Json meta_json(const Catalog& catalog) {
  const auto vocab = vocabularies(catalog);
  Json factors = Json::array();
  for (auto f : kFactorKinds) {
    factors.push_back({{"key", std::string(factor_key(f))}, {"label", std::string(factor_label(f))}});
  }
  Json tech_filters = Json::object();
  for (auto t : kAllTechniques) {
    Json keys = Json::array();
    for (const auto& k : detail::kTechniqueFilterKeys) {
      if (k.technique == t) {
        keys.push_back({{"key", std::string(k.key)}, {"kind", std::string(detail::filter_kind_name(k.kind))}});
      }
    }
    tech_filters[std::string(to_string(t))] = std::move(keys);
  }
  Json j;
  j["catalog_version"] = catalog.version();
  j["vocabularies"] = {
      {"datasets", detail::string_array(vocab.datasets)},
      {"ml_models", detail::string_array(vocab.ml_models)},
      {"libraries", detail::string_array(vocab.libraries)},
      {"schemes", detail::string_array(vocab.schemes)},
      {"nonlinear_functions", detail::string_array(vocab.nonlinear_functions)},
  };
  j["factors"] = std::move(factors);
  j["weight_scale"] = {{"min", 0}, {"max", kUiWeightMax}, {"default", kUiWeightDefault}};
  j["techniques"] = enum_names(detail::kTechniqueNames);
  j["threat_models"] = enum_names(detail::kThreatModelNames);
  j["training_support"] = enum_names(detail::kTrainingSupportNames);
  j["accelerators"] = enum_names(detail::kAcceleratorNames);
  j["fl_methodologies"] = enum_names(detail::kFlMethodologyNames);
  j["technique_filters"] = std::move(tech_filters);
  return j;
}

}  // namespace ppmlrank
