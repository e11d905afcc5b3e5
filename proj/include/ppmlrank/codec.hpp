#pragma once

// Framework record documents: UTF-8 JSON objects with snake_case keys mirroring
// FrameworkRecord. Unknown keys and unknown enum names are rejected.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ppmlrank/catalog.hpp"
#include "ppmlrank/errors.hpp"
#include "ppmlrank/record.hpp"

namespace ppmlrank {

using Json = nlohmann::ordered_json;

namespace detail {

/// Reads fields from one JSON object, remembering which keys were consumed so that
/// leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
  }

  std::string at(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

  const Json* get(std::string_view key) {
    seen_.insert(std::string(key));
    auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  const Json& require(std::string_view key) {
    const Json* v = get(key);
    if (v == nullptr) fail(at(key), "missing required field");
    return *v;
  }

  std::string string(std::string_view key, bool required) {
    const Json* v = required ? &require(key) : get(key);
    if (v == nullptr) return {};
    if (!v->is_string()) fail(at(key), "expected a string");
    return v->get<std::string>();
  }

  std::optional<std::string> optional_string(std::string_view key) {
    const Json* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) fail(at(key), "expected a string");
    return v->get<std::string>();
  }

  bool boolean(std::string_view key, bool required, bool fallback = false) {
    const Json* v = required ? &require(key) : get(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) fail(at(key), "expected a boolean");
    return v->get<bool>();
  }

  int integer(std::string_view key) {
    const Json& v = require(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    auto n = v.get<std::int64_t>();
    if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) fail(at(key), "integer out of range");
    return static_cast<int>(n);
  }

  double number(std::string_view key) {
    const Json& v = require(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(std::string_view key) {
    const Json* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) fail(at(key), "expected a number");
    return v->get<double>();
  }

  std::optional<std::uint64_t> optional_count(std::string_view key) {
    const Json* v = get(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      fail(at(key), "expected a non-negative integer");
    }
    return v->get<std::uint64_t>();
  }

  std::vector<std::string> strings(std::string_view key) {
    std::vector<std::string> out;
    const Json* v = get(key);
    if (v == nullptr) return out;
    if (!v->is_array()) fail(at(key), "expected an array of strings");
    for (const auto& item : *v) {
      if (!item.is_string()) fail(at(key), "expected an array of strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }

  template <typename E>
  E enumeration(std::string_view key) {
    const Json& v = require(key);
    return enum_value<E>(v, at(key));
  }

  template <typename E>
  std::vector<E> enumerations(std::string_view key) {
    std::vector<E> out;
    const Json* v = get(key);
    if (v == nullptr) return out;
    if (!v->is_array()) fail(at(key), "expected an array");
    for (const auto& item : *v) out.push_back(enum_value<E>(item, at(key)));
    return out;
  }

  template <typename E>
  static E enum_value(const Json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected a string");
    auto s = v.get<std::string>();
    auto e = parse_enum<E>(s);
    if (!e) fail(where, "unknown value '" + s + "'");
    return *e;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) fail(at(key), "unknown field");
    }
  }

 private:
  const Json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename E>
Json enum_array(const std::vector<E>& values) {
  Json arr = Json::array();
  for (E v : values) arr.push_back(std::string(to_string(v)));
  return arr;
}

inline Json string_array(const std::vector<std::string>& values) {
  Json arr = Json::array();
  for (const auto& v : values) arr.push_back(v);
  return arr;
}

inline TechniqueExtension parse_extension(const Json& j) {
  ObjectReader in(j, "extension");
  const auto technique = in.enumeration<Technique>("technique");
  TechniqueExtension ext;
  switch (technique) {
    case Technique::FL: {
      FlFeatures f;
      f.num_clients = in.integer("num_clients");
      f.num_rounds = in.integer("num_rounds");
      f.acceleration = in.enumerations<Accelerator>("acceleration");
      f.library = in.string("library", false);
      f.methodology = in.enumeration<FlMethodology>("methodology");
      f.aggregation_algorithms = in.strings("aggregation_algorithms");
      ext = std::move(f);
      break;
    }
    case Technique::DP: {
      DpFeatures f;
      f.scheme = in.string("scheme", false);
      ext = std::move(f);
      break;
    }
    case Technique::TEE: {
      TeeFeatures f;
      f.hardware = in.string("hardware", false);
      f.protected_attacks = in.strings("protected_attacks");
      f.acceleration = in.enumerations<Accelerator>("acceleration");
      f.integrity_check = in.boolean("integrity_check", true);
      f.edge_support = in.boolean("edge_support", true);
      ext = std::move(f);
      break;
    }
    case Technique::MPC: {
      MpcFeatures f;
      f.schemes = in.strings("schemes");
      f.num_participants = in.integer("num_participants");
      ext = std::move(f);
      break;
    }
    case Technique::HE: {
      HeFeatures f;
      f.scheme = in.string("scheme", false);
      f.normalization_support = in.boolean("normalization_support", true);
      f.acceleration = in.enumerations<Accelerator>("acceleration");
      f.library = in.string("library", false);
      f.bootstrapping = in.boolean("bootstrapping", true);
      ext = std::move(f);
      break;
    }
    case Technique::Hybrid: {
      HybridFeatures f;
      f.techniques = in.enumerations<Technique>("techniques");
      f.num_parties = in.integer("num_parties");
      f.acceleration = in.enumerations<Accelerator>("acceleration");
      ext = std::move(f);
      break;
    }
  }
  in.finish();
  return ext;
}

inline Json extension_to_json(const TechniqueExtension& ext) {
  Json j;
  j["technique"] = std::string(to_string(technique_of(ext)));
  std::visit(
      [&j](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FlFeatures>) {
          j["num_clients"] = f.num_clients;
          j["num_rounds"] = f.num_rounds;
          j["acceleration"] = enum_array(f.acceleration);
          j["library"] = f.library;
          j["methodology"] = std::string(to_string(f.methodology));
          j["aggregation_algorithms"] = string_array(f.aggregation_algorithms);
        } else if constexpr (std::is_same_v<T, DpFeatures>) {
          j["scheme"] = f.scheme;
        } else if constexpr (std::is_same_v<T, TeeFeatures>) {
          j["hardware"] = f.hardware;
          j["protected_attacks"] = string_array(f.protected_attacks);
          j["acceleration"] = enum_array(f.acceleration);
          j["integrity_check"] = f.integrity_check;
          j["edge_support"] = f.edge_support;
        } else if constexpr (std::is_same_v<T, MpcFeatures>) {
          j["schemes"] = string_array(f.schemes);
          j["num_participants"] = f.num_participants;
        } else if constexpr (std::is_same_v<T, HeFeatures>) {
          j["scheme"] = f.scheme;
          j["normalization_support"] = f.normalization_support;
          j["acceleration"] = enum_array(f.acceleration);
          j["library"] = f.library;
          j["bootstrapping"] = f.bootstrapping;
        } else {
          j["techniques"] = enum_array(f.techniques);
          j["num_parties"] = f.num_parties;
          j["acceleration"] = enum_array(f.acceleration);
        }
      },
      ext);
  return j;
}

inline ResultEntry parse_result(const Json& j, const std::string& path) {
  ObjectReader in(j, path);
  ResultEntry e;
  e.dataset = in.string("dataset", true);
  e.model = in.string("model", false);
  e.accuracy = in.number("accuracy");
  e.inference_time = in.optional_number("inference_time");
  e.memory = in.optional_count("memory");
  e.communication = in.optional_count("communication");
  e.source = in.enumeration<ResultSource>("source");
  in.finish();
  return e;
}

inline Json result_to_json(const ResultEntry& e) {
  Json j;
  j["dataset"] = e.dataset;
  j["model"] = e.model;
  j["accuracy"] = e.accuracy;
  if (e.inference_time) j["inference_time"] = *e.inference_time;
  if (e.memory) j["memory"] = *e.memory;
  if (e.communication) j["communication"] = *e.communication;
  j["source"] = std::string(to_string(e.source));
  return j;
}

}  // namespace detail

/// Decodes a record from its JSON value without validating invariants.
/// Throws ParseError on structural problems.
inline FrameworkRecord record_from_json(const Json& j) {
  detail::ObjectReader in(j, "");
  FrameworkRecord r;
  r.id = in.string("id", true);
  r.name = in.string("name", true);
  r.technique = in.enumeration<Technique>("technique");
  r.authors = in.strings("authors");
  r.abstract = in.string("abstract", false);
  r.links = in.strings("links");
  for (auto tm : in.enumerations<ThreatModel>("threat_models")) r.threat_models.insert(tm);
  r.data_privacy = in.boolean("data_privacy", true);
  r.model_privacy = in.boolean("model_privacy", true);
  r.training_support = in.enumeration<TrainingSupport>("training_support");
  r.open_source = in.boolean("open_source", true);
  r.verified = in.boolean("verified", true);
  r.ml_models = in.strings("ml_models");
  r.datasets = in.strings("datasets");
  r.nonlinear_functions = in.strings("nonlinear_functions");
  r.extension = detail::parse_extension(in.require("extension"));
  if (const Json* results = in.get("results")) {
    if (!results->is_array()) detail::ObjectReader::fail("results", "expected an array");
    for (std::size_t i = 0; i < results->size(); ++i) {
      r.results.push_back(detail::parse_result((*results)[i], "results[" + std::to_string(i) + "]"));
    }
  }
  r.verification_notes = in.optional_string("verification_notes");
  in.finish();
  return r;
}

inline Json record_to_json(const FrameworkRecord& r) {
  Json j;
  j["id"] = r.id;
  j["name"] = r.name;
  j["technique"] = std::string(to_string(r.technique));
  j["authors"] = detail::string_array(r.authors);
  j["abstract"] = r.abstract;
  j["links"] = detail::string_array(r.links);
  j["threat_models"] = detail::enum_array(std::vector<ThreatModel>(r.threat_models.begin(), r.threat_models.end()));
  j["data_privacy"] = r.data_privacy;
  j["model_privacy"] = r.model_privacy;
  j["training_support"] = std::string(to_string(r.training_support));
  j["open_source"] = r.open_source;
  j["verified"] = r.verified;
  j["ml_models"] = detail::string_array(r.ml_models);
  j["datasets"] = detail::string_array(r.datasets);
  j["nonlinear_functions"] = detail::string_array(r.nonlinear_functions);
  j["extension"] = detail::extension_to_json(r.extension);
  Json results = Json::array();
  for (const auto& e : r.results) results.push_back(detail::result_to_json(e));
  j["results"] = std::move(results);
  if (r.verification_notes) j["verification_notes"] = *r.verification_notes;
  return j;
}

/// Parses and validates one record document.
/// Throws ParseError for malformed input and ValidationError for broken invariants.
inline FrameworkRecord ingest_record(std::string_view document) {
  Json j;
  try {
    j = Json::parse(document.begin(), document.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  FrameworkRecord r = record_from_json(j);
  auto violations = validate(r);
  if (!violations.empty()) throw ValidationError(std::move(violations), r.id);
  return r;
}

/// The canonical backup document of a record, pretty-printed with a trailing newline.
inline std::string record_document(const FrameworkRecord& r) { return record_to_json(r).dump(2) + "\n"; }

inline std::string export_backup(const Catalog& catalog, std::string_view id) {
  return record_document(catalog.at(id));
}

inline std::string backup_filename(std::string_view id) { return std::string(id) + ".json"; }

/// Outcome of reading one catalog directory without failing fast.
struct CatalogScan {
  struct Issue {
    std::string file;
    std::vector<std::string> messages;
  };
  std::vector<FrameworkRecord> records;
  std::vector<std::string> files;  // parallel to records
  std::vector<Issue> issues;

  bool clean() const { return issues.empty(); }
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes through a temporary file and renames, so readers never observe a partial document.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

/// The "*.json" files of a flat catalog directory, sorted by name.
inline std::vector<std::filesystem::path> record_files(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

/// Reads every "*.json" file of a flat directory, in filename order, collecting
/// per-file problems instead of throwing.
inline CatalogScan scan_catalog_dir(const std::filesystem::path& dir) {
  const auto files = record_files(dir);

  CatalogScan scan;
  std::map<std::string, std::string> owner;  // id -> file
  for (const auto& path : files) {
    const auto name = path.filename().string();
    try {
      FrameworkRecord r = ingest_record(read_file(path));
      if (auto it = owner.find(r.id); it != owner.end()) {
        scan.issues.push_back({name, {"duplicate framework id '" + r.id + "' (also in " + it->second + ")"}});
        continue;
      }
      owner.emplace(r.id, name);
      scan.records.push_back(std::move(r));
      scan.files.push_back(name);
    } catch (const ValidationError& e) {
      scan.issues.push_back({name, e.violations()});
    } catch (const Error& e) {
      scan.issues.push_back({name, {e.what()}});
    }
  }
  return scan;
}

/// Loads a catalog directory as version 1. The first problem is rethrown with the
/// offending filename as context.
inline Catalog load_catalog(const std::filesystem::path& dir) {
  const auto files = record_files(dir);

  std::vector<FrameworkRecord> records;
  std::map<std::string, std::string> owner;
  for (const auto& path : files) {
    const auto name = path.filename().string();
    FrameworkRecord r;
    try {
      r = ingest_record(read_file(path));
    } catch (const ValidationError& e) {
      throw ValidationError(e.violations(), name);
    } catch (const ParseError& e) {
      throw ParseError(name + ": " + e.what());
    }
    if (auto it = owner.find(r.id); it != owner.end()) throw DuplicateIdError(r.id, name + " and " + it->second);
    owner.emplace(r.id, name);
    records.push_back(std::move(r));
  }
  return Catalog::from_records(std::move(records), 1);
}

/// Writes "<id>.json" into `dir` and returns its path.
inline std::filesystem::path write_backup(const Catalog& catalog, std::string_view id, const std::filesystem::path& dir) {
  auto path = dir / backup_filename(id);
  write_file_atomic(path, export_backup(catalog, id));
  return path;
}

}  // namespace ppmlrank
