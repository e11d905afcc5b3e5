#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ppmlrank/errors.hpp"
#include "ppmlrank/record.hpp"

namespace ppmlrank {

/// Immutable, id-keyed snapshot of framework records.
///
/// Copies are cheap and share storage. Records are kept sorted by id, so iteration
/// order is deterministic. Mutation is expressed as a new snapshot with version + 1.
class Catalog {
 public:
  Catalog() : records_(std::make_shared<const std::vector<FrameworkRecord>>()) {}

  /// Builds a snapshot from validated records. Throws ValidationError on an invalid
  /// record and DuplicateIdError when two records share an id.
  static Catalog from_records(std::vector<FrameworkRecord> records, std::uint64_t version = 1) {
    for (const auto& r : records) {
      auto violations = validate(r);
      if (!violations.empty()) throw ValidationError(std::move(violations), r.id);
    }
    std::sort(records.begin(), records.end(),
              [](const FrameworkRecord& a, const FrameworkRecord& b) { return a.id < b.id; });
    auto dup = std::adjacent_find(records.begin(), records.end(),
                                  [](const FrameworkRecord& a, const FrameworkRecord& b) { return a.id == b.id; });
    if (dup != records.end()) throw DuplicateIdError(dup->id);
    return Catalog(std::make_shared<const std::vector<FrameworkRecord>>(std::move(records)), version);
  }

  std::uint64_t version() const noexcept { return version_; }
  std::size_t size() const noexcept { return records_->size(); }
  bool empty() const noexcept { return records_->empty(); }
  const std::vector<FrameworkRecord>& records() const noexcept { return *records_; }

  const FrameworkRecord* find(std::string_view id) const {
    auto it = std::lower_bound(records_->begin(), records_->end(), id,
                               [](const FrameworkRecord& r, std::string_view key) { return r.id < key; });
    if (it == records_->end() || it->id != id) return nullptr;
    return &*it;
  }

  bool contains(std::string_view id) const { return find(id) != nullptr; }

  const FrameworkRecord& at(std::string_view id) const {
    if (const auto* r = find(id)) return *r;
    throw NotFoundError("unknown framework id '" + std::string(id) + "'");
  }

  /// New snapshot with `record` added and version + 1.
  Catalog with_record(FrameworkRecord record) const {
    if (contains(record.id)) throw DuplicateIdError(record.id);
    std::vector<FrameworkRecord> next = *records_;
    next.push_back(std::move(record));
    return from_records(std::move(next), version_ + 1);
  }

  /// Same records, same version. Snapshots compare by content, not by storage.
  bool operator==(const Catalog& other) const {
    return version_ == other.version_ && *records_ == *other.records_;
  }

 private:
  Catalog(std::shared_ptr<const std::vector<FrameworkRecord>> records, std::uint64_t version)
      : records_(std::move(records)), version_(version) {}

  std::shared_ptr<const std::vector<FrameworkRecord>> records_;
  std::uint64_t version_ = 1;
};

using DatasetMaxima = std::map<std::string, double, std::less<>>;

/// Highest accuracy per dataset over all entries of the given source.
/// Datasets without an entry of that source are absent.
inline DatasetMaxima dataset_maxima(const Catalog& catalog, ResultSource source) {
  DatasetMaxima out;
  for (const auto& r : catalog.records()) {
    for (const auto& e : r.results) {
      if (e.source != source) continue;
      auto [it, inserted] = out.try_emplace(e.dataset, e.accuracy);
      if (!inserted) it->second = std::max(it->second, e.accuracy);
    }
  }
  return out;
}

/// Known values across a catalog, each sorted and deduplicated.
struct Vocabularies {
  std::vector<std::string> datasets;
  std::vector<std::string> ml_models;
  std::vector<std::string> libraries;
  std::vector<std::string> schemes;
  std::vector<std::string> nonlinear_functions;

  bool operator==(const Vocabularies&) const = default;
};

inline Vocabularies vocabularies(const Catalog& catalog) {
  std::set<std::string> datasets, models, libraries, schemes, nonlinear;
  for (const auto& r : catalog.records()) {
    datasets.insert(r.datasets.begin(), r.datasets.end());
    models.insert(r.ml_models.begin(), r.ml_models.end());
    nonlinear.insert(r.nonlinear_functions.begin(), r.nonlinear_functions.end());
    for (auto& s : libraries_of(r.extension)) libraries.insert(std::move(s));
    for (auto& s : schemes_of(r.extension)) schemes.insert(std::move(s));
  }
  auto to_vec = [](std::set<std::string>& s) { return std::vector<std::string>(s.begin(), s.end()); };
  return {to_vec(datasets), to_vec(models), to_vec(libraries), to_vec(schemes), to_vec(nonlinear)};
}

}  // namespace ppmlrank
