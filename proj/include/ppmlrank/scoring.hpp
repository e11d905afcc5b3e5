#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppmlrank/catalog.hpp"
#include "ppmlrank/errors.hpp"
#include "ppmlrank/record.hpp"

namespace ppmlrank {

/// The six ranking criteria, in canonical order.
enum class FactorKind : std::size_t {
  ThreatModel = 0,
  Privacy,
  PublishedAccuracy,
  VerifiableResults,
  OpenSource,
  TrainingSupport,
};

inline constexpr std::size_t kFactorCount = 6;

inline constexpr std::array<FactorKind, kFactorCount> kFactorKinds{
    FactorKind::ThreatModel,       FactorKind::Privacy,    FactorKind::PublishedAccuracy,
    FactorKind::VerifiableResults, FactorKind::OpenSource, FactorKind::TrainingSupport,
};

/// Machine key used in JSON bodies and report headers.
constexpr std::string_view factor_key(FactorKind f) {
  constexpr std::array<std::string_view, kFactorCount> keys{
      "threat_model", "privacy", "published_accuracy", "verifiable_results", "open_source", "training_support"};
  return keys[static_cast<std::size_t>(f)];
}

constexpr std::string_view factor_label(FactorKind f) {
  constexpr std::array<std::string_view, kFactorCount> labels{
      "Threat Model Protection", "Model and Data Privacy", "Published Accuracy",
      "Verifiable Results",      "Open-source Status",     "Training and Inference Support"};
  return labels[static_cast<std::size_t>(f)];
}

namespace detail {

/// Six values in [0, 1] indexed by FactorKind. Tag keeps points and weights apart.
template <typename Tag>
class UnitSextuple {
 public:
  constexpr UnitSextuple() = default;

  /// Throws OutOfRangeError unless every value lies in [0, 1].
  explicit UnitSextuple(const std::array<double, kFactorCount>& values) : values_(values) {
    for (std::size_t i = 0; i < kFactorCount; ++i) {
      if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) {
        throw OutOfRangeError(std::string(Tag::kWhat) + " '" + std::string(factor_key(kFactorKinds[i])) +
                              "' outside [0, 1]: " + std::to_string(values_[i]));
      }
    }
  }

  constexpr double operator[](FactorKind f) const { return values_[static_cast<std::size_t>(f)]; }
  constexpr const std::array<double, kFactorCount>& values() const { return values_; }

  /// Copy with one component replaced (range-checked).
  UnitSextuple with(FactorKind f, double v) const {
    auto next = values_;
    next[static_cast<std::size_t>(f)] = v;
    return UnitSextuple(next);
  }

  bool operator==(const UnitSextuple&) const = default;

 private:
  std::array<double, kFactorCount> values_{};
};

struct PointsTag {
  static constexpr const char* kWhat = "factor point";
};
struct WeightsTag {
  static constexpr const char* kWhat = "weight";
};

}  // namespace detail

/// Per-framework points, one per factor.
using FactorVector = detail::UnitSextuple<detail::PointsTag>;

// Factor point rules.

constexpr double threat_point(ThreatModel m) {
  switch (m) {
    case ThreatModel::Malicious:
      return 1.00;
    case ThreatModel::SemiHonest:
      return 0.75;
    case ThreatModel::SemiHonestWithTrustedThirdParty:
      return 0.50;
  }
  return 0.0;
}

/// Strongest declared model wins. Empty set scores 0 (never valid in a catalog).
inline double threat_point(const std::set<ThreatModel>& models) {
  double best = 0.0;
  for (auto m : models) best = std::max(best, threat_point(m));
  return best;
}

constexpr double privacy_point(bool data_privacy, bool model_privacy) {
  return (data_privacy ? 0.5 : 0.0) + (model_privacy ? 0.5 : 0.0);
}

constexpr double training_point(TrainingSupport s) { return s == TrainingSupport::Both ? 1.0 : 0.5; }

constexpr double open_source_point(bool open_source) { return open_source ? 1.0 : 0.0; }

/// Mean of accuracy / dataset-maximum over the entries; 0 when there are none.
/// Throws MissingMaximumError when an entry's dataset has no maximum.
inline double accuracy_point(std::span<const ResultEntry> entries, const DatasetMaxima& maxima) {
  if (entries.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& e : entries) {
    auto it = maxima.find(e.dataset);
    if (it == maxima.end() || !(it->second > 0.0)) {
      throw MissingMaximumError("no " + std::string(to_string(e.source)) + " maximum for dataset '" + e.dataset + "'");
    }
    sum += e.accuracy / it->second;
  }
  return std::clamp(sum / static_cast<double>(entries.size()), 0.0, 1.0);
}

inline std::vector<ResultEntry> entries_of(const FrameworkRecord& r, ResultSource source) {
  std::vector<ResultEntry> out;
  std::copy_if(r.results.begin(), r.results.end(), std::back_inserter(out),
               [source](const ResultEntry& e) { return e.source == source; });
  return out;
}

/// Normalized verified accuracy when verified entries exist; otherwise the
/// validated flag decides between 1 and 0.
inline double verification_point(const FrameworkRecord& r, const DatasetMaxima& verified_maxima) {
  auto verified = entries_of(r, ResultSource::Verified);
  if (!verified.empty()) return accuracy_point(verified, verified_maxima);
  return r.verified ? 1.0 : 0.0;
}

/// Per-source dataset maxima of one catalog snapshot, computed once and reused for
/// every record scored against that snapshot.
struct ScoringContext {
  DatasetMaxima published;
  DatasetMaxima verified;

  static ScoringContext of(const Catalog& catalog) {
    return {dataset_maxima(catalog, ResultSource::Published), dataset_maxima(catalog, ResultSource::Verified)};
  }
};

inline FactorVector factor_vector(const FrameworkRecord& r, const ScoringContext& ctx) {
  return FactorVector({
      threat_point(r.threat_models),
      privacy_point(r.data_privacy, r.model_privacy),
      accuracy_point(entries_of(r, ResultSource::Published), ctx.published),
      verification_point(r, ctx.verified),
      open_source_point(r.open_source),
      training_point(r.training_support),
  });
}

inline FactorVector factor_vector(const FrameworkRecord& r, const Catalog& catalog) {
  return factor_vector(r, ScoringContext::of(catalog));
}

}  // namespace ppmlrank
