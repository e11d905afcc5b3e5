#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ppmlrank/types.hpp"

namespace ppmlrank {

/// One reported or locally reproduced accuracy figure.
/// Accuracy is a fraction in (0, 1]; 92% is stored as 0.92.
struct ResultEntry {
  std::string dataset;
  std::string model;
  double accuracy = 0.0;
  std::optional<double> inference_time;         // seconds
  std::optional<std::uint64_t> memory;          // bytes
  std::optional<std::uint64_t> communication;   // bytes
  ResultSource source = ResultSource::Published;

  bool operator==(const ResultEntry&) const = default;
};

// Per-technique feature blocks. The set is closed: a record carries exactly one,
// and its alternative must agree with FrameworkRecord::technique.

struct FlFeatures {
  int num_clients = 1;
  int num_rounds = 1;
  std::vector<Accelerator> acceleration;
  std::string library;
  FlMethodology methodology = FlMethodology::Centralized;
  std::vector<std::string> aggregation_algorithms;

  bool operator==(const FlFeatures&) const = default;
};

struct DpFeatures {
  std::string scheme;

  bool operator==(const DpFeatures&) const = default;
};

struct TeeFeatures {
  std::string hardware;
  std::vector<std::string> protected_attacks;
  std::vector<Accelerator> acceleration;
  bool integrity_check = false;
  bool edge_support = false;

  bool operator==(const TeeFeatures&) const = default;
};

struct MpcFeatures {
  std::vector<std::string> schemes;
  int num_participants = 2;

  bool operator==(const MpcFeatures&) const = default;
};

struct HeFeatures {
  std::string scheme;
  bool normalization_support = false;
  std::vector<Accelerator> acceleration;
  std::string library;
  bool bootstrapping = false;

  bool operator==(const HeFeatures&) const = default;
};

struct HybridFeatures {
  std::vector<Technique> techniques;
  int num_parties = 2;
  std::vector<Accelerator> acceleration;

  bool operator==(const HybridFeatures&) const = default;
};

using TechniqueExtension =
    std::variant<FlFeatures, DpFeatures, TeeFeatures, MpcFeatures, HeFeatures, HybridFeatures>;

inline Technique technique_of(const TechniqueExtension& ext) {
  struct Visitor {
    Technique operator()(const FlFeatures&) const { return Technique::FL; }
    Technique operator()(const DpFeatures&) const { return Technique::DP; }
    Technique operator()(const TeeFeatures&) const { return Technique::TEE; }
    Technique operator()(const MpcFeatures&) const { return Technique::MPC; }
    Technique operator()(const HeFeatures&) const { return Technique::HE; }
    Technique operator()(const HybridFeatures&) const { return Technique::Hybrid; }
  };
  return std::visit(Visitor{}, ext);
}

/// Hardware accelerators declared by the extension; empty for techniques without the field.
inline std::vector<Accelerator> accelerators_of(const TechniqueExtension& ext) {
  if (const auto* fl = std::get_if<FlFeatures>(&ext)) return fl->acceleration;
  if (const auto* tee = std::get_if<TeeFeatures>(&ext)) return tee->acceleration;
  if (const auto* he = std::get_if<HeFeatures>(&ext)) return he->acceleration;
  if (const auto* hy = std::get_if<HybridFeatures>(&ext)) return hy->acceleration;
  return {};
}

/// Protocols / schemes named by the extension (MPC schemes, DP or HE scheme).
inline std::vector<std::string> schemes_of(const TechniqueExtension& ext) {
  if (const auto* mpc = std::get_if<MpcFeatures>(&ext)) return mpc->schemes;
  if (const auto* dp = std::get_if<DpFeatures>(&ext)) {
    return dp->scheme.empty() ? std::vector<std::string>{} : std::vector<std::string>{dp->scheme};
  }
  if (const auto* he = std::get_if<HeFeatures>(&ext)) {
    return he->scheme.empty() ? std::vector<std::string>{} : std::vector<std::string>{he->scheme};
  }
  return {};
}

/// Implementation libraries named by the extension (FL and HE carry one).
inline std::vector<std::string> libraries_of(const TechniqueExtension& ext) {
  const std::string* lib = nullptr;
  if (const auto* fl = std::get_if<FlFeatures>(&ext)) lib = &fl->library;
  if (const auto* he = std::get_if<HeFeatures>(&ext)) lib = &he->library;
  if (lib == nullptr || lib->empty()) return {};
  return {*lib};
}

struct FrameworkRecord {
  std::string id;
  std::string name;
  Technique technique = Technique::MPC;
  std::vector<std::string> authors;
  std::string abstract;
  std::vector<std::string> links;
  std::set<ThreatModel> threat_models;
  bool data_privacy = false;
  bool model_privacy = false;
  TrainingSupport training_support = TrainingSupport::InferenceOnly;
  bool open_source = false;
  bool verified = false;
  std::vector<std::string> ml_models;
  std::vector<std::string> datasets;
  std::vector<std::string> nonlinear_functions;
  TechniqueExtension extension = MpcFeatures{};
  std::vector<ResultEntry> results;
  std::optional<std::string> verification_notes;

  bool operator==(const FrameworkRecord&) const = default;
};

/// Lowercase slug: non-empty, [a-z0-9], '-', '_' or '.', not starting with '.'.
inline bool is_valid_id(const std::string& id) {
  if (id.empty() || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
  });
}

/// Checks every record invariant. Returns one description per violation; empty means valid.
inline std::vector<std::string> validate(const FrameworkRecord& r) {
  std::vector<std::string> out;

  if (r.id.empty()) {
    out.emplace_back("id non-empty");
  } else if (!is_valid_id(r.id)) {
    out.emplace_back("id must be a lowercase slug ([a-z0-9._-])");
  }
  if (r.name.empty()) out.emplace_back("name non-empty");
  if (r.threat_models.empty()) out.emplace_back("threat_models non-empty");

  if (technique_of(r.extension) != r.technique) out.emplace_back("extension tag mismatch");

  if (const auto* fl = std::get_if<FlFeatures>(&r.extension)) {
    if (fl->num_clients < 1) out.emplace_back("extension.num_clients positive");
    if (fl->num_rounds < 1) out.emplace_back("extension.num_rounds positive");
  } else if (const auto* mpc = std::get_if<MpcFeatures>(&r.extension)) {
    if (mpc->num_participants < 2) out.emplace_back("extension.num_participants >= 2");
  } else if (const auto* hy = std::get_if<HybridFeatures>(&r.extension)) {
    std::set<Technique> distinct(hy->techniques.begin(), hy->techniques.end());
    if (distinct.size() < 2) out.emplace_back("extension.techniques at least 2 distinct");
    if (distinct.size() != hy->techniques.size()) out.emplace_back("extension.techniques duplicates");
    if (hy->num_parties < 1) out.emplace_back("extension.num_parties positive");
  }

  bool verified_entry = false;
  for (std::size_t i = 0; i < r.results.size(); ++i) {
    const auto& e = r.results[i];
    const std::string at = "results[" + std::to_string(i) + "]";
    if (e.dataset.empty()) {
      out.push_back(at + ".dataset non-empty");
    } else if (std::find(r.datasets.begin(), r.datasets.end(), e.dataset) == r.datasets.end()) {
      out.push_back(at + ".dataset '" + e.dataset + "' not listed in datasets");
    }
    // Negated form so NaN fails too.
    if (!(e.accuracy > 0.0 && e.accuracy <= 1.0)) out.push_back(at + ".accuracy in (0, 1]");
    if (e.inference_time && !(*e.inference_time > 0.0)) out.push_back(at + ".inference_time positive");
    if (e.memory && *e.memory == 0) out.push_back(at + ".memory positive");
    if (e.communication && *e.communication == 0) out.push_back(at + ".communication positive");
    if (e.source == ResultSource::Verified) verified_entry = true;
  }
  if (verified_entry && !r.verified) out.emplace_back("verified-source entry on unverified framework");

  return out;
}

}  // namespace ppmlrank
