#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace ppmlrank {

enum class Technique { FL, DP, TEE, MPC, HE, Hybrid };

enum class ThreatModel { Malicious, SemiHonest, SemiHonestWithTrustedThirdParty };

enum class TrainingSupport { InferenceOnly, TrainingOnly, Both };

enum class ResultSource { Published, Verified };

enum class Accelerator { GPU, FPGA, ASIC };

enum class FlMethodology { Centralized, Decentralized, Both };

namespace detail {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

template <typename E, std::size_t N>
constexpr std::string_view name_of(const NameTable<E, N>& table, E value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
constexpr std::optional<E> parse_name(const NameTable<E, N>& table, std::string_view text) {
  for (const auto& [e, name] : table) {
    if (name == text) return e;
  }
  return std::nullopt;
}

inline constexpr NameTable<Technique, 6> kTechniqueNames{{
    {Technique::FL, "FL"},
    {Technique::DP, "DP"},
    {Technique::TEE, "TEE"},
    {Technique::MPC, "MPC"},
    {Technique::HE, "HE"},
    {Technique::Hybrid, "Hybrid"},
}};

inline constexpr NameTable<ThreatModel, 3> kThreatModelNames{{
    {ThreatModel::Malicious, "malicious"},
    {ThreatModel::SemiHonest, "semi-honest"},
    {ThreatModel::SemiHonestWithTrustedThirdParty, "semi-honest-ttp"},
}};

inline constexpr NameTable<TrainingSupport, 3> kTrainingSupportNames{{
    {TrainingSupport::InferenceOnly, "inference-only"},
    {TrainingSupport::TrainingOnly, "training-only"},
    {TrainingSupport::Both, "both"},
}};

inline constexpr NameTable<ResultSource, 2> kResultSourceNames{{
    {ResultSource::Published, "published"},
    {ResultSource::Verified, "verified"},
}};

inline constexpr NameTable<Accelerator, 3> kAcceleratorNames{{
    {Accelerator::GPU, "GPU"},
    {Accelerator::FPGA, "FPGA"},
    {Accelerator::ASIC, "ASIC"},
}};

inline constexpr NameTable<FlMethodology, 3> kFlMethodologyNames{{
    {FlMethodology::Centralized, "centralized"},
    {FlMethodology::Decentralized, "decentralized"},
    {FlMethodology::Both, "both"},
}};

}  // namespace detail

// Wire names. These are the strings used in record documents, query strings and CLI flags.

constexpr std::string_view to_string(Technique t) { return detail::name_of(detail::kTechniqueNames, t); }
constexpr std::string_view to_string(ThreatModel t) { return detail::name_of(detail::kThreatModelNames, t); }
constexpr std::string_view to_string(TrainingSupport t) { return detail::name_of(detail::kTrainingSupportNames, t); }
constexpr std::string_view to_string(ResultSource s) { return detail::name_of(detail::kResultSourceNames, s); }
constexpr std::string_view to_string(Accelerator a) { return detail::name_of(detail::kAcceleratorNames, a); }
constexpr std::string_view to_string(FlMethodology m) { return detail::name_of(detail::kFlMethodologyNames, m); }

template <typename E>
std::optional<E> parse_enum(std::string_view text);

template <>
inline std::optional<Technique> parse_enum<Technique>(std::string_view text) {
  return detail::parse_name(detail::kTechniqueNames, text);
}
template <>
inline std::optional<ThreatModel> parse_enum<ThreatModel>(std::string_view text) {
  return detail::parse_name(detail::kThreatModelNames, text);
}
template <>
inline std::optional<TrainingSupport> parse_enum<TrainingSupport>(std::string_view text) {
  return detail::parse_name(detail::kTrainingSupportNames, text);
}
template <>
inline std::optional<ResultSource> parse_enum<ResultSource>(std::string_view text) {
  return detail::parse_name(detail::kResultSourceNames, text);
}
template <>
inline std::optional<Accelerator> parse_enum<Accelerator>(std::string_view text) {
  return detail::parse_name(detail::kAcceleratorNames, text);
}
template <>
inline std::optional<FlMethodology> parse_enum<FlMethodology>(std::string_view text) {
  return detail::parse_name(detail::kFlMethodologyNames, text);
}

inline constexpr std::array kAllTechniques{Technique::FL, Technique::DP, Technique::TEE,
                                           Technique::MPC, Technique::HE, Technique::Hybrid};
inline constexpr std::array kAllThreatModels{ThreatModel::Malicious, ThreatModel::SemiHonest,
                                             ThreatModel::SemiHonestWithTrustedThirdParty};
inline constexpr std::array kAllTrainingSupport{TrainingSupport::InferenceOnly, TrainingSupport::TrainingOnly,
                                                TrainingSupport::Both};
inline constexpr std::array kAllAccelerators{Accelerator::GPU, Accelerator::FPGA, Accelerator::ASIC};

}  // namespace ppmlrank
