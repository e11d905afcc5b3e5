#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppmlrank/catalog.hpp"
#include "ppmlrank/errors.hpp"
#include "ppmlrank/scoring.hpp"

namespace ppmlrank {

/// User calibration weights, one per factor, each in [0, 1].
using WeightVector = detail::UnitSextuple<detail::WeightsTag>;

/// Upper end of the integer weight scale exposed to users (weight = value / 10).
inline constexpr int kUiWeightMax = 10;
inline constexpr int kUiWeightDefault = 5;

inline WeightVector default_weights() {
  std::array<double, kFactorCount> w;
  w.fill(0.5);
  return WeightVector(w);
}

/// Maps six integers in 0..10 onto weights in [0, 1]. Throws OutOfRangeError.
inline WeightVector weights_from_ui_scale(std::span<const int> values) {
  if (values.size() != kFactorCount) {
    throw OutOfRangeError("expected " + std::to_string(kFactorCount) + " weights, got " + std::to_string(values.size()));
  }
  std::array<double, kFactorCount> w{};
  for (std::size_t i = 0; i < kFactorCount; ++i) {
    if (values[i] < 0 || values[i] > kUiWeightMax) {
      throw OutOfRangeError("weight '" + std::string(factor_key(kFactorKinds[i])) + "' must be in 0.." +
                            std::to_string(kUiWeightMax) + ", got " + std::to_string(values[i]));
    }
    w[i] = static_cast<double>(values[i]) / kUiWeightMax;
  }
  return WeightVector(w);
}

/// Inner product of points and weights, summed in canonical factor order.
inline double score(const FactorVector& points, const WeightVector& weights) {
  double z = 0.0;
  for (std::size_t i = 0; i < kFactorCount; ++i) z += points.values()[i] * weights.values()[i];
  return z;
}

/// Scores are compared on a 1e-9 grid; scores in the same bucket are tied and fall
/// through to the tie-break. Keeps the ordering stable against last-bit rounding
/// differences between mathematically equal sums.
inline constexpr double kScoreBucketsPerUnit = 1e9;

inline std::int64_t score_bucket(double z) { return std::llround(z * kScoreBucketsPerUnit); }

struct Candidate {
  std::string id;
  std::string name;
  FactorVector points;
};

struct ScoredFramework {
  std::string id;
  std::string name;
  FactorVector points;
  double score = 0.0;

  bool operator==(const ScoredFramework&) const = default;
};

struct RankedList {
  std::vector<ScoredFramework> entries;
  WeightVector weights_used;
  std::uint64_t catalog_version = 0;

  bool empty() const { return entries.empty(); }
  const ScoredFramework& recommended() const { return entries.at(0); }
};

/// Order used by the ranking: score descending, then published-accuracy point
/// descending, then id ascending.
inline bool ranks_before(const ScoredFramework& a, const ScoredFramework& b) {
  const auto za = score_bucket(a.score);
  const auto zb = score_bucket(b.score);
  if (za != zb) return za > zb;
  const double pa = a.points[FactorKind::PublishedAccuracy];
  const double pb = b.points[FactorKind::PublishedAccuracy];
  if (pa != pb) return pa > pb;
  return a.id < b.id;
}

/// Ranks precomputed point vectors. The head is the recommended framework.
inline RankedList rank_candidates(std::vector<Candidate> candidates, const WeightVector& weights,
                                  std::uint64_t catalog_version = 0) {
  RankedList out{{}, weights, catalog_version};
  out.entries.reserve(candidates.size());
  for (auto& c : candidates) {
    const double z = score(c.points, weights);
    out.entries.push_back({std::move(c.id), std::move(c.name), c.points, z});
  }
  std::sort(out.entries.begin(), out.entries.end(), ranks_before);
  return out;
}

/// Scores each framework against the catalog snapshot and ranks them.
/// Every framework must belong to the catalog (NotFoundError otherwise).
inline RankedList rank(std::span<const FrameworkRecord> frameworks, const WeightVector& weights, const Catalog& catalog) {
  const auto ctx = ScoringContext::of(catalog);
  std::vector<Candidate> candidates;
  candidates.reserve(frameworks.size());
  for (const auto& r : frameworks) {
    if (!catalog.contains(r.id)) throw NotFoundError("framework '" + r.id + "' is not in the catalog");
    candidates.push_back({r.id, r.name, factor_vector(r, ctx)});
  }
  return rank_candidates(std::move(candidates), weights, catalog.version());
}

}  // namespace ppmlrank
