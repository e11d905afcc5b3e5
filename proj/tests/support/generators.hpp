#pragma once

// Random valid records and catalogs for property tests.

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ppmlrank/catalog.hpp"
#include "ppmlrank/ranker.hpp"
#include "ppmlrank/record.hpp"

namespace ppmlrank::testing {

class RecordGenerator {
 public:
  explicit RecordGenerator(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  template <typename C>
  const auto& pick(const C& c) {
    return c[static_cast<std::size_t>(uniform_int(0, static_cast<int>(c.size()) - 1))];
  }

  template <typename C>
  auto subset(const C& c, std::size_t min_size = 0) {
    std::vector<std::decay_t<decltype(c[0])>> out;
    for (const auto& v : c) {
      if (coin(0.4)) out.push_back(v);
    }
    while (out.size() < min_size) {
      const auto& v = pick(c);
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    return out;
  }

  template <typename C>
  std::vector<std::string> string_subset(const C& c, std::size_t min_size = 0) {
    auto picked = subset(c, min_size);
    return std::vector<std::string>(picked.begin(), picked.end());
  }

  /// Accuracy in (0, 1], with a handful of values repeated so that maxima and ties occur.
  double accuracy() {
    if (coin(0.25)) {
      static constexpr std::array<double, 4> common{0.9, 0.95, 0.99, 1.0};
      return pick(common);
    }
    return uniform(0.05, 1.0);
  }

  TechniqueExtension extension(Technique t) {
    switch (t) {
      case Technique::FL: {
        FlFeatures f;
        f.num_clients = uniform_int(1, 1000);
        f.num_rounds = uniform_int(1, 200);
        f.acceleration = subset(kAllAccelerators);
        f.library = coin(0.8) ? pick(kFlLibraries) : "";
        f.methodology = pick(std::array{FlMethodology::Centralized, FlMethodology::Decentralized, FlMethodology::Both});
        f.aggregation_algorithms = string_subset(kAggregators);
        return f;
      }
      case Technique::DP:
        return DpFeatures{coin(0.8) ? pick(kDpSchemes) : ""};
      case Technique::TEE: {
        TeeFeatures f;
        f.hardware = pick(kTeeHardware);
        f.protected_attacks = string_subset(kAttacks);
        f.acceleration = subset(kAllAccelerators);
        f.integrity_check = coin();
        f.edge_support = coin();
        return f;
      }
      case Technique::MPC: {
        MpcFeatures f;
        f.schemes = string_subset(kMpcSchemes, 1);
        f.num_participants = uniform_int(2, 12);
        return f;
      }
      case Technique::HE: {
        HeFeatures f;
        f.scheme = pick(kHeSchemes);
        f.normalization_support = coin();
        f.acceleration = subset(kAllAccelerators);
        f.library = pick(kHeLibraries);
        f.bootstrapping = coin();
        return f;
      }
      case Technique::Hybrid: {
        HybridFeatures f;
        auto parts = subset(std::array{Technique::FL, Technique::DP, Technique::TEE, Technique::MPC, Technique::HE}, 2);
        f.techniques = parts;
        f.num_parties = uniform_int(1, 20);
        f.acceleration = subset(kAllAccelerators);
        return f;
      }
    }
    return MpcFeatures{};
  }

  FrameworkRecord record(const std::string& id) {
    FrameworkRecord r;
    r.id = id;
    r.name = "Framework " + id;
    r.technique = pick(kAllTechniques);
    if (coin(0.5)) r.authors = {"A. Author", "B. Author"};
    r.abstract = coin(0.7) ? "Generated record " + id + " with \"quotes\" and unicode é." : "";
    if (coin(0.5)) r.links = {"https://example.org/" + id};
    for (auto m : subset(kAllThreatModels, 1)) r.threat_models.insert(m);
    r.data_privacy = coin(0.8);
    r.model_privacy = coin(0.6);
    r.training_support = pick(kAllTrainingSupport);
    r.open_source = coin(0.6);
    r.verified = coin(0.5);
    r.ml_models = string_subset(kModels, 1);
    r.datasets = string_subset(kDatasets, 1);
    r.nonlinear_functions = string_subset(kNonlinear);
    r.extension = extension(r.technique);
    const int n_results = uniform_int(0, 4);
    for (int i = 0; i < n_results; ++i) {
      ResultEntry e;
      e.dataset = pick(r.datasets);
      e.model = pick(r.ml_models);
      e.accuracy = accuracy();
      if (coin(0.3)) e.inference_time = uniform(0.001, 500.0);
      if (coin(0.3)) e.memory = static_cast<std::uint64_t>(uniform_int(1, 1 << 30));
      if (coin(0.3)) e.communication = static_cast<std::uint64_t>(uniform_int(1, 1 << 30));
      e.source = (r.verified && coin(0.4)) ? ResultSource::Verified : ResultSource::Published;
      r.results.push_back(std::move(e));
    }
    if (coin(0.3)) r.verification_notes = "notes for " + id;
    return r;
  }

  Catalog catalog(int min_size, int max_size) {
    const int n = uniform_int(min_size, max_size);
    std::vector<FrameworkRecord> records;
    for (int i = 0; i < n; ++i) records.push_back(record("fw-" + std::to_string(i)));
    return Catalog::from_records(std::move(records));
  }

  WeightVector weights() {
    std::array<double, kFactorCount> w{};
    for (auto& v : w) {
      // Mix exact zeros and grid values in with continuous ones.
      const int kind = uniform_int(0, 3);
      v = kind == 0 ? 0.0 : kind == 1 ? uniform_int(0, 10) / 10.0 : uniform(0.0, 1.0);
    }
    return WeightVector(w);
  }

  static constexpr std::array<const char*, 6> kModels{"CNN", "DNN", "SVM", "Logistic Regression", "ResNet-50", "LSTM"};
  static constexpr std::array<const char*, 5> kDatasets{"MNIST", "CIFAR-10", "ImageNet", "IMDB", "Adult"};
  static constexpr std::array<const char*, 4> kNonlinear{"ReLU", "Sigmoid", "Softmax", "MaxPool"};
  static constexpr std::array<const char*, 3> kFlLibraries{"PyTorch", "TensorFlow Federated", "Flower"};
  static constexpr std::array<const char*, 3> kAggregators{"FedAvg", "FedProx", "Krum"};
  static constexpr std::array<const char*, 3> kDpSchemes{"Local-DP", "(epsilon, delta)-DP", "Renyi-DP"};
  static constexpr std::array<const char*, 2> kTeeHardware{"Intel SGX", "ARM TrustZone"};
  static constexpr std::array<const char*, 3> kAttacks{"side-channel", "rollback", "memory-inspection"};
  static constexpr std::array<const char*, 4> kMpcSchemes{"secret-sharing", "garbled-circuits", "oblivious-transfer",
                                                          "replicated-secret-sharing"};
  static constexpr std::array<const char*, 3> kHeSchemes{"CKKS", "BFV", "BGV"};
  static constexpr std::array<const char*, 4> kHeLibraries{"SEAL", "OpenFHE", "HEAAN", "HElib"};

 private:
  std::mt19937_64 rng_;
};

}  // namespace ppmlrank::testing
