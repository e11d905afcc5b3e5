#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "ppmlrank/query.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace ppmlrank;
using ppmlrank::testing::RecordGenerator;

namespace {

std::set<std::string> ids(const std::vector<FrameworkRecord>& records) {
  std::set<std::string> out;
  for (const auto& r : records) out.insert(r.id);
  return out;
}

bool is_subset(const std::vector<FrameworkRecord>& small, const std::vector<FrameworkRecord>& big) {
  const auto a = ids(small);
  const auto b = ids(big);
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

SearchQuery scenario_one_query() {
  SearchQuery q;
  q.ml_models = {"CNN"};
  q.threat_models = {ThreatModel::SemiHonest};
  q.open_source = true;
  return q;
}

// Independent restatement of the search predicates, one attribute at a time.
bool oracle_matches(const FrameworkRecord& r, const SearchQuery& q) {
  auto intersects = [](const auto& have, const auto& wanted) {
    for (const auto& h : have) {
      for (const auto& w : wanted) {
        if (h == w) return true;
      }
    }
    return false;
  };
  if (q.technique.has_value() && r.technique != q.technique.value()) return false;
  if (q.ml_models.size() > 0 && !intersects(r.ml_models, q.ml_models)) return false;
  if (q.threat_models.size() > 0 && !intersects(r.threat_models, q.threat_models)) return false;
  if (q.datasets.size() > 0 && !intersects(r.datasets, q.datasets)) return false;
  if (q.training_status.has_value()) {
    const bool ok = r.training_support == TrainingSupport::Both || r.training_support == *q.training_status;
    if (!ok) return false;
  }
  if (q.open_source.has_value() && r.open_source != *q.open_source) return false;
  return true;
}

SearchQuery random_query(RecordGenerator& gen) {
  SearchQuery q;
  if (gen.coin(0.3)) q.technique = gen.pick(kAllTechniques);
  if (gen.coin(0.4)) {
    auto s = gen.string_subset(RecordGenerator::kModels, 1);
    q.ml_models.insert(s.begin(), s.end());
  }
  if (gen.coin(0.4)) {
    for (auto m : gen.subset(kAllThreatModels, 1)) q.threat_models.insert(m);
  }
  if (gen.coin(0.3)) {
    auto s = gen.string_subset(RecordGenerator::kDatasets, 1);
    q.datasets.insert(s.begin(), s.end());
  }
  if (gen.coin(0.3)) q.training_status = gen.pick(kAllTrainingSupport);
  if (gen.coin(0.3)) q.open_source = gen.coin();
  return q;
}

FilterSet random_generic_filters(RecordGenerator& gen) {
  FilterSet f;
  if (gen.coin(0.4)) {
    for (auto a : gen.subset(kAllAccelerators, 1)) f.acceleration.insert(a);
  }
  if (gen.coin(0.4)) {
    auto s = gen.string_subset(RecordGenerator::kHeSchemes, 1);
    f.schemes_or_protocols.insert(s.begin(), s.end());
  }
  if (gen.coin(0.4)) {
    auto s = gen.string_subset(RecordGenerator::kHeLibraries, 1);
    f.libraries.insert(s.begin(), s.end());
  }
  return f;
}

/// Catalog vocabulary may not cover every generated model/dataset name.
std::vector<FrameworkRecord> search_or_empty(const Catalog& c, const SearchQuery& q) {
  try {
    return search(c, q);
  } catch (const UnknownVocabularyError&) {
    return {};
  }
}

}  // namespace

TEST(Search, ScenarioOneCandidates) {
  const auto c = ppmlrank::testing::fixture_catalog();
  const auto found = ids(search(c, scenario_one_query()));
  for (const char* id : {"aby3", "pyhenet", "cryptflow", "cryptodl", "lowmemory20"}) EXPECT_TRUE(found.count(id)) << id;
  EXPECT_EQ(found, (std::set<std::string>{"aby3", "cryptflow", "cryptodl", "lowmemory20", "pyhenet", "pysyft"}));
}

TEST(Search, EmptyQueryReturnsEverything) {
  const auto c = ppmlrank::testing::fixture_catalog();
  EXPECT_EQ(search(c, SearchQuery{}), c.records());
}

TEST(Search, TechniqueMatchesLinearScan) {
  const auto c = ppmlrank::testing::fixture_catalog();
  SearchQuery q;
  q.technique = Technique::HE;
  std::set<std::string> expected;
  for (const auto& r : c.records()) {
    if (r.technique == Technique::HE) expected.insert(r.id);
  }
  EXPECT_EQ(ids(search(c, q)), expected);
  EXPECT_EQ(expected.size(), 6u);
}

TEST(Search, UnknownVocabulary) {
  const auto c = ppmlrank::testing::fixture_catalog();
  SearchQuery q;
  q.ml_models = {"Transformer-XXL"};
  EXPECT_THROW(search(c, q), UnknownVocabularyError);
  SearchQuery d;
  d.datasets = {"MNSIT"};
  EXPECT_THROW(search(c, d), UnknownVocabularyError);
}

TEST(Search, AnyOfWithinAttribute) {
  const auto c = ppmlrank::testing::fixture_catalog();
  SearchQuery q;
  q.ml_models = {"fastText", "ResNet-50"};
  EXPECT_EQ(ids(search(c, q)), (std::set<std::string>{"cryptflow", "privft"}));
}

TEST(Search, TrainingStatusCoverage) {
  EXPECT_TRUE(training_covers(TrainingSupport::Both, TrainingSupport::InferenceOnly));
  EXPECT_TRUE(training_covers(TrainingSupport::Both, TrainingSupport::TrainingOnly));
  EXPECT_TRUE(training_covers(TrainingSupport::InferenceOnly, TrainingSupport::InferenceOnly));
  EXPECT_FALSE(training_covers(TrainingSupport::InferenceOnly, TrainingSupport::Both));
  EXPECT_FALSE(training_covers(TrainingSupport::TrainingOnly, TrainingSupport::InferenceOnly));

  const auto c = ppmlrank::testing::fixture_catalog();
  SearchQuery q;
  q.training_status = TrainingSupport::Both;
  EXPECT_EQ(ids(search(c, q)), (std::set<std::string>{"aby3", "privft", "pyhenet", "pysyft"}));
}

TEST(ApplyFilters, BootstrappingOnHeRecords) {
  const auto c = ppmlrank::testing::fixture_catalog();
  SearchQuery q;
  q.technique = Technique::HE;
  FilterSet f;
  f.technique_specific["bootstrapping"] = "true";
  check_filters(q, f);
  EXPECT_EQ(ids(apply_filters(search(c, q), f)),
            (std::set<std::string>{"cryptodl", "lowmemory20", "privft", "e2dm", "chet"}));
}

TEST(ApplyFilters, EmptyFilterSetIsIdentity) {
  const auto c = ppmlrank::testing::fixture_catalog();
  EXPECT_EQ(apply_filters(c.records(), FilterSet{}), c.records());
}

TEST(ApplyFilters, LibraryAfterSchemeNarrows) {
  const auto c = ppmlrank::testing::fixture_catalog();
  FilterSet f;
  f.schemes_or_protocols = {"CKKS"};
  const auto by_scheme = apply_filters(c.records(), f);
  f.libraries = {"SEAL"};
  const auto by_both = apply_filters(c.records(), f);
  EXPECT_TRUE(is_subset(by_both, by_scheme));
  EXPECT_EQ(ids(by_both), (std::set<std::string>{"chet", "lowmemory20", "pyhenet"}));
  for (const auto& r : by_both) {
    EXPECT_EQ(std::get<HeFeatures>(r.extension).library, "SEAL");
    EXPECT_EQ(std::get<HeFeatures>(r.extension).scheme, "CKKS");
  }
}

TEST(ApplyFilters, Acceleration) {
  const auto c = ppmlrank::testing::fixture_catalog();
  FilterSet f;
  f.acceleration = {Accelerator::GPU};
  EXPECT_EQ(ids(apply_filters(c.records(), f)), (std::set<std::string>{"privft", "pysyft"}));
  f.acceleration = {Accelerator::FPGA};
  EXPECT_TRUE(apply_filters(c.records(), f).empty());
}

TEST(ApplyFilters, PreservesInputOrder) {
  const auto c = ppmlrank::testing::fixture_catalog();
  std::vector<FrameworkRecord> reversed(c.records().rbegin(), c.records().rend());
  FilterSet f;
  f.schemes_or_protocols = {"CKKS"};
  const auto out = apply_filters(reversed, f);
  ASSERT_GE(out.size(), 2u);
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_GT(out[i - 1].id, out[i].id);
}

TEST(ApplyFilters, TechniqueKeyOnWrongTechniqueIsInvalid) {
  const auto c = ppmlrank::testing::fixture_catalog();
  FilterSet f;
  f.technique_specific["bootstrapping"] = "true";
  EXPECT_THROW(apply_filters(c.records(), f), InvalidFilterError);  // MPC/FL records present
}

TEST(CheckFilters, Rules) {
  FilterSet f;
  f.technique_specific["bootstrapping"] = "true";
  SearchQuery none;
  EXPECT_THROW(check_filters(none, f), InvalidFilterError);
  SearchQuery mpc;
  mpc.technique = Technique::MPC;
  EXPECT_THROW(check_filters(mpc, f), InvalidFilterError);

  SearchQuery he;
  he.technique = Technique::HE;
  EXPECT_NO_THROW(check_filters(he, f));
  f.technique_specific["bootstrapping"] = "maybe";
  EXPECT_THROW(check_filters(he, f), InvalidFilterError);

  FilterSet unknown;
  unknown.technique_specific["warp_speed"] = "true";
  EXPECT_THROW(check_filters(he, unknown), InvalidFilterError);

  FilterSet count;
  count.technique_specific["min_participants"] = "-3";
  EXPECT_THROW(check_filters(mpc, count), InvalidFilterError);
  count.technique_specific["min_participants"] = "3";
  EXPECT_NO_THROW(check_filters(mpc, count));
}

TEST(TechniqueFilters, PerTechniqueFeatures) {
  const auto c = ppmlrank::testing::fixture_catalog();
  SearchQuery mpc;
  mpc.technique = Technique::MPC;
  FilterSet parties;
  parties.technique_specific["min_participants"] = "3";
  EXPECT_EQ(ids(apply_filters(search(c, mpc), parties)), (std::set<std::string>{"aby3", "cryptflow"}));
  parties.technique_specific["min_participants"] = "4";
  EXPECT_TRUE(apply_filters(search(c, mpc), parties).empty());

  SearchQuery fl;
  fl.technique = Technique::FL;
  FilterSet methodology;
  methodology.technique_specific["fl_methodology"] = "centralized";
  EXPECT_EQ(ids(apply_filters(search(c, fl), methodology)), (std::set<std::string>{"pysyft"}));
  methodology.technique_specific["fl_methodology"] = "decentralized";
  EXPECT_TRUE(apply_filters(search(c, fl), methodology).empty());

  FrameworkRecord tee;
  tee.id = "enclave";
  tee.name = "Enclave";
  tee.technique = Technique::TEE;
  tee.threat_models = {ThreatModel::SemiHonestWithTrustedThirdParty};
  tee.extension = TeeFeatures{"Intel SGX", {"side-channel"}, {}, true, false};
  const std::vector<FrameworkRecord> tees{tee};
  FilterSet edge;
  edge.technique_specific["edge_support"] = "true";
  EXPECT_TRUE(apply_filters(tees, edge).empty());
  edge.technique_specific["edge_support"] = "false";
  edge.technique_specific["protected_attack"] = "side-channel";
  EXPECT_EQ(apply_filters(tees, edge).size(), 1u);

  FrameworkRecord hybrid = tee;
  hybrid.technique = Technique::Hybrid;
  hybrid.extension = HybridFeatures{{Technique::HE, Technique::MPC}, 4, {Accelerator::GPU}};
  const std::vector<FrameworkRecord> hybrids{hybrid};
  FilterSet combines;
  combines.technique_specific["combines"] = "HE";
  combines.technique_specific["min_parties"] = "4";
  EXPECT_EQ(apply_filters(hybrids, combines).size(), 1u);
  combines.technique_specific["combines"] = "DP";
  EXPECT_TRUE(apply_filters(hybrids, combines).empty());
}

TEST(TechniqueFilters, KeysPerTechnique) {
  EXPECT_EQ(technique_filter_keys(Technique::HE), (std::vector<std::string>{"bootstrapping", "normalization_support"}));
  EXPECT_EQ(technique_filter_keys(Technique::MPC), std::vector<std::string>{"min_participants"});
  EXPECT_TRUE(technique_filter_keys(Technique::DP).empty());
}

// Property: every returned record satisfies the independently restated predicates,
// and every record left out fails at least one of them.
TEST(SearchProperties, AgreesWithPerRecordOracle) {
  RecordGenerator gen(11);
  for (int round = 0; round < 200; ++round) {
    const auto c = gen.catalog(0, 40);
    const auto q = random_query(gen);
    const auto result = ids(search_or_empty(c, q));
    bool vocab_ok = true;
    try {
      search(c, q);
    } catch (const UnknownVocabularyError&) {
      vocab_ok = false;
    }
    if (!vocab_ok) continue;
    for (const auto& r : c.records()) EXPECT_EQ(result.count(r.id) > 0, oracle_matches(r, q)) << r.id;
  }
}

// Property: specifying a previously unspecified attribute never enlarges the result.
TEST(SearchProperties, AddingAConstraintNeverEnlarges) {
  RecordGenerator gen(12);
  for (int round = 0; round < 300; ++round) {
    const auto c = gen.catalog(0, 40);
    const auto q = random_query(gen);
    const auto base = search_or_empty(c, q);
    const auto extra = random_query(gen);
    auto narrowed = q;
    if (!narrowed.technique) narrowed.technique = extra.technique;
    if (narrowed.ml_models.empty()) narrowed.ml_models = extra.ml_models;
    if (narrowed.threat_models.empty()) narrowed.threat_models = extra.threat_models;
    if (narrowed.datasets.empty()) narrowed.datasets = extra.datasets;
    if (!narrowed.training_status) narrowed.training_status = extra.training_status;
    if (!narrowed.open_source) narrowed.open_source = extra.open_source;
    const auto after = search_or_empty(c, narrowed);
    EXPECT_TRUE(is_subset(after, base));
    EXPECT_TRUE(is_subset(apply_filters(after, random_generic_filters(gen)), after));
  }
}

// Property: filters are idempotent and never enlarge their input.
TEST(FilterProperties, IdempotentAndShrinking) {
  RecordGenerator gen(13);
  for (int round = 0; round < 300; ++round) {
    const auto c = gen.catalog(0, 40);
    const auto f = random_generic_filters(gen);
    const auto once = apply_filters(c.records(), f);
    EXPECT_EQ(apply_filters(once, f), once);
    EXPECT_TRUE(is_subset(once, c.records()));

    // Technique-specific filters on a single-technique slice.
    SearchQuery he;
    he.technique = Technique::HE;
    FilterSet boot;
    boot.technique_specific["bootstrapping"] = gen.coin() ? "true" : "false";
    const auto slice = search(c, he);
    const auto booted = apply_filters(slice, boot);
    EXPECT_EQ(apply_filters(booted, boot), booted);
    for (const auto& r : booted) {
      EXPECT_EQ(std::get<HeFeatures>(r.extension).bootstrapping, boot.technique_specific["bootstrapping"] == "true");
    }
  }
}
