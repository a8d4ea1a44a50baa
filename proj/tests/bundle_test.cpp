#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "qflake/bundle.hpp"
#include "qflake/error.hpp"
#include "qflake/profiles.hpp"
#include "qflake/synth.hpp"
#include "support.hpp"

using namespace qflake;
using qflake::testing::read_file;
using qflake::testing::TempDir;

namespace {

const Corpus& corpus() {
  static const Corpus c(synthesize_corpus({15, 45, 11}));
  return c;
}

PipelineConfig config_for(Family f, bool smote = false) {
  const ProfileSettings p =
      builtin_profile(f, smote ? Profile::PaperSmote : Profile::PaperVanilla);
  PipelineConfig c;
  c.model = p.model;
  c.pca_components = p.pca_components;
  c.smote = smote;
  return c;
}

std::vector<std::string> texts() {
  std::vector<std::string> out;
  for (const auto& e : corpus().entries()) out.push_back(e.text);
  return out;
}

}  // namespace

TEST(Bundle, RoundTripPreservesBytesAndScores) {
  TempDir dir;
  for (Family f : kAllFamilies) {
    const ModelBundle b = train_bundle(corpus(), config_for(f, f == Family::KNN), 7, "paper_vanilla");
    save_bundle(b, dir / "a.json");
    const ModelBundle loaded = load_bundle(dir / "a.json");
    save_bundle(loaded, dir / "b.json");
    EXPECT_EQ(read_file(dir / "a.json"), read_file(dir / "b.json")) << to_string(f);
    EXPECT_EQ(score(b, texts()), score(loaded, texts())) << to_string(f);
    EXPECT_TRUE(loaded.model == b.model);
    EXPECT_EQ(loaded.metadata.corpus_hash, corpus().content_hash());
  }
}

TEST(Bundle, RetrainIsByteIdentical) {
  const auto a = bundle_to_json(train_bundle(corpus(), config_for(Family::RF), 3, "p"));
  const auto b = bundle_to_json(train_bundle(corpus(), config_for(Family::RF), 3, "p"));
  EXPECT_EQ(a, b);
}

TEST(Bundle, DefaultAndTunedThresholds) {
  EXPECT_EQ(train_bundle(corpus(), config_for(Family::XGB), 1, "p").threshold, 0.5);
  PipelineConfig tuned = config_for(Family::DT);
  tuned.threshold_mode = ThresholdMode::Tuned;
  const double t = train_bundle(corpus(), tuned, 1, "p").threshold;
  const auto grid = threshold_grid();
  EXPECT_NE(std::find(grid.begin(), grid.end(), t), grid.end());
}

TEST(Bundle, KnnScoresTrainingFlakyFileAsOne) {
  const ModelBundle b = train_bundle(corpus(), config_for(Family::KNN), 1, "p");
  for (const auto& e : corpus().entries()) {
    if (e.label != Label::Flaky) continue;
    EXPECT_EQ(score(b, {e.text})[0], 1.0) << e.id;
    break;
  }
}

TEST(Bundle, OutOfVocabularyFileScoresLikeZeroVector) {
  const ModelBundle b = train_bundle(corpus(), config_for(Family::DT), 1, "p");
  const auto oov = score(b, {"zzqqx yyqqw"});
  const auto empty = score(b, {""});
  EXPECT_EQ(oov, empty);
}

TEST(Bundle, TimestampFromSourceDateEpoch) {
  ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
  EXPECT_EQ(bundle_timestamp(), "1970-01-02T00:00:00Z");
  ::unsetenv("SOURCE_DATE_EPOCH");
  EXPECT_EQ(bundle_timestamp(), "1970-01-01T00:00:00Z");
}

TEST(Bundle, RejectsBadVersionAndFamily) {
  const ModelBundle b = train_bundle(corpus(), config_for(Family::DT), 1, "p");
  auto j = nlohmann::json::parse(bundle_to_json(b));
  j["format_version"] = 99;
  try {
    bundle_from_json(j.dump());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BundleInvalid);
  }
  j["format_version"] = 1;
  j["model"]["family"] = "LGBM";
  EXPECT_THROW(bundle_from_json(j.dump()), Error);
  EXPECT_THROW(bundle_from_json("{not json"), Error);
  EXPECT_THROW(bundle_from_json("{}"), Error);
}

TEST(Bundle, SortedKeys) {
  const auto text = bundle_to_json(train_bundle(corpus(), config_for(Family::SVM), 1, "p"));
  EXPECT_LT(text.find("\"format_version\""), text.find("\"metadata\""));
  EXPECT_LT(text.find("\"metadata\""), text.find("\"model\""));
  EXPECT_LT(text.find("\"model\""), text.find("\"threshold\""));
}
