#include <gtest/gtest.h>

#include <set>

#include "qflake/error.hpp"
#include "qflake/pipeline.hpp"
#include "qflake/profiles.hpp"
#include "qflake/synth.hpp"
#include "qflake/validation.hpp"
#include "support.hpp"

using namespace qflake;

namespace {

constexpr Label F = Label::Flaky;
constexpr Label N = Label::NonFlaky;

std::string repeat(const std::string& token, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += token + " ";
  return out;
}

// Count of "aa" decides the class: 1-3 and 7-9 non-flaky, 4-6 flaky.
Corpus three_region_corpus() {
  std::vector<std::pair<Label, std::string>> docs;
  for (int copy = 0; copy < 4; ++copy) {
    for (int c = 1; c <= 9; ++c) docs.push_back({c >= 4 && c <= 6 ? F : N, repeat("aa", c)});
  }
  return qflake::testing::make_corpus(docs);
}

PipelineConfig dt_config(std::int64_t depth) {
  PipelineConfig c;
  c.model.family = Family::DT;
  c.model.params["max_depth"] = depth;
  return c;
}

const Corpus& small_synthetic() {
  static const Corpus corpus(synthesize_corpus({20, 60, 3}));
  return corpus;
}

}  // namespace

TEST(FitModel, SmoteThenClampedPca) {
  Rng rng(1);
  const Matrix x = qflake::testing::random_matrix(30, 8, rng);
  Labels y(30, N);
  for (int i = 0; i < 6; ++i) y[static_cast<std::size_t>(i)] = F;
  PipelineConfig c;
  c.model = builtin_profile(Family::KNN, Profile::PaperSmote).model;
  c.pca_components = 200;
  c.smote = true;
  const FittedModel fitted = fit_model(x, y, c, 4);
  EXPECT_EQ(fitted.synthetic_rows, 18u);
  ASSERT_TRUE(fitted.pca);
  EXPECT_EQ(fitted.pca->n_components(), 8u);  // min(48 - 1, 8)
  EXPECT_EQ(fitted.requested_components, 200u);
  EXPECT_EQ(score(fitted, x).size(), 30u);
}

TEST(FitModel, Deterministic) {
  Rng rng(2);
  const Matrix x = qflake::testing::random_matrix(40, 5, rng);
  Labels y(40, N);
  for (int i = 0; i < 10; ++i) y[static_cast<std::size_t>(i) * 4] = F;
  PipelineConfig c;
  c.model = builtin_profile(Family::RF, Profile::PaperSmote).model;
  c.smote = true;
  EXPECT_TRUE(fit_model(x, y, c, 9).model == fit_model(x, y, c, 9).model);
}

TEST(Holdout, StratifiedAndDisjoint) {
  Labels y(50, N);
  for (int i = 0; i < 10; ++i) y[static_cast<std::size_t>(i)] = F;
  const auto [fit, hold] = stratified_holdout(y, 0.2, 3);
  EXPECT_EQ(fit.size() + hold.size(), 50u);
  std::set<std::size_t> all(fit.begin(), fit.end());
  all.insert(hold.begin(), hold.end());
  EXPECT_EQ(all.size(), 50u);
  EXPECT_EQ(std::count_if(hold.begin(), hold.end(), [&](auto i) { return y[i] == F; }), 2);
  EXPECT_EQ(hold.size(), 10u);

  Labels tiny{F, F, N, N, N};
  const auto [fit2, hold2] = stratified_holdout(tiny, 0.2, 1);
  EXPECT_EQ(std::count_if(hold2.begin(), hold2.end(), [&](auto i) { return tiny[i] == F; }), 1);
  EXPECT_EQ(std::count_if(fit2.begin(), fit2.end(), [&](auto i) { return tiny[i] == F; }), 1);
}

TEST(ChooseThreshold, FixedSkipsTraining) {
  PipelineConfig c = dt_config(3);
  c.fixed_threshold = 0.7;
  const auto choice = choose_threshold_inner(Matrix(0, 0), {}, c, 0);
  EXPECT_EQ(choice.threshold, 0.7);
  EXPECT_FALSE(choice.curve);
}

TEST(ValidateConfig, Rejections) {
  PipelineConfig c = dt_config(3);
  c.fixed_threshold = 1.5;
  EXPECT_THROW(validate(c), Error);
  c = dt_config(3);
  c.pca_components = 0;
  EXPECT_THROW(validate(c), Error);
  c = dt_config(3);
  c.threshold_step = 0.3;
  EXPECT_THROW(validate(c), Error);
  c = dt_config(3);
  c.model.params["bogus"] = 1.0;
  EXPECT_THROW(validate(c), Error);
}

TEST(CrossValidate, FoldsCoverCorpusOnce) {
  const Corpus& corpus = small_synthetic();
  PipelineConfig c;
  c.model = builtin_profile(Family::DT, Profile::PaperVanilla).model;
  const CvResult cv = cross_validate(corpus, c, 5, 42);
  ASSERT_EQ(cv.folds.size(), 5u);
  std::set<std::string> ids;
  for (const auto& f : cv.folds) {
    EXPECT_EQ(f.train_rows + f.test_rows, corpus.size());
    EXPECT_EQ(f.test_scores.size(), f.test_rows);
    EXPECT_EQ(f.confusion.total(), f.test_rows);
    EXPECT_EQ(f.threshold, 0.5);
    ids.insert(f.test_ids.begin(), f.test_ids.end());
  }
  EXPECT_EQ(ids.size(), corpus.size());
  const CvResult again = cross_validate(corpus, c, 5, 42);
  EXPECT_EQ(again.aggregate, cv.aggregate);
}

TEST(CrossValidate, VocabularyScope) {
  const Corpus& corpus = small_synthetic();
  PipelineConfig c;
  c.model = builtin_profile(Family::DT, Profile::PaperVanilla).model;
  const CvResult per_fold = cross_validate(corpus, c, 5, 1);
  c.vocabulary_scope = VocabularyScope::WholeCorpus;
  const CvResult whole = cross_validate(corpus, c, 5, 1);
  for (std::size_t f = 0; f < 5; ++f) {
    EXPECT_LE(per_fold.folds[f].vocabulary_size, whole.folds[f].vocabulary_size);
  }
  EXPECT_EQ(whole.folds[0].vocabulary_size, whole.folds[4].vocabulary_size);
}

TEST(CrossValidate, TunedThresholdsComeFromGrid) {
  const Corpus& corpus = small_synthetic();
  PipelineConfig c;
  c.model = builtin_profile(Family::XGB, Profile::PaperVanilla).model;
  c.threshold_mode = ThresholdMode::Tuned;
  const auto grid = threshold_grid();
  for (TuningSet set : {TuningSet::InnerSplit, TuningSet::Evaluation}) {
    c.tuning_set = set;
    const CvResult cv = cross_validate(corpus, c, 5, 8);
    for (const auto& f : cv.folds) {
      ASSERT_TRUE(f.tuning_curve);
      EXPECT_NE(std::find(grid.begin(), grid.end(), f.threshold), grid.end());
      EXPECT_GE(f.tuning_curve->best_f1, f.tuning_curve->f1_at(0.5));
    }
  }
}

TEST(CrossValidate, SmoteAndPcaAreRecorded) {
  const Corpus& corpus = small_synthetic();
  PipelineConfig c;
  c.model = builtin_profile(Family::SVM, Profile::PaperSmote).model;
  c.pca_components = 180;
  c.smote = true;
  const CvResult cv = cross_validate(corpus, c, 5, 2);
  for (const auto& f : cv.folds) {
    EXPECT_EQ(f.synthetic_rows, 32u);  // 48 non-flaky vs 16 flaky per training split
    ASSERT_TRUE(f.pca_components);
    EXPECT_LE(*f.pca_components, 95u);
  }
}

TEST(Grid, ExpansionOrder) {
  const ParamGrid grid{{"max_depth", {std::int64_t{1}, std::int64_t{2}}},
                       {"criterion", {std::string("gini"), std::string("entropy")}}};
  const auto points = expand_grid(grid);
  ASSERT_EQ(points.size(), 4u);
  EXPECT_EQ(std::get<std::int64_t>(points[1].at("max_depth")), 1);
  EXPECT_EQ(std::get<std::string>(points[1].at("criterion")), "entropy");
  EXPECT_EQ(std::get<std::int64_t>(points[2].at("max_depth")), 2);
  EXPECT_THROW(expand_grid({{"x", {}}}), Error);
}

TEST(Grid, PcaAxis) {
  PipelineConfig base;
  base.model.family = Family::KNN;
  EXPECT_EQ(apply_grid_point(base, {{kPcaAxis, std::int64_t{7}}}).pca_components, 7u);
  EXPECT_FALSE(apply_grid_point(base, {{kPcaAxis, std::int64_t{0}}}).pca_components);
}

TEST(GridSearch, DeeperTreeWinsOnThreeRegions) {
  const Corpus corpus = three_region_corpus();
  const ParamGrid grid{{"max_depth", {std::int64_t{1}, std::int64_t{10}}}};
  const GridSearchResult r = grid_search(corpus, dt_config(1), grid, 3, 5);
  EXPECT_EQ(r.best_index, 1u);
  EXPECT_EQ(r.best().aggregate[Metric::F1].mean, 1.0);
  EXPECT_LT(r.points[0].aggregate[Metric::F1].mean, 1.0);
}

TEST(GridSearch, TiesKeepFirstPoint) {
  const Corpus corpus = three_region_corpus();
  const ParamGrid grid{{"max_depth", {std::int64_t{10}, std::int64_t{20}}}};
  const GridSearchResult r = grid_search(corpus, dt_config(1), grid, 3, 5);
  EXPECT_EQ(r.points[0].aggregate[Metric::F1].mean, r.points[1].aggregate[Metric::F1].mean);
  EXPECT_EQ(r.best_index, 0u);
  EXPECT_THROW(grid_search(corpus, dt_config(1), {}, 3, 5), Error);
}

TEST(NestedCv, RecordsSelectedParams) {
  const Corpus corpus = three_region_corpus();
  const ParamGrid grid{{"max_depth", {std::int64_t{1}, std::int64_t{10}}}};
  const CvResult cv = nested_cross_validate(corpus, dt_config(1), grid, 3, 3, 5);
  ASSERT_EQ(cv.folds.size(), 3u);
  for (const auto& f : cv.folds) {
    ASSERT_TRUE(f.selected_params);
    EXPECT_EQ(std::get<std::int64_t>(f.selected_params->at("max_depth")), 10);
  }
  EXPECT_EQ(cv.aggregate[Metric::F1].mean, 1.0);
}
