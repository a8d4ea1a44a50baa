#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qflake/classifiers.hpp"
#include "qflake/error.hpp"
#include "qflake/profiles.hpp"
#include "support.hpp"

using namespace qflake;
using qflake::testing::separable_set;

namespace {

constexpr Label F = Label::Flaky;
constexpr Label N = Label::NonFlaky;

double train_accuracy(const TrainedModel& model, const Matrix& x, const Labels& y) {
  const Labels pred = predict(score(model, x));
  std::size_t ok = 0;
  for (std::size_t i = 0; i < y.size(); ++i) ok += pred[i] == y[i];
  return static_cast<double>(ok) / static_cast<double>(y.size());
}

ClassifierSpec spec(Family f, ParamMap params = {}, std::uint64_t seed = 0) {
  return ClassifierSpec{f, std::move(params), seed};
}

}  // namespace

TEST(Impurity, ReferenceValues) {
  const Labels half{F, F, N, N};
  const Labels pure{F, F, F, F};
  const Labels skew{F, F, F, N};
  EXPECT_DOUBLE_EQ(impurity(half, Criterion::Entropy), 1.0);
  EXPECT_DOUBLE_EQ(impurity(half, Criterion::Gini), 0.5);
  EXPECT_EQ(impurity(pure, Criterion::Entropy), 0.0);
  EXPECT_EQ(impurity(pure, Criterion::Gini), 0.0);
  EXPECT_NEAR(impurity(skew, Criterion::Entropy), 0.811278, 1e-6);
  EXPECT_THROW(impurity(Labels{}, Criterion::Gini), Error);
}

TEST(Spec, RejectsUnknownAndOutOfRange) {
  EXPECT_THROW(validate_spec(spec(Family::DT, {{"n_neighbors", std::int64_t{3}}})), Error);
  EXPECT_THROW(validate_spec(spec(Family::KNN, {{"n_neighbors", std::int64_t{0}}})), Error);
  EXPECT_THROW(validate_spec(spec(Family::SVM, {{"C", 0.0}})), Error);
  EXPECT_THROW(validate_spec(spec(Family::DT, {{"criterion", std::string("log")}})), Error);
  EXPECT_NO_THROW(validate_spec(spec(Family::XGB, {{"learning_rate", 0.0}})));
  for (Family f : kAllFamilies) {
    EXPECT_NO_THROW(validate_spec(builtin_profile(f, Profile::PaperVanilla).model));
    EXPECT_NO_THROW(validate_spec(builtin_profile(f, Profile::PaperSmote).model));
    EXPECT_EQ(parse_family(to_string(f)), f);
  }
  EXPECT_EQ(parse_family("xGb"), Family::XGB);
  EXPECT_FALSE(parse_family("lgbm"));
}

TEST(DecisionTree, OneSplitSeparatesTwoClusters) {
  const Matrix x = Matrix::from_rows({{0}, {1}, {10}, {11}});
  const Labels y{N, N, F, F};
  const auto model = train_decision_tree(x, y, spec(Family::DT, {{"min_samples_split", std::int64_t{2}}}));
  const auto& tree = std::get<DecisionTreeModel>(model.params()).tree;
  EXPECT_EQ(tree.depth(), 1);
  EXPECT_GT(tree.nodes[0].threshold, 1.0);
  EXPECT_LT(tree.nodes[0].threshold, 10.0);
  EXPECT_EQ(train_accuracy(model, x, y), 1.0);
}

TEST(DecisionTree, PureAndDepthZeroGiveSingleLeaf) {
  const Matrix x = Matrix::from_rows({{0}, {1}, {2}, {3}});
  const auto pure = train_decision_tree(x, {F, F, F, F}, spec(Family::DT));
  EXPECT_EQ(std::get<DecisionTreeModel>(pure.params()).tree.nodes.size(), 1u);
  for (double s : score(pure, x)) EXPECT_EQ(s, 1.0);
  const auto stump = train_decision_tree(x, {F, N, N, N}, spec(Family::DT, {{"max_depth", std::int64_t{0}}}));
  for (double s : score(stump, x)) EXPECT_EQ(s, 0.25);
}

TEST(DecisionTree, PureLeavesScoreZeroOrOne) {
  const auto [x, y] = separable_set(30, 3);
  const auto model = train_decision_tree(x, y, spec(Family::DT));
  for (double s : score(model, x)) EXPECT_TRUE(s == 0.0 || s == 1.0);
}

TEST(DecisionTree, ThreeRegionsNeedDepthTwo) {
  const Matrix x = Matrix::from_rows({{1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}, {9}});
  const Labels y{N, N, N, F, F, F, N, N, N};
  const auto deep = train_decision_tree(x, y, spec(Family::DT));
  EXPECT_EQ(train_accuracy(deep, x, y), 1.0);
  EXPECT_EQ(std::get<DecisionTreeModel>(deep.params()).tree.depth(), 2);
}

TEST(DecisionTree, MinSamplesLeafRespected) {
  const auto [x, y] = separable_set(25, 9);
  const auto model = train_decision_tree(x, y, spec(Family::DT, {{"min_samples_leaf", std::int64_t{7}}}));
  for (const auto& node : std::get<DecisionTreeModel>(model.params()).tree.nodes) {
    if (node.is_leaf()) EXPECT_GE(node.n_samples, 7u);
  }
}

TEST(RandomForest, SingleTreeAndDeterminism) {
  const auto [x, y] = separable_set(20, 4);
  const auto one = train_random_forest(x, y, spec(Family::RF, {{"n_estimators", std::int64_t{1}}}, 5));
  const auto& tree = std::get<RandomForestModel>(one.params()).trees.at(0);
  const auto scores = score(one, x);
  for (std::size_t i = 0; i < x.rows(); ++i) EXPECT_EQ(scores[i], tree.predict(x.row(i)));

  const auto a = train_random_forest(x, y, spec(Family::RF, {{"n_estimators", std::int64_t{50}}}, 5));
  const auto b = train_random_forest(x, y, spec(Family::RF, {{"n_estimators", std::int64_t{50}}}, 5));
  EXPECT_TRUE(a == b);
  EXPECT_EQ(train_accuracy(a, x, y), 1.0);
}

TEST(Boosting, NoRoundsGivesBaseRate) {
  const Matrix x = Matrix::from_rows({{0}, {1}, {2}, {3}});
  const Labels y{F, N, N, N};
  const auto zero = train_gbt(x, y, spec(Family::XGB, {{"n_estimators", std::int64_t{0}}}));
  const auto flat = train_gbt(x, y, spec(Family::XGB, {{"learning_rate", 0.0}}));
  for (double s : score(zero, x)) EXPECT_NEAR(s, 0.25, 1e-15);
  EXPECT_EQ(score(zero, x), score(flat, x));
}

TEST(Boosting, SingleRoundLeafClosedForm) {
  // five rows per side: p = 0.5, g = +-0.5, h = 0.25, leaf = -G / (H + 1)
  Matrix x(10, 1);
  Labels y;
  for (std::size_t i = 0; i < 10; ++i) {
    x(i, 0) = i < 5 ? 0.0 : 1.0;
    y.push_back(i < 5 ? N : F);
  }
  const auto model = train_gbt(x, y, spec(Family::XGB, {{"n_estimators", std::int64_t{1}},
                                                        {"learning_rate", 0.3},
                                                        {"max_depth", std::int64_t{1}}}));
  const double leaf = 2.5 / 2.25;
  const auto s = score(model, x);
  EXPECT_NEAR(s[0], 1.0 / (1.0 + std::exp(0.3 * leaf)), 1e-12);
  EXPECT_NEAR(s[9], 1.0 / (1.0 + std::exp(-0.3 * leaf)), 1e-12);
}

TEST(Boosting, SeparableSetFitsConfidently) {
  const auto [x, y] = separable_set(50, 12);
  const auto model = train_gbt(x, y, builtin_profile(Family::XGB, Profile::PaperVanilla).model);
  EXPECT_EQ(train_accuracy(model, x, y), 1.0);
  const auto s = score(model, x);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == F) EXPECT_GT(s[i], 0.9);
  }
}

TEST(Boosting, SingleClassIsFlaggedConstant) {
  const Matrix x = Matrix::from_rows({{0}, {1}});
  const auto model = train_gbt(x, {N, N}, spec(Family::XGB));
  EXPECT_TRUE(model.degenerate_labels());
  EXPECT_EQ(score(model, x), (std::vector<double>{0.0, 0.0}));
}

TEST(Knn, ZeroDistanceRule) {
  const Matrix x = Matrix::from_rows({{0, 0}, {5, 5}, {6, 6}, {9, 9}});
  const auto model = train_knn(x, {F, N, N, N}, spec(Family::KNN, {{"n_neighbors", std::int64_t{3}}}));
  EXPECT_EQ(score(model, Matrix::from_rows({{0, 0}}))[0], 1.0);
}

TEST(Knn, InverseDistanceWeights) {
  const Matrix x = Matrix::from_rows({{1}, {-1}, {2}, {50}});
  const auto model = train_knn(x, {F, F, N, N}, spec(Family::KNN, {{"n_neighbors", std::int64_t{3}}}));
  EXPECT_NEAR(score(model, Matrix::from_rows({{0}}))[0], 0.8, 1e-12);
}

TEST(Knn, AllRowsEquidistantGivesFlakyFraction) {
  const Matrix x = Matrix::from_rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  const auto model = train_knn(x, {F, N, N, N}, spec(Family::KNN, {{"n_neighbors", std::int64_t{4}}}));
  EXPECT_NEAR(score(model, Matrix::from_rows({{0, 0}}))[0], 0.25, 1e-12);
}

TEST(Knn, MatchesExhaustiveOracle) {
  Rng rng(31);
  const Matrix x = qflake::testing::random_matrix(40, 3, rng);
  Labels y;
  std::vector<int> yi;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < 40; ++i) {
    y.push_back(rng.below(3) == 0 ? F : N);
    yi.push_back(y.back() == F);
    rows.emplace_back(x.row(i).begin(), x.row(i).end());
  }
  const Matrix q = qflake::testing::random_matrix(25, 3, rng);
  for (int k : {1, 3, 7}) {
    const auto model = train_knn(x, y, spec(Family::KNN, {{"n_neighbors", std::int64_t{k}}}));
    const auto s = score(model, q);
    for (std::size_t i = 0; i < q.rows(); ++i) {
      const std::vector<double> qi(q.row(i).begin(), q.row(i).end());
      EXPECT_NEAR(s[i], oracle::knn_score(rows, yi, qi, static_cast<std::size_t>(k)), 1e-12);
    }
  }
}

TEST(Knn, TooLargeK) {
  const Matrix x = Matrix::from_rows({{0}, {1}});
  EXPECT_THROW(train_knn(x, {F, N}, spec(Family::KNN, {{"n_neighbors", std::int64_t{3}}})), Error);
}

TEST(Svm, SeparableSet) {
  const auto [x, y] = separable_set(50, 14);
  const auto model = train_svm(x, y, spec(Family::SVM, {{"C", 0.01}}));
  EXPECT_GE(train_accuracy(model, x, y), 0.95);
}

TEST(Svm, SigmoidSymmetry) {
  for (double m : {0.0, 0.3, 2.5, 40.0}) EXPECT_NEAR(sigmoid(m) + sigmoid(-m), 1.0, 1e-15);
}

TEST(Svm, LabelFlipNegatesHyperplane) {
  Rng rng(6);
  const Matrix x = qflake::testing::random_matrix(40, 4, rng);
  Labels y, flipped;
  for (std::size_t i = 0; i < 40; ++i) {
    y.push_back(x(i, 0) + 0.3 * x(i, 1) + 0.2 * (rng.uniform01() - 0.5) > 0 ? F : N);
    flipped.push_back(flip(y.back()));
  }
  const auto a = train_svm(x, y, spec(Family::SVM, {{"C", 1.0}, {"tol", 1e-9}}));
  const auto b = train_svm(x, flipped, spec(Family::SVM, {{"C", 1.0}, {"tol", 1e-9}}));
  const auto sa = score(a, x);
  const auto sb = score(b, x);
  for (std::size_t i = 0; i < 40; ++i) EXPECT_NEAR(sa[i] + sb[i], 1.0, 1e-6);
}

TEST(Svm, SingleClassRejected) {
  const Matrix x = Matrix::from_rows({{0}, {1}});
  EXPECT_THROW(train_svm(x, {F, F}, spec(Family::SVM)), Error);
}

TEST(Score, EmptyInputAndWidthMismatch) {
  const auto [x, y] = separable_set(10, 1);
  for (Family f : kAllFamilies) {
    const auto model = train(x, y, spec(f, {}, 1));
    EXPECT_TRUE(score(model, Matrix(0, 2)).empty());
    EXPECT_THROW(score(model, Matrix(1, 3)), Error);
    for (double s : score(model, x)) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0);
    }
  }
}

TEST(Predict, ThresholdIsInclusive) {
  const std::vector<double> s{0.49, 0.5, 0.51};
  EXPECT_EQ(predict(s, 0.5), (Labels{N, F, F}));
}
