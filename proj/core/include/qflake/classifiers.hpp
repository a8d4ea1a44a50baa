#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qflake/label.hpp"
#include "qflake/linalg.hpp"

namespace qflake {

enum class Family { XGB, DT, RF, KNN, SVM };

inline constexpr Family kAllFamilies[] = {Family::XGB, Family::DT, Family::RF, Family::KNN,
                                          Family::SVM};

std::string_view to_string(Family family) noexcept;
/// Accepts "xgb", "dt", "rf", "knn", "svm" in any case.
std::optional<Family> parse_family(std::string_view text) noexcept;
constexpr bool is_tree_family(Family f) noexcept {
  return f == Family::XGB || f == Family::DT || f == Family::RF;
}

enum class Criterion { Entropy, Gini };

std::string_view to_string(Criterion c) noexcept;

using ParamValue = std::variant<std::int64_t, double, std::string>;
using ParamMap = std::map<std::string, ParamValue>;

std::string format_param(const ParamValue& value);

/// Family plus named hyperparameters. Unset names take the family default.
struct ClassifierSpec {
  Family family = Family::DT;
  ParamMap params;
  std::uint64_t seed = 0;

  friend bool operator==(const ClassifierSpec&, const ClassifierSpec&) = default;
};

struct TreeParams {
  Criterion criterion = Criterion::Gini;
  int max_depth = -1;  // negative: unlimited
  int min_samples_leaf = 1;
  int min_samples_split = 2;
};

struct ForestParams {
  TreeParams tree;
  int n_estimators = 100;
};

struct BoostParams {
  double learning_rate = 0.3;
  int max_depth = 6;
  int n_estimators = 100;
  double reg_lambda = 1.0;
  double gamma = 0.0;
  double min_child_weight = 1.0;
};

struct KnnParams {
  int n_neighbors = 5;
  bool distance_weighting = true;
};

struct SvmParams {
  double c = 1.0;
  double tolerance = 1e-3;
  std::int64_t max_iterations = 10'000'000;
};

// Validate names and ranges for the spec's family (SpecInvalid otherwise).
TreeParams resolve_tree_params(const ClassifierSpec& spec);
ForestParams resolve_forest_params(const ClassifierSpec& spec);
BoostParams resolve_boost_params(const ClassifierSpec& spec);
KnnParams resolve_knn_params(const ClassifierSpec& spec);
SvmParams resolve_svm_params(const ClassifierSpec& spec);
void validate_spec(const ClassifierSpec& spec);

/// Internal nodes route x[feature] <= threshold left. Leaves have feature < 0
/// and carry `value` (flaky fraction for classification trees, raw leaf
/// weight for boosted trees).
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  int depth = 0;
  std::size_t n_samples = 0;

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // root at 0

  /// Index of the leaf reached by x.
  std::size_t leaf_index(std::span<const double> x) const;
  double predict(std::span<const double> x) const { return nodes[leaf_index(x)].value; }
  int depth() const;
  std::size_t leaf_count() const;
  friend bool operator==(const Tree&, const Tree&) = default;
};

struct DecisionTreeModel {
  Tree tree;
  friend bool operator==(const DecisionTreeModel&, const DecisionTreeModel&) = default;
};

struct RandomForestModel {
  std::vector<Tree> trees;
  friend bool operator==(const RandomForestModel&, const RandomForestModel&) = default;
};

struct BoostedModel {
  double base_margin = 0.0;  // log(p / (1 - p))
  double learning_rate = 0.0;
  std::vector<Tree> trees;
  /// Set when training saw a single class: score is the constant prior.
  std::optional<double> constant_score;
  friend bool operator==(const BoostedModel&, const BoostedModel&) = default;
};

struct KnnModel {
  Matrix x;
  Labels y;
  int n_neighbors = 5;
  bool distance_weighting = true;
  friend bool operator==(const KnnModel&, const KnnModel&) = default;
};

struct LinearSvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::size_t support_vectors = 0;
  friend bool operator==(const LinearSvmModel&, const LinearSvmModel&) = default;
};

using ModelParams =
    std::variant<DecisionTreeModel, RandomForestModel, BoostedModel, KnnModel, LinearSvmModel>;

/// A fitted classifier of any family. Immutable once built.
class TrainedModel {
 public:
  TrainedModel(ClassifierSpec spec, std::size_t n_features, ModelParams params,
               bool degenerate_labels = false)
      : spec_(std::move(spec)),
        n_features_(n_features),
        params_(std::move(params)),
        degenerate_labels_(degenerate_labels) {}

  Family family() const noexcept { return spec_.family; }
  const ClassifierSpec& spec() const noexcept { return spec_; }
  std::size_t n_features() const noexcept { return n_features_; }
  const ModelParams& params() const noexcept { return params_; }
  bool degenerate_labels() const noexcept { return degenerate_labels_; }

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;

 private:
  ClassifierSpec spec_;
  std::size_t n_features_;
  ModelParams params_;
  bool degenerate_labels_;
};

double impurity(std::span<const Label> labels, Criterion criterion);
/// Same, from (possibly weighted) class totals.
double impurity_from_counts(double non_flaky, double flaky, Criterion criterion);

TrainedModel train_decision_tree(const Matrix& x, const Labels& y, const ClassifierSpec& spec);
TrainedModel train_random_forest(const Matrix& x, const Labels& y, const ClassifierSpec& spec);
TrainedModel train_gbt(const Matrix& x, const Labels& y, const ClassifierSpec& spec);
TrainedModel train_knn(const Matrix& x, const Labels& y, const ClassifierSpec& spec);
TrainedModel train_svm(const Matrix& x, const Labels& y, const ClassifierSpec& spec);

/// Dispatches on spec.family.
TrainedModel train(const Matrix& x, const Labels& y, const ClassifierSpec& spec);

/// Flaky-class score in [0, 1] per row. Throws DimensionMismatch.
std::vector<double> score(const TrainedModel& model, const Matrix& x);

Labels predict(std::span<const double> scores, double threshold = 0.5);

double sigmoid(double z) noexcept;

}  // namespace qflake
