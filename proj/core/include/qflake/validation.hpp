#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qflake/corpus.hpp"
#include "qflake/metrics.hpp"
#include "qflake/pipeline.hpp"

namespace qflake {

inline constexpr int kDefaultFolds = 5;

/// Audit record of one evaluation fold.
struct FoldDetail {
  int fold = 0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  std::size_t vocabulary_size = 0;
  std::size_t synthetic_rows = 0;
  std::optional<std::size_t> pca_components;  // effective k, if PCA ran
  double threshold = kDefaultThreshold;
  std::optional<ThresholdCurve> tuning_curve;
  ConfusionMatrix confusion;
  MetricReport report;
  std::vector<std::string> test_ids;
  std::vector<double> test_scores;
  /// Set when nested CV picked the configuration for this fold.
  std::optional<ParamMap> selected_params;
};

struct CvResult {
  std::vector<FoldDetail> folds;
  AggregateReport aggregate;

  std::vector<MetricReport> reports() const;
};

/// Stratified k-fold evaluation of one pipeline. Per fold: vocabulary,
/// vectorization, threshold choice, SMOTE -> PCA -> model on the training
/// split, scoring of the held-out fold.
CvResult cross_validate(const Corpus& corpus, const PipelineConfig& config,
                        int n_folds = kDefaultFolds, std::uint64_t seed = 0);

/// One axis of a parameter grid. The name "pca_components" targets the
/// pipeline (integer k, or 0 to disable PCA); other names are classifier
/// hyperparameters.
struct GridAxis {
  std::string name;
  std::vector<ParamValue> values;
};
using ParamGrid = std::vector<GridAxis>;

inline constexpr const char* kPcaAxis = "pca_components";

/// Cartesian product in declared order (the first axis varies slowest).
std::vector<ParamMap> expand_grid(const ParamGrid& grid);
PipelineConfig apply_grid_point(const PipelineConfig& base, const ParamMap& point);

struct GridPointResult {
  ParamMap point;
  PipelineConfig config;
  AggregateReport aggregate;
};

struct GridSearchResult {
  std::vector<GridPointResult> points;
  std::size_t best_index = 0;

  const GridPointResult& best() const { return points[best_index]; }
};

/// Picks the grid point with the highest mean F1; ties go to the first point
/// in declared order. Throws EmptyGrid.
GridSearchResult grid_search(const Corpus& corpus, const PipelineConfig& base,
                             const ParamGrid& grid, int n_folds = kDefaultFolds,
                             std::uint64_t seed = 0);

/// Outer stratified CV; each outer training split runs its own inner
/// grid_search, and the winner is refit on the full outer training split.
CvResult nested_cross_validate(const Corpus& corpus, const PipelineConfig& base,
                               const ParamGrid& grid, int n_folds = kDefaultFolds,
                               int inner_folds = kDefaultFolds, std::uint64_t seed = 0);

}  // namespace qflake
