#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qflake/classifiers.hpp"
#include "qflake/label.hpp"
#include "qflake/linalg.hpp"
#include "qflake/metrics.hpp"
#include "qflake/resample.hpp"
#include "qflake/text.hpp"

namespace qflake {

enum class VocabularyScope {
  TrainingFolds,  // fit on each training split only
  WholeCorpus,    // fit once on every document, as described in the original study
};

enum class ThresholdMode { Fixed, Tuned };

enum class TuningSet {
  InnerSplit,  // stratified holdout carved from the training split
  Evaluation,  // the evaluation fold itself, as described in the original study
};

/// Everything that determines how one model is trained and thresholded.
struct PipelineConfig {
  ClassifierSpec model;
  TokenizerProfile tokenizer = TokenizerProfile::Default;
  std::optional<std::size_t> pca_components;
  bool smote = false;
  int smote_neighbors = kDefaultSmoteNeighbors;
  ThresholdMode threshold_mode = ThresholdMode::Fixed;
  double fixed_threshold = kDefaultThreshold;
  TuningSet tuning_set = TuningSet::InnerSplit;
  double tuning_fraction = 0.2;
  double threshold_step = kDefaultThresholdStep;
  VocabularyScope vocabulary_scope = VocabularyScope::TrainingFolds;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Throws ConfigInvalid / SpecInvalid.
void validate(const PipelineConfig& config);

/// The model-side half of the pipeline (features in, scores out).
struct FittedModel {
  std::optional<PcaModel> pca;
  TrainedModel model;
  std::size_t synthetic_rows = 0;
  std::optional<std::size_t> requested_components;
};

/// SMOTE (if enabled), then PCA (if enabled) on the possibly resampled rows,
/// then the classifier. The component count is clamped to min(n - 1, d) of the
/// rows PCA is fit on. Seeds for each stage are derived from `seed`.
FittedModel fit_model(const Matrix& x, const Labels& y, const PipelineConfig& config,
                      std::uint64_t seed);

std::vector<double> score(const FittedModel& fitted, const Matrix& x);

struct ThresholdChoice {
  double threshold = kDefaultThreshold;
  std::optional<ThresholdCurve> curve;  // set when tuned
};

/// Stratified holdout positions: returns (fit part, tuning part) indices.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_holdout(
    const Labels& y, double holdout_fraction, std::uint64_t seed);

/// Picks the decision threshold for a model trained on (x, y) under the
/// InnerSplit policy: fits on the inner part, tunes on the holdout. For Fixed
/// mode returns config.fixed_threshold without training.
ThresholdChoice choose_threshold_inner(const Matrix& x, const Labels& y,
                                       const PipelineConfig& config, std::uint64_t seed);

}  // namespace qflake
