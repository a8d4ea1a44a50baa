#include "qflake/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "qflake/error.hpp"
#include "qflake/random.hpp"

namespace qflake {

void validate(const PipelineConfig& config) {
  validate_spec(config.model);
  if (config.pca_components && *config.pca_components == 0) {
    throw Error(ErrorCode::ConfigInvalid, "pca_components must be >= 1");
  }
  if (config.smote_neighbors < 1) throw Error(ErrorCode::ConfigInvalid, "smote_k must be >= 1");
  if (!(config.fixed_threshold >= 0.0 && config.fixed_threshold <= 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, "threshold must lie in [0, 1]");
  }
  if (!(config.tuning_fraction > 0.0 && config.tuning_fraction < 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, "tuning fraction must lie in (0, 1)");
  }
  threshold_grid(config.threshold_step);
}

FittedModel fit_model(const Matrix& x, const Labels& y, const PipelineConfig& config,
                      std::uint64_t seed) {
  const Matrix* features = &x;
  const Labels* labels = &y;
  ResampledSet resampled;
  std::size_t synthetic = 0;
  if (config.smote) {
    resampled = smote_resample(x, y, config.smote_neighbors, derive_seed(seed, "smote"));
    synthetic = resampled.synthetic_count();
    features = &resampled.x;
    labels = &resampled.y;
  }

  std::optional<PcaModel> pca;
  Matrix projected;
  if (config.pca_components) {
    const std::size_t ceiling = pca_max_components(features->rows(), features->cols());
    const std::size_t k = std::min(*config.pca_components, ceiling);
    if (k == 0) throw Error(ErrorCode::RankTooSmall, "training split too small for PCA");
    pca = pca_fit(*features, k);
    projected = pca_transform(*pca, *features);
    features = &projected;
  }

  ClassifierSpec spec = config.model;
  spec.seed = derive_seed(seed, "model");
  TrainedModel model = train(*features, *labels, spec);
  return FittedModel{std::move(pca), std::move(model), synthetic, config.pca_components};
}

std::vector<double> score(const FittedModel& fitted, const Matrix& x) {
  if (fitted.pca) return score(fitted.model, pca_transform(*fitted.pca, x));
  return score(fitted.model, x);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_holdout(
    const Labels& y, double holdout_fraction, std::uint64_t seed) {
  std::vector<std::size_t> fit;
  std::vector<std::size_t> hold;
  for (Label label : {Label::Flaky, Label::NonFlaky}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == label) members.push_back(i);
    }
    Rng rng(derive_seed(seed, "holdout", static_cast<std::uint64_t>(label)));
    rng.shuffle(std::span<std::size_t>(members));
    auto n_hold = static_cast<std::size_t>(
        std::llround(holdout_fraction * static_cast<double>(members.size())));
    // keep at least one of each class on both sides when possible
    if (members.size() >= 2) n_hold = std::clamp<std::size_t>(n_hold, 1, members.size() - 1);
    hold.insert(hold.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_hold));
    fit.insert(fit.end(), members.begin() + static_cast<std::ptrdiff_t>(n_hold), members.end());
  }
  std::sort(fit.begin(), fit.end());
  std::sort(hold.begin(), hold.end());
  return {fit, hold};
}

ThresholdChoice choose_threshold_inner(const Matrix& x, const Labels& y,
                                       const PipelineConfig& config, std::uint64_t seed) {
  if (config.threshold_mode == ThresholdMode::Fixed) return {config.fixed_threshold, std::nullopt};
  auto [fit_rows, hold_rows] =
      stratified_holdout(y, config.tuning_fraction, derive_seed(seed, "tuning-split"));
  Labels fit_y;
  Labels hold_y;
  for (auto i : fit_rows) fit_y.push_back(y[i]);
  for (auto i : hold_rows) hold_y.push_back(y[i]);
  const FittedModel inner =
      fit_model(x.select_rows(fit_rows), fit_y, config, derive_seed(seed, "tuning-model"));
  const auto scores = score(inner, x.select_rows(hold_rows));
  ThresholdCurve curve = tune_threshold(scores, hold_y, config.threshold_step);
  return {curve.best_threshold, std::move(curve)};
}

}  // namespace qflake
