#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qflake/corpus.hpp"
#include "qflake/profiles.hpp"
#include "qflake/validation.hpp"

namespace qflake {

/// Imbalance remedy applied to a cell.
enum class Method { Vanilla, Smote, Threshold, Hybrid };

inline constexpr Method kAllMethods[] = {Method::Vanilla, Method::Smote, Method::Threshold,
                                         Method::Hybrid};

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view text) noexcept;
constexpr bool uses_smote(Method m) noexcept { return m == Method::Smote || m == Method::Hybrid; }
constexpr bool uses_tuning(Method m) noexcept {
  return m == Method::Threshold || m == Method::Hybrid;
}

enum class CvMode { Flat, Nested };

struct ExperimentConfig {
  SubsetMode dataset = SubsetMode::Imbalanced;
  Method method = Method::Vanilla;
  std::vector<Family> families{std::begin(kAllFamilies), std::end(kAllFamilies)};
  std::uint64_t seed = 42;
  int n_folds = kDefaultFolds;
  TokenizerProfile tokenizer = TokenizerProfile::Default;
  VocabularyScope vocabulary_scope = VocabularyScope::TrainingFolds;
  TuningSet tuning_set = TuningSet::InnerSplit;
  CvMode cv_mode = CvMode::Flat;
  /// Replaces threshold tuning with this fixed cutoff (wiring diagnostics).
  std::optional<double> frozen_threshold;
};

/// Throws ConfigInvalid: the balanced subset only admits Vanilla, and the
/// family list must be non-empty and duplicate-free.
void validate(const ExperimentConfig& config);

/// Pipeline wiring for one (method, family) cell.
PipelineConfig cell_pipeline(const ExperimentConfig& config, Family family);
Profile cell_profile(Method method) noexcept;

/// Small per-family grids searched in nested mode.
ParamGrid builtin_grid(Family family);

/// Published mean/std for a cell, if the original tables report one.
std::optional<AggregateReport> paper_reference(SubsetMode dataset, Method method, Family family);

struct ResultCell {
  Method method = Method::Vanilla;
  Family family = Family::DT;
  Profile profile = Profile::PaperVanilla;
  PipelineConfig pipeline;
  CvResult cv;
  std::optional<AggregateReport> paper;
};

struct ResultsTable {
  SubsetMode dataset = SubsetMode::Imbalanced;
  std::uint64_t seed = 0;
  std::string corpus_hash;
  std::size_t flaky = 0;
  std::size_t non_flaky = 0;
  std::vector<ResultCell> cells;

  const ResultCell* find(Method method, Family family) const;
};

/// Runs every requested family for one (dataset, method). All-or-nothing:
/// any stage failure propagates and no partial table is returned.
ResultsTable run_configuration(const Corpus& corpus, const ExperimentConfig& config);

struct PaperSuite {
  ResultsTable balanced;
  ResultsTable imbalanced;
};

/// Balanced x Vanilla plus Imbalanced x {Vanilla, Smote, Threshold, Hybrid}
/// for all five families, rows in the published order. `base` supplies the
/// seed and replication flags; its dataset/method/families are overridden.
PaperSuite run_paper_suite(const Corpus& corpus, const ExperimentConfig& base);

/// Appends the cells of `more` (same dataset) to `table`.
void merge_into(ResultsTable& table, ResultsTable more);

/// CSV with columns method, model, <metric>_mean, <metric>_std for each
/// metric, then per metric a `_best_in_method` and `_best_overall` flag.
std::string render_csv(const ResultsTable& table);

/// Full audit document: effective config, seeds, corpus hash, per-cell
/// aggregates with published values and deltas, per-fold details.
std::string render_run_json(const std::vector<const ResultsTable*>& tables,
                            const ExperimentConfig& config, std::string_view suite);

/// Writes table_<dataset>.csv for each table plus run.json into `dir`.
void write_results(const std::filesystem::path& dir,
                   const std::vector<const ResultsTable*>& tables, const ExperimentConfig& config,
                   std::string_view suite);

}  // namespace qflake
