#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qflake/corpus.hpp"
#include "qflake/pipeline.hpp"
#include "qflake/text.hpp"

namespace qflake {

inline constexpr int kBundleFormatVersion = 1;

struct BundleMetadata {
  std::string profile;
  std::uint64_t seed = 0;
  std::string corpus_hash;
  std::string created_at;  // ISO-8601 UTC
};

/// Everything needed to score new files: tokenizer, vocabulary, optional PCA,
/// classifier and decision threshold.
struct ModelBundle {
  TokenizerProfile tokenizer = TokenizerProfile::Default;
  Vocabulary vocabulary;
  std::optional<PcaModel> pca;
  TrainedModel model;
  double threshold = kDefaultThreshold;
  BundleMetadata metadata;
};

/// Fits vocabulary and model on the whole corpus. A tuned threshold is chosen
/// on a stratified holdout of the corpus.
ModelBundle train_bundle(const Corpus& corpus, const PipelineConfig& config, std::uint64_t seed,
                         std::string profile_name);

std::vector<double> score(const ModelBundle& bundle, const std::vector<std::string>& texts);

/// Throws BundleInvalid on version mismatch or malformed content.
std::string bundle_to_json(const ModelBundle& bundle);
ModelBundle bundle_from_json(std::string_view text);

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

/// SOURCE_DATE_EPOCH if set, else the Unix epoch, as ISO-8601 UTC.
std::string bundle_timestamp();

}  // namespace qflake
