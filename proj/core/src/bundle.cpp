#include "qflake/bundle.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "qflake/error.hpp"
#include "serialize.hpp"

namespace qflake {

namespace {

Matrix featurize(const ModelBundle& bundle, const std::vector<std::string>& texts) {
  std::vector<TokenSequence> docs;
  docs.reserve(texts.size());
  for (const auto& t : texts) docs.push_back(tokenize(t, bundle.tokenizer));
  return transform(docs, bundle.vocabulary).to_matrix();
}

}  // namespace

std::string bundle_timestamp() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0) t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ModelBundle train_bundle(const Corpus& corpus, const PipelineConfig& config, std::uint64_t seed,
                         std::string profile_name) {
  validate(config);
  std::vector<TokenSequence> docs;
  for (const auto& e : corpus.entries()) docs.push_back(tokenize(e.text, config.tokenizer));
  Vocabulary vocab = fit_vocabulary(docs);
  const Matrix x = transform(docs, vocab).to_matrix();
  const Labels y = corpus.labels();

  // With no evaluation fold at training time, tuning always uses a holdout.
  PipelineConfig tuning = config;
  tuning.tuning_set = TuningSet::InnerSplit;
  const ThresholdChoice choice = choose_threshold_inner(x, y, tuning, seed);
  FittedModel fitted = fit_model(x, y, config, seed);

  return ModelBundle{config.tokenizer,
                     std::move(vocab),
                     std::move(fitted.pca),
                     std::move(fitted.model),
                     choice.threshold,
                     {std::move(profile_name), seed, corpus.content_hash(), bundle_timestamp()}};
}

std::vector<double> score(const ModelBundle& bundle, const std::vector<std::string>& texts) {
  if (texts.empty()) return {};
  Matrix x = featurize(bundle, texts);
  if (bundle.pca) x = pca_transform(*bundle.pca, x);
  return score(bundle.model, x);
}

std::string bundle_to_json(const ModelBundle& b) {
  Json j;
  j["format_version"] = kBundleFormatVersion;
  j["tokenizer"] = std::string(to_string(b.tokenizer));
  j["vocabulary"] = b.vocabulary.ordered_tokens();
  j["pca"] = b.pca ? pca_to_json(*b.pca) : Json();
  j["model"] = model_to_json(b.model);
  j["threshold"] = b.threshold;
  j["metadata"] = {{"profile", b.metadata.profile},
                   {"seed", b.metadata.seed},
                   {"corpus_hash", b.metadata.corpus_hash},
                   {"created_at", b.metadata.created_at}};
  return j.dump() + "\n";
}

ModelBundle bundle_from_json(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    const int version = j.at("format_version").get<int>();
    if (version != kBundleFormatVersion) {
      throw Error(ErrorCode::BundleInvalid,
                  "unsupported bundle format_version " + std::to_string(version));
    }
    const auto tokenizer = parse_tokenizer_profile(j.at("tokenizer").get<std::string>());
    if (!tokenizer) throw Error(ErrorCode::BundleInvalid, "unknown tokenizer profile");
    auto tokens = j.at("vocabulary").get<std::vector<std::string>>();
    Vocabulary vocab(tokens);
    if (vocab.size() != tokens.size()) {
      throw Error(ErrorCode::BundleInvalid, "vocabulary has duplicate tokens");
    }
    std::optional<PcaModel> pca;
    if (!j.at("pca").is_null()) pca = pca_from_json(j.at("pca"));
    TrainedModel model = model_from_json(j.at("model"));
    const std::size_t expected = pca ? pca->n_components() : vocab.size();
    if (pca && pca->n_features() != vocab.size()) {
      throw Error(ErrorCode::BundleInvalid, "PCA input width disagrees with vocabulary");
    }
    if (model.n_features() != expected) {
      throw Error(ErrorCode::BundleInvalid, "model input width disagrees with features");
    }
    const double threshold = j.at("threshold").get<double>();
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
      throw Error(ErrorCode::BundleInvalid, "threshold outside [0, 1]");
    }
    const Json& m = j.at("metadata");
    return ModelBundle{*tokenizer,
                       std::move(vocab),
                       std::move(pca),
                       std::move(model),
                       threshold,
                       {m.at("profile").get<std::string>(), m.at("seed").get<std::uint64_t>(),
                        m.at("corpus_hash").get<std::string>(),
                        m.at("created_at").get<std::string>()}};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::BundleInvalid, std::string("malformed bundle: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BundleInvalid) throw;
    throw Error(ErrorCode::BundleInvalid, std::string("malformed bundle: ") + e.what());
  }
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << bundle_to_json(bundle);
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open bundle " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return bundle_from_json(ss.str());
}

}  // namespace qflake
