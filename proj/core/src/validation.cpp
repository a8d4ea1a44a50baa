#include "qflake/validation.hpp"

#include "qflake/error.hpp"
#include "qflake/random.hpp"

namespace qflake {

std::vector<MetricReport> CvResult::reports() const {
  std::vector<MetricReport> out;
  out.reserve(folds.size());
  for (const auto& f : folds) out.push_back(f.report);
  return out;
}

namespace {

std::vector<TokenSequence> tokenize_all(const Corpus& corpus, TokenizerProfile profile) {
  std::vector<TokenSequence> docs;
  docs.reserve(corpus.size());
  for (const auto& e : corpus.entries()) docs.push_back(tokenize(e.text, profile));
  return docs;
}

template <typename T>
std::vector<T> pick(const std::vector<T>& items, const std::vector<std::size_t>& positions) {
  std::vector<T> out;
  out.reserve(positions.size());
  for (auto p : positions) out.push_back(items[p]);
  return out;
}

FoldDetail run_fold(const Corpus& corpus, const std::vector<TokenSequence>& docs,
                    const Labels& y, const std::vector<std::size_t>& train_idx,
                    const std::vector<std::size_t>& test_idx, const PipelineConfig& config,
                    const Vocabulary* shared_vocab, std::uint64_t fold_seed) {
  const auto train_docs = pick(docs, train_idx);
  const auto test_docs = pick(docs, test_idx);
  const Vocabulary vocab = shared_vocab ? *shared_vocab : fit_vocabulary(train_docs);
  const Matrix x_train = transform(train_docs, vocab).to_matrix();
  const Matrix x_test = transform(test_docs, vocab).to_matrix();
  const Labels y_train = pick(y, train_idx);
  const Labels y_test = pick(y, test_idx);

  FoldDetail detail;
  detail.train_rows = train_idx.size();
  detail.test_rows = test_idx.size();
  detail.vocabulary_size = vocab.size();
  for (auto p : test_idx) detail.test_ids.push_back(corpus[p].id);

  ThresholdChoice choice{config.fixed_threshold, std::nullopt};
  if (config.threshold_mode == ThresholdMode::Tuned && config.tuning_set == TuningSet::InnerSplit) {
    choice = choose_threshold_inner(x_train, y_train, config, fold_seed);
  }
  const FittedModel fitted = fit_model(x_train, y_train, config, fold_seed);
  detail.synthetic_rows = fitted.synthetic_rows;
  if (fitted.pca) detail.pca_components = fitted.pca->n_components();
  detail.test_scores = score(fitted, x_test);
  if (config.threshold_mode == ThresholdMode::Tuned && config.tuning_set == TuningSet::Evaluation) {
    ThresholdCurve curve = tune_threshold(detail.test_scores, y_test, config.threshold_step);
    choice = {curve.best_threshold, std::move(curve)};
  }
  detail.threshold = choice.threshold;
  detail.tuning_curve = std::move(choice.curve);
  detail.confusion = confusion(y_test, predict(detail.test_scores, detail.threshold));
  detail.report = compute_metrics(detail.confusion);
  return detail;
}

}  // namespace

CvResult cross_validate(const Corpus& corpus, const PipelineConfig& config, int n_folds,
                        std::uint64_t seed) {
  validate(config);
  const FoldAssignment folds = stratified_folds(corpus, n_folds, seed);
  const auto docs = tokenize_all(corpus, config.tokenizer);
  const Labels y = corpus.labels();
  std::optional<Vocabulary> shared;
  if (config.vocabulary_scope == VocabularyScope::WholeCorpus) shared = fit_vocabulary(docs);

  CvResult result;
  for (int f = 0; f < n_folds; ++f) {
    FoldDetail d = run_fold(corpus, docs, y, folds.complement(f), folds.members(f), config,
                            shared ? &*shared : nullptr,
                            derive_seed(seed, "fold", static_cast<std::uint64_t>(f)));
    d.fold = f;
    result.folds.push_back(std::move(d));
  }
  const auto reports = result.reports();
  result.aggregate = aggregate(reports);
  return result;
}

std::vector<ParamMap> expand_grid(const ParamGrid& grid) {
  std::vector<ParamMap> points{ParamMap{}};
  for (const auto& axis : grid) {
    if (axis.values.empty()) throw Error(ErrorCode::EmptyGrid, "grid axis " + axis.name + " empty");
    std::vector<ParamMap> next;
    for (const auto& p : points) {
      for (const auto& v : axis.values) {
        ParamMap q = p;
        q[axis.name] = v;
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

PipelineConfig apply_grid_point(const PipelineConfig& base, const ParamMap& point) {
  PipelineConfig config = base;
  for (const auto& [name, value] : point) {
    if (name == kPcaAxis) {
      std::int64_t k = 0;
      if (auto i = std::get_if<std::int64_t>(&value)) k = *i;
      else if (auto d = std::get_if<double>(&value)) k = static_cast<std::int64_t>(*d);
      else throw Error(ErrorCode::ConfigInvalid, "pca_components must be an integer");
      if (k < 0) throw Error(ErrorCode::ConfigInvalid, "pca_components must be >= 0");
      config.pca_components =
          k == 0 ? std::nullopt : std::optional<std::size_t>(static_cast<std::size_t>(k));
    } else {
      config.model.params[name] = value;
    }
  }
  return config;
}

GridSearchResult grid_search(const Corpus& corpus, const PipelineConfig& base,
                             const ParamGrid& grid, int n_folds, std::uint64_t seed) {
  if (grid.empty()) throw Error(ErrorCode::EmptyGrid, "parameter grid is empty");
  GridSearchResult result;
  for (const auto& point : expand_grid(grid)) {
    PipelineConfig config = apply_grid_point(base, point);
    const CvResult cv = cross_validate(corpus, config, n_folds, seed);
    result.points.push_back({point, std::move(config), cv.aggregate});
  }
  for (std::size_t i = 1; i < result.points.size(); ++i) {
    if (result.points[i].aggregate[Metric::F1].mean >
        result.points[result.best_index].aggregate[Metric::F1].mean) {
      result.best_index = i;
    }
  }
  return result;
}

CvResult nested_cross_validate(const Corpus& corpus, const PipelineConfig& base,
                               const ParamGrid& grid, int n_folds, int inner_folds,
                               std::uint64_t seed) {
  validate(base);
  const FoldAssignment folds = stratified_folds(corpus, n_folds, seed);
  const Labels y = corpus.labels();

  CvResult result;
  for (int f = 0; f < n_folds; ++f) {
    const auto train_idx = folds.complement(f);
    const auto test_idx = folds.members(f);
    const std::uint64_t fold_seed = derive_seed(seed, "fold", static_cast<std::uint64_t>(f));
    const GridSearchResult inner = grid_search(corpus.subset(train_idx), base, grid, inner_folds,
                                               derive_seed(fold_seed, "inner-cv"));
    const PipelineConfig& chosen = inner.best().config;
    const auto docs = tokenize_all(corpus, chosen.tokenizer);
    std::optional<Vocabulary> shared;
    if (chosen.vocabulary_scope == VocabularyScope::WholeCorpus) shared = fit_vocabulary(docs);
    FoldDetail d = run_fold(corpus, docs, y, train_idx, test_idx, chosen,
                            shared ? &*shared : nullptr, fold_seed);
    d.fold = f;
    d.selected_params = inner.best().point;
    result.folds.push_back(std::move(d));
  }
  const auto reports = result.reports();
  result.aggregate = aggregate(reports);
  return result;
}

}  // namespace qflake
