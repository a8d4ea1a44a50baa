#include "qflake/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qflake/error.hpp"
#include "serialize.hpp"

namespace qflake {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Vanilla: return "Vanilla";
    case Method::Smote: return "SMOTE";
    case Method::Threshold: return "Threshold";
    case Method::Hybrid: return "Hybrid";
  }
  return "Vanilla";
}

std::optional<Method> parse_method(std::string_view text) noexcept {
  std::string lower(text);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "vanilla") return Method::Vanilla;
  if (lower == "smote") return Method::Smote;
  if (lower == "threshold") return Method::Threshold;
  if (lower == "hybrid") return Method::Hybrid;
  return std::nullopt;
}

void validate(const ExperimentConfig& config) {
  if (config.dataset == SubsetMode::Balanced && config.method != Method::Vanilla) {
    throw Error(ErrorCode::ConfigInvalid,
                "the balanced dataset only admits the Vanilla method, got " +
                    std::string(to_string(config.method)));
  }
  if (config.families.empty()) throw Error(ErrorCode::ConfigInvalid, "no model families selected");
  std::set<Family> seen(config.families.begin(), config.families.end());
  if (seen.size() != config.families.size()) {
    throw Error(ErrorCode::ConfigInvalid, "duplicate model family");
  }
  if (config.n_folds < 2) throw Error(ErrorCode::ConfigInvalid, "need at least 2 folds");
  if (config.frozen_threshold &&
      !(*config.frozen_threshold >= 0.0 && *config.frozen_threshold <= 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, "frozen threshold must lie in [0, 1]");
  }
}

Profile cell_profile(Method method) noexcept {
  return uses_smote(method) ? Profile::PaperSmote : Profile::PaperVanilla;
}

PipelineConfig cell_pipeline(const ExperimentConfig& config, Family family) {
  const ProfileSettings settings = builtin_profile(family, cell_profile(config.method));
  PipelineConfig pc;
  pc.model = settings.model;
  pc.pca_components = settings.pca_components;
  pc.tokenizer = config.tokenizer;
  pc.vocabulary_scope = config.vocabulary_scope;
  pc.smote = uses_smote(config.method);
  if (uses_tuning(config.method)) {
    if (config.frozen_threshold) {
      pc.threshold_mode = ThresholdMode::Fixed;
      pc.fixed_threshold = *config.frozen_threshold;
    } else {
      pc.threshold_mode = ThresholdMode::Tuned;
      pc.tuning_set = config.tuning_set;
    }
  }
  return pc;
}

ParamGrid builtin_grid(Family family) {
  using I = std::int64_t;
  switch (family) {
    case Family::XGB:
      return {{"max_depth", {I{3}, I{5}}}, {"learning_rate", {0.3, 0.5}}};
    case Family::DT:
      return {{"max_depth", {I{5}, I{10}}}, {"criterion", {std::string("entropy"), std::string("gini")}}};
    case Family::RF:
      return {{"n_estimators", {I{100}, I{200}}}};
    case Family::KNN:
      return {{"n_neighbors", {I{3}, I{7}}}, {kPcaAxis, {I{150}, I{200}}}};
    case Family::SVM:
      return {{"C", {0.01, 0.1}}, {kPcaAxis, {I{180}, I{220}}}};
  }
  return {};
}

namespace {

struct PaperRow {
  SubsetMode dataset;
  Method method;
  Family family;
  double v[5][2];  // accuracy, precision, recall, f1, mcc: (mean, std)
};

// Published reference values (mean, std) per cell.
constexpr PaperRow kPaperRows[] = {
    {SubsetMode::Balanced, Method::Vanilla, Family::XGB,
     {{0.933, 0.042}, {0.924, 0.069}, {0.956, 0.089}, {0.934, 0.043}, {0.877, 0.075}}},
    {SubsetMode::Balanced, Method::Vanilla, Family::DT,
     {{0.889, 0.092}, {0.938, 0.123}, {0.867, 0.163}, {0.883, 0.103}, {0.805, 0.156}}},
    {SubsetMode::Balanced, Method::Vanilla, Family::RF,
     {{0.889, 0.050}, {0.878, 0.071}, {0.911, 0.083}, {0.891, 0.050}, {0.786, 0.100}}},
    {SubsetMode::Balanced, Method::Vanilla, Family::KNN,
     {{0.744, 0.056}, {0.872, 0.108}, {0.600, 0.151}, {0.690, 0.106}, {0.525, 0.099}}},
    {SubsetMode::Balanced, Method::Vanilla, Family::SVM,
     {{0.833, 0.086}, {0.858, 0.096}, {0.800, 0.130}, {0.824, 0.101}, {0.673, 0.171}}},

    {SubsetMode::Imbalanced, Method::Vanilla, Family::XGB,
     {{0.980, 0.040}, {0.778, 0.122}, {0.859, 0.055}, {0.850, 0.055}, {0.441, 0.091}}},
    {SubsetMode::Imbalanced, Method::Vanilla, Family::DT,
     {{0.962, 0.025}, {0.913, 0.121}, {0.867, 0.129}, {0.877, 0.079}, {0.864, 0.087}}},
    {SubsetMode::Imbalanced, Method::Vanilla, Family::RF,
     {{0.961, 0.020}, {0.946, 0.065}, {0.800, 0.083}, {0.866, 0.082}, {0.849, 0.083}}},
    {SubsetMode::Imbalanced, Method::Vanilla, Family::KNN,
     {{0.892, 0.013}, {0.920, 0.098}, {0.356, 0.109}, {0.497, 0.110}, {0.522, 0.073}}},
    {SubsetMode::Imbalanced, Method::Vanilla, Family::SVM,
     {{0.920, 0.024}, {0.845, 0.094}, {0.622, 0.194}, {0.691, 0.128}, {0.672, 0.112}}},

    {SubsetMode::Imbalanced, Method::Smote, Family::XGB,
     {{0.969, 0.023}, {0.978, 0.044}, {0.822, 0.151}, {0.884, 0.096}, {0.877, 0.094}}},
    {SubsetMode::Imbalanced, Method::Smote, Family::DT,
     {{0.955, 0.042}, {0.920, 0.160}, {0.844, 0.206}, {0.850, 0.144}, {0.845, 0.140}}},
    {SubsetMode::Imbalanced, Method::Smote, Family::RF,
     {{0.944, 0.013}, {0.824, 0.048}, {0.822, 0.054}, {0.822, 0.054}, {0.790, 0.049}}},
    {SubsetMode::Imbalanced, Method::Smote, Family::KNN,
     {{0.872, 0.044}, {0.605, 0.138}, {0.622, 0.206}, {0.592, 0.144}, {0.531, 0.162}}},
    {SubsetMode::Imbalanced, Method::Smote, Family::SVM,
     {{0.920, 0.024}, {0.845, 0.094}, {0.622, 0.194}, {0.691, 0.128}, {0.672, 0.112}}},

    {SubsetMode::Imbalanced, Method::Threshold, Family::XGB,
     {{0.962, 0.013}, {0.964, 0.073}, {0.800, 0.130}, {0.863, 0.056}, {0.854, 0.055}}},
    {SubsetMode::Imbalanced, Method::Threshold, Family::DT,
     {{0.965, 0.027}, {0.938, 0.137}, {0.866, 0.144}, {0.886, 0.083}, {0.877, 0.089}}},
    {SubsetMode::Imbalanced, Method::Threshold, Family::RF,
     {{0.961, 0.023}, {0.946, 0.073}, {0.800, 0.092}, {0.866, 0.082}, {0.849, 0.093}}},
    {SubsetMode::Imbalanced, Method::Threshold, Family::KNN,
     {{0.875, 0.031}, {0.650, 0.152}, {0.556, 0.136}, {0.579, 0.094}, {0.521, 0.100}}},
    {SubsetMode::Imbalanced, Method::Threshold, Family::SVM,
     {{0.920, 0.015}, {0.756, 0.050}, {0.733, 0.169}, {0.733, 0.082}, {0.694, 0.086}}},

    {SubsetMode::Imbalanced, Method::Hybrid, Family::XGB,
     {{0.969, 0.023}, {0.978, 0.044}, {0.822, 0.151}, {0.884, 0.096}, {0.877, 0.094}}},
    {SubsetMode::Imbalanced, Method::Hybrid, Family::DT,
     {{0.956, 0.035}, {0.898, 0.155}, {0.889, 0.122}, {0.876, 0.091}, {0.863, 0.098}}},
    {SubsetMode::Imbalanced, Method::Hybrid, Family::RF,
     {{0.944, 0.013}, {0.824, 0.048}, {0.822, 0.054}, {0.822, 0.054}, {0.790, 0.049}}},
    {SubsetMode::Imbalanced, Method::Hybrid, Family::KNN,
     {{0.899, 0.033}, {0.713, 0.084}, {0.578, 0.215}, {0.623, 0.156}, {0.580, 0.161}}},
    {SubsetMode::Imbalanced, Method::Hybrid, Family::SVM,
     {{0.937, 0.014}, {0.820, 0.092}, {0.800, 0.163}, {0.792, 0.067}, {0.768, 0.069}}},
};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::optional<AggregateReport> paper_reference(SubsetMode dataset, Method method, Family family) {
  for (const auto& row : kPaperRows) {
    if (row.dataset == dataset && row.method == method && row.family == family) {
      AggregateReport r;
      for (std::size_t m = 0; m < kMetricCount; ++m) r.stats[m] = {row.v[m][0], row.v[m][1]};
      return r;
    }
  }
  return std::nullopt;
}

const ResultCell* ResultsTable::find(Method method, Family family) const {
  for (const auto& c : cells) {
    if (c.method == method && c.family == family) return &c;
  }
  return nullptr;
}

ResultsTable run_configuration(const Corpus& corpus, const ExperimentConfig& config) {
  validate(config);
  const Corpus subset = select_subset(corpus, config.dataset, config.seed);
  ResultsTable table;
  table.dataset = config.dataset;
  table.seed = config.seed;
  table.corpus_hash = corpus.content_hash();
  table.flaky = subset.count(Label::Flaky);
  table.non_flaky = subset.count(Label::NonFlaky);
  for (Family family : config.families) {
    ResultCell cell;
    cell.method = config.method;
    cell.family = family;
    cell.profile = cell_profile(config.method);
    cell.pipeline = cell_pipeline(config, family);
    cell.cv = config.cv_mode == CvMode::Nested
                  ? nested_cross_validate(subset, cell.pipeline, builtin_grid(family),
                                          config.n_folds, config.n_folds, config.seed)
                  : cross_validate(subset, cell.pipeline, config.n_folds, config.seed);
    cell.paper = paper_reference(config.dataset, config.method, family);
    table.cells.push_back(std::move(cell));
  }
  return table;
}

void merge_into(ResultsTable& table, ResultsTable more) {
  if (table.dataset != more.dataset) {
    throw Error(ErrorCode::ConfigInvalid, "cannot merge tables of different datasets");
  }
  for (auto& c : more.cells) table.cells.push_back(std::move(c));
}

PaperSuite run_paper_suite(const Corpus& corpus, const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  cfg.families.assign(std::begin(kAllFamilies), std::end(kAllFamilies));
  cfg.dataset = SubsetMode::Balanced;
  cfg.method = Method::Vanilla;
  PaperSuite suite{run_configuration(corpus, cfg), {}};
  cfg.dataset = SubsetMode::Imbalanced;
  bool first = true;
  for (Method m : kAllMethods) {
    cfg.method = m;
    ResultsTable t = run_configuration(corpus, cfg);
    if (first) {
      suite.imbalanced = std::move(t);
      first = false;
    } else {
      merge_into(suite.imbalanced, std::move(t));
    }
  }
  return suite;
}

std::string render_csv(const ResultsTable& table) {
  std::ostringstream os;
  os << "method,model";
  for (Metric m : kAllMetrics) os << ',' << to_string(m) << "_mean," << to_string(m) << "_std";
  for (Metric m : kAllMetrics) {
    os << ',' << to_string(m) << "_best_in_method," << to_string(m) << "_best_overall";
  }
  os << '\n';

  // Markers compare the printed (6-decimal) means.
  auto shown = [](double v) { return std::round(v * 1e6) / 1e6; };
  for (const auto& cell : table.cells) {
    os << to_string(cell.method) << ',' << to_string(cell.family);
    for (Metric m : kAllMetrics) {
      os << ',' << fixed6(cell.cv.aggregate[m].mean) << ',' << fixed6(cell.cv.aggregate[m].std);
    }
    for (Metric m : kAllMetrics) {
      double best_method = -std::numeric_limits<double>::infinity();
      double best_all = -std::numeric_limits<double>::infinity();
      for (const auto& other : table.cells) {
        const double v = shown(other.cv.aggregate[m].mean);
        best_all = std::max(best_all, v);
        if (other.method == cell.method) best_method = std::max(best_method, v);
      }
      const double v = shown(cell.cv.aggregate[m].mean);
      os << ',' << (v == best_method ? "true" : "false") << ','
         << (v == best_all ? "true" : "false");
    }
    os << '\n';
  }
  return os.str();
}

namespace {

nlohmann::json aggregate_json(const AggregateReport& ours, const std::optional<AggregateReport>& paper) {
  nlohmann::json j = nlohmann::json::object();
  for (Metric m : kAllMetrics) {
    nlohmann::json e;
    e["mean"] = ours[m].mean;
    e["std"] = ours[m].std;
    if (paper) {
      e["paper_mean"] = (*paper)[m].mean;
      e["paper_std"] = (*paper)[m].std;
      e["delta_mean"] = ours[m].mean - (*paper)[m].mean;
      e["abs_delta_mean"] = std::abs(ours[m].mean - (*paper)[m].mean);
    }
    j[std::string(to_string(m))] = e;
  }
  return j;
}

nlohmann::json fold_json(const FoldDetail& f) {
  nlohmann::json j;
  j["fold"] = f.fold;
  j["train_rows"] = f.train_rows;
  j["test_rows"] = f.test_rows;
  j["vocabulary_size"] = f.vocabulary_size;
  j["synthetic_rows"] = f.synthetic_rows;
  j["pca_components"] = f.pca_components ? nlohmann::json(*f.pca_components) : nlohmann::json();
  j["threshold"] = f.threshold;
  if (f.tuning_curve) {
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& p : f.tuning_curve->grid) curve.push_back({p.threshold, p.f1});
    j["tuning_curve"] = curve;
  }
  j["confusion"] = {{"tp", f.confusion.tp}, {"fp", f.confusion.fp}, {"fn", f.confusion.fn},
                    {"tn", f.confusion.tn}};
  nlohmann::json metrics;
  nlohmann::json flags = nlohmann::json::array();
  for (Metric m : kAllMetrics) {
    metrics[std::string(to_string(m))] = f.report[m];
    if (f.report.flagged(m)) flags.push_back(std::string(to_string(m)));
  }
  j["metrics"] = metrics;
  j["zero_denominator"] = flags;
  if (f.selected_params) j["selected_params"] = params_to_json(*f.selected_params);
  return j;
}

}  // namespace

std::string render_run_json(const std::vector<const ResultsTable*>& tables,
                            const ExperimentConfig& config, std::string_view suite) {
  nlohmann::json doc;
  doc["format_version"] = 1;
  doc["suite"] = std::string(suite);
  doc["seed"] = config.seed;
  doc["n_folds"] = config.n_folds;
  doc["tokenizer"] = std::string(to_string(config.tokenizer));
  doc["vocabulary_scope"] =
      config.vocabulary_scope == VocabularyScope::WholeCorpus ? "whole_corpus" : "training_folds";
  doc["threshold_tuning_set"] =
      config.tuning_set == TuningSet::Evaluation ? "evaluation_fold" : "inner_split";
  doc["cv_mode"] = config.cv_mode == CvMode::Nested ? "nested" : "flat";
  doc["frozen_threshold"] =
      config.frozen_threshold ? nlohmann::json(*config.frozen_threshold) : nlohmann::json();
  nlohmann::json jt = nlohmann::json::array();
  for (const ResultsTable* t : tables) {
    nlohmann::json table;
    table["dataset"] = std::string(to_string(t->dataset));
    table["corpus_hash"] = t->corpus_hash;
    table["flaky"] = t->flaky;
    table["nonflaky"] = t->non_flaky;
    table["seed"] = t->seed;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : t->cells) {
      nlohmann::json row;
      row["method"] = std::string(to_string(c.method));
      row["model"] = std::string(to_string(c.family));
      row["profile"] = std::string(to_string(c.profile));
      row["pipeline"] = pipeline_to_json(c.pipeline);
      row["smote"] = c.pipeline.smote;
      row["pca_requested"] =
          c.pipeline.pca_components ? nlohmann::json(*c.pipeline.pca_components) : nlohmann::json();
      nlohmann::json thresholds = nlohmann::json::array();
      nlohmann::json pca_eff = nlohmann::json::array();
      nlohmann::json folds = nlohmann::json::array();
      for (const auto& f : c.cv.folds) {
        thresholds.push_back(f.threshold);
        pca_eff.push_back(f.pca_components ? nlohmann::json(*f.pca_components) : nlohmann::json());
        folds.push_back(fold_json(f));
      }
      row["thresholds"] = thresholds;
      row["pca_effective"] = pca_eff;
      row["aggregate"] = aggregate_json(c.cv.aggregate, c.paper);
      row["folds"] = folds;
      rows.push_back(row);
    }
    table["rows"] = rows;
    jt.push_back(table);
  }
  doc["tables"] = jt;
  return doc.dump(2) + "\n";
}

void write_results(const std::filesystem::path& dir,
                   const std::vector<const ResultsTable*>& tables, const ExperimentConfig& config,
                   std::string_view suite) {
  std::filesystem::create_directories(dir);
  for (const ResultsTable* t : tables) {
    const auto path = dir / ("table_" + std::string(to_string(t->dataset)) + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << render_csv(*t);
  }
  std::ofstream out(dir / "run.json", std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write run.json");
  out << render_run_json(tables, config, suite);
}

}  // namespace qflake
