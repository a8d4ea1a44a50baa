#include "commands.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qflake/bundle.hpp"
#include "qflake/corpus.hpp"
#include "qflake/error.hpp"
#include "qflake/experiment.hpp"
#include "qflake/profiles.hpp"
#include "qflake/synth.hpp"
#include "qflake/validation.hpp"

namespace qflake::cli {

namespace {

using Json = nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile:
    case ErrorCode::BadLabel:
    case ErrorCode::DuplicateId:
    case ErrorCode::EmptyFile:
    case ErrorCode::InvalidEncoding:
    case ErrorCode::BadManifest:
    case ErrorCode::EmptyClass:
    case ErrorCode::ConfigInvalid:
    case ErrorCode::SpecInvalid:
    case ErrorCode::BundleInvalid:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::ConfigInvalid, message);
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ParamValue parse_param_value(const std::string& text) {
  std::int64_t i = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), i);
  if (ec == std::errc() && p == text.data() + text.size()) return i;
  double d = 0.0;
  auto [q, ec2] = std::from_chars(text.data(), text.data() + text.size(), d);
  if (ec2 == std::errc() && q == text.data() + text.size()) return d;
  return text;
}

// Raw values straight from the command line; `given` tells which were set.
struct CliValues {
  std::uint64_t seed = 42;
  std::string config;
  bool paper_vectorization = false;
  bool paper_threshold = false;
  std::string out = "results";

  std::string root;
  std::string manifest;
  std::string manifest_out;
  std::string model;
  std::string profile;
  std::vector<std::string> params;
  std::int64_t pca = 0;
  bool smote = false;
  std::string threshold;
  double fixed_threshold = kDefaultThreshold;
  std::string tokenizer;
  std::string dataset;
  int folds = kDefaultFolds;
  bool nested = false;
  std::string suite;
  std::string methods;
  std::string models;
  std::string bundle;
  std::vector<std::string> files;
  std::string dir;
  std::size_t synth_flaky = 45;
  std::size_t synth_non_flaky = 243;
  std::uint64_t synth_seed = SynthOptions{}.seed;
};

// Effective settings: builtin defaults < config file < command line.
class Settings {
 public:
  explicit Settings(Json values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.contains(key); }
  const Json& raw() const { return values_; }

  std::string str(const std::string& key, const std::string& fallback = "") const {
    if (!has(key)) return fallback;
    if (!values_[key].is_string()) config_error(key + " must be a string");
    return values_[key].get<std::string>();
  }
  bool flag(const std::string& key, bool fallback = false) const {
    if (!has(key)) return fallback;
    if (!values_[key].is_boolean()) config_error(key + " must be a boolean");
    return values_[key].get<bool>();
  }
  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    if (!values_[key].is_number()) config_error(key + " must be a number");
    return values_[key].get<double>();
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    if (!has(key)) return fallback;
    if (!values_[key].is_number_integer()) config_error(key + " must be an integer");
    return values_[key].get<std::int64_t>();
  }
  std::uint64_t seed() const {
    if (!has("seed")) return 42;
    if (!values_["seed"].is_number_unsigned()) config_error("seed must be a non-negative integer");
    return values_["seed"].get<std::uint64_t>();
  }
  std::vector<std::string> list(const std::string& key) const {
    if (!has(key)) return {};
    const Json& v = values_[key];
    if (v.is_string()) return split_list(v.get<std::string>());
    if (!v.is_array()) config_error(key + " must be a list");
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) config_error(key + " entries must be strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

 private:
  Json values_;
};

Json read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open config " + path);
  try {
    Json j = Json::parse(in);
    if (!j.is_object()) config_error("config file must hold a JSON object");
    return j;
  } catch (const Json::parse_error& e) {
    config_error(std::string("config file is not valid JSON: ") + e.what());
  }
}

struct Bound {
  CLI::Option* option;
  std::function<void(Json&)> apply;
};

Settings merge_settings(const CliValues& v, const std::vector<Bound>& bound) {
  Json values = v.config.empty() ? Json::object() : read_config_file(v.config);
  for (const auto& b : bound) {
    if (b.option->count() > 0) b.apply(values);
  }
  if (values.contains("params") && !values["params"].is_object()) {
    config_error("params must be an object");
  }
  return Settings(std::move(values));
}

Family family_from(const Settings& s) {
  const std::string name = s.str("model");
  if (name.empty()) config_error("no model given (use --model)");
  auto family = parse_family(name);
  if (!family) config_error("unknown model family '" + name + "'");
  return *family;
}

TokenizerProfile tokenizer_from(const Settings& s) {
  const std::string name = s.str("tokenizer", "default");
  auto t = parse_tokenizer_profile(name);
  if (!t) config_error("unknown tokenizer profile '" + name + "'");
  return *t;
}

SubsetMode dataset_from(const Settings& s) {
  const std::string name = s.str("dataset", "imbalanced");
  if (name == "imbalanced") return SubsetMode::Imbalanced;
  if (name == "balanced") return SubsetMode::Balanced;
  config_error("dataset must be 'balanced' or 'imbalanced'");
}

Profile profile_from(const Settings& s, bool smote) {
  if (!s.has("profile")) return smote ? Profile::PaperSmote : Profile::PaperVanilla;
  const std::string name = s.str("profile");
  auto p = parse_profile(name);
  if (!p) config_error("unknown profile '" + name + "'");
  return *p;
}

PipelineConfig pipeline_from(const Settings& s, Family family) {
  const bool smote = s.flag("smote");
  const Profile profile = profile_from(s, smote);
  const ProfileSettings base = builtin_profile(family, profile);
  PipelineConfig pc;
  pc.model = base.model;
  pc.pca_components = base.pca_components;
  if (s.has("params")) {
    for (const auto& [name, value] : s.raw()["params"].items()) {
      if (value.is_number_integer()) pc.model.params[name] = value.get<std::int64_t>();
      else if (value.is_number()) pc.model.params[name] = value.get<double>();
      else if (value.is_string()) pc.model.params[name] = value.get<std::string>();
      else config_error("unsupported value for parameter " + name);
    }
  }
  if (s.has("pca_components")) {
    const std::int64_t k = s.integer("pca_components", 0);
    if (k < 0) config_error("pca_components must be >= 0");
    pc.pca_components =
        k == 0 ? std::nullopt : std::optional<std::size_t>(static_cast<std::size_t>(k));
  }
  pc.smote = smote;
  pc.tokenizer = tokenizer_from(s);
  const std::string mode = s.str("threshold", "fixed");
  if (mode == "tuned") pc.threshold_mode = ThresholdMode::Tuned;
  else if (mode != "fixed") config_error("threshold must be 'fixed' or 'tuned'");
  pc.fixed_threshold = s.number("fixed_threshold", kDefaultThreshold);
  if (s.flag("replicate_paper_vectorization")) pc.vocabulary_scope = VocabularyScope::WholeCorpus;
  if (s.flag("replicate_paper_threshold")) pc.tuning_set = TuningSet::Evaluation;
  validate(pc);
  return pc;
}

Corpus corpus_from(const Settings& s) {
  const std::string manifest = s.str("manifest");
  if (manifest.empty()) config_error("no manifest given (use --manifest)");
  return load_manifest(manifest);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

std::string summary(const Corpus& corpus) {
  return std::to_string(corpus.count(Label::Flaky)) + " flaky / " +
         std::to_string(corpus.count(Label::NonFlaky)) + " nonflaky";
}

// ---------------------------------------------------------------------------

int cmd_ingest(const Settings& s, std::ostream& out) {
  const std::string root = s.str("root");
  const std::string manifest = s.str("manifest");
  if (root.empty() == manifest.empty()) config_error("give exactly one of --root or --manifest");
  if (!manifest.empty()) {
    const Corpus corpus = load_manifest(manifest);
    out << summary(corpus) << "\n";
    return kExitOk;
  }
  if (!std::filesystem::is_directory(root)) {
    throw Error(ErrorCode::MissingFile, "corpus root " + root + " is not a directory");
  }
  const auto records = scan_directory(root);
  if (records.empty()) throw Error(ErrorCode::BadManifest, "no entries under " + root);
  const std::filesystem::path target =
      s.has("manifest_out") ? std::filesystem::path(s.str("manifest_out"))
                            : std::filesystem::path(root) / "manifest.jsonl";
  // Paths in the manifest are relative to the manifest's directory.
  const auto base = std::filesystem::absolute(target).parent_path();
  std::vector<ManifestRecord> rebased;
  for (auto r : records) {
    r.path = std::filesystem::relative(std::filesystem::absolute(root) / r.path, base)
                 .generic_string();
    rebased.push_back(std::move(r));
  }
  write_manifest(rebased, target);
  const Corpus corpus = load_manifest(target);
  out << summary(corpus) << "\n";
  out << "manifest: " << target.generic_string() << "\n";
  return kExitOk;
}

int cmd_train(const Settings& s, std::ostream& out) {
  const Family family = family_from(s);
  const PipelineConfig config = pipeline_from(s, family);
  const Corpus corpus = corpus_from(s);
  const std::string profile(to_string(profile_from(s, config.smote)));
  const ModelBundle bundle = [&] {
    try {
      return train_bundle(corpus, config, s.seed(), profile);
    } catch (const Error& e) {
      if (exit_code_for(e.code()) == kExitUsage) throw;
      throw Error(ErrorCode::Io, std::string("training failed: ") + e.what());
    }
  }();
  const std::filesystem::path path =
      s.has("bundle") ? std::filesystem::path(s.str("bundle"))
                      : std::filesystem::path(s.str("out", "results")) / "bundle.json";
  save_bundle(bundle, path);
  out << "trained " << to_string(family) << " on " << summary(corpus) << "\n";
  out << "threshold " << fixed(bundle.threshold, 1) << "\n";
  out << "bundle: " << path.generic_string() << "\n";
  return kExitOk;
}

int cmd_predict(const Settings& s, const std::vector<std::string>& files, std::ostream& out) {
  const std::string path = s.str("bundle");
  if (path.empty()) config_error("no bundle given (use --bundle)");
  if (files.empty()) config_error("no input files");
  const ModelBundle bundle = load_bundle(path);
  std::vector<std::string> texts;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in || std::filesystem::is_directory(f)) {
      throw Error(ErrorCode::MissingFile, "cannot read " + f);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    texts.push_back(ss.str());
  }
  const auto scores = score(bundle, texts);
  const Labels labels = predict(scores, bundle.threshold);
  for (std::size_t i = 0; i < files.size(); ++i) {
    Json line{{"path", files[i]},
              {"score", scores[i]},
              {"label", std::string(to_string(labels[i]))}};
    out << line.dump() << "\n";
  }
  return kExitOk;
}

int cmd_evaluate(const Settings& s, std::ostream& out) {
  const Family family = family_from(s);
  const PipelineConfig config = pipeline_from(s, family);
  const Corpus corpus = corpus_from(s);
  const SubsetMode dataset = dataset_from(s);
  const auto folds = s.integer("folds", kDefaultFolds);
  if (folds < 2) config_error("folds must be >= 2");
  const Corpus subset = select_subset(corpus, dataset, s.seed());
  const CvResult cv = s.str("cv", "flat") == "nested"
                          ? nested_cross_validate(subset, config, builtin_grid(family),
                                                  static_cast<int>(folds),
                                                  static_cast<int>(folds), s.seed())
                          : cross_validate(subset, config, static_cast<int>(folds), s.seed());

  out << "fold,threshold,accuracy,precision,recall,f1,mcc\n";
  Json doc;
  doc["model"] = std::string(to_string(family));
  doc["dataset"] = std::string(to_string(dataset));
  doc["seed"] = s.seed();
  doc["corpus_hash"] = corpus.content_hash();
  doc["settings"] = s.raw();
  doc["settings"].erase("out");  // keeps the file independent of where it lands
  Json jf = Json::array();
  for (const auto& f : cv.folds) {
    out << f.fold << ',' << fixed(f.threshold, 1);
    Json m;
    for (Metric metric : kAllMetrics) {
      out << ',' << fixed(f.report[metric]);
      m[std::string(to_string(metric))] = f.report[metric];
    }
    out << '\n';
    jf.push_back({{"fold", f.fold}, {"threshold", f.threshold}, {"metrics", m},
                  {"test_rows", f.test_rows}, {"synthetic_rows", f.synthetic_rows}});
  }
  out << "mean,";
  Json agg;
  for (Metric metric : kAllMetrics) {
    out << ',' << fixed(cv.aggregate[metric].mean);
    agg[std::string(to_string(metric))] = {{"mean", cv.aggregate[metric].mean},
                                           {"std", cv.aggregate[metric].std}};
  }
  out << "\nstd,";
  for (Metric metric : kAllMetrics) out << ',' << fixed(cv.aggregate[metric].std);
  out << '\n';
  doc["folds"] = jf;
  doc["aggregate"] = agg;
  const auto path = std::filesystem::path(s.str("out", "results")) / "evaluation.json";
  write_text(path, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_experiment(const Settings& s, std::ostream& out) {
  const Corpus corpus = corpus_from(s);
  ExperimentConfig base;
  base.seed = s.seed();
  base.n_folds = static_cast<int>(s.integer("folds", kDefaultFolds));
  base.tokenizer = tokenizer_from(s);
  if (s.flag("replicate_paper_vectorization")) base.vocabulary_scope = VocabularyScope::WholeCorpus;
  if (s.flag("replicate_paper_threshold")) base.tuning_set = TuningSet::Evaluation;
  const std::string cv = s.str("cv", "flat");
  if (cv == "nested") base.cv_mode = CvMode::Nested;
  else if (cv != "flat") config_error("cv must be 'flat' or 'nested'");

  const std::string suite = s.str("suite", "paper");
  if (suite != "paper") config_error("unknown suite '" + suite + "'");
  const auto method_names = s.list("methods");
  const auto model_names = s.list("models");
  const bool filtered = !method_names.empty() || !model_names.empty() || s.has("dataset");

  std::vector<Family> families;
  for (const auto& name : model_names) {
    auto f = parse_family(name);
    if (!f) config_error("unknown model family '" + name + "'");
    families.push_back(*f);
  }
  if (families.empty()) families.assign(std::begin(kAllFamilies), std::end(kAllFamilies));
  base.families = families;

  std::vector<ResultsTable> tables;
  try {
    if (!filtered) {
      PaperSuite result = run_paper_suite(corpus, base);
      tables.push_back(std::move(result.balanced));
      tables.push_back(std::move(result.imbalanced));
    } else {
      base.dataset = dataset_from(s);
      std::vector<Method> methods;
      for (const auto& name : method_names) {
        auto m = parse_method(name);
        if (!m) config_error("unknown method '" + name + "'");
        methods.push_back(*m);
      }
      if (methods.empty()) {
        if (base.dataset == SubsetMode::Balanced) methods = {Method::Vanilla};
        else methods.assign(std::begin(kAllMethods), std::end(kAllMethods));
      }
      std::optional<ResultsTable> table;
      for (Method m : methods) {
        ExperimentConfig cfg = base;
        cfg.method = m;
        validate(cfg);
        ResultsTable t = run_configuration(corpus, cfg);
        if (table) merge_into(*table, std::move(t));
        else table = std::move(t);
      }
      tables.push_back(std::move(*table));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    throw Error(ErrorCode::Io, std::string("pipeline failure: ") + e.what(), e.details());
  }

  const std::string label = filtered ? "custom" : "paper";
  const std::string run_id =
      label + "-seed" + std::to_string(base.seed) + "-" + corpus.content_hash().substr(0, 8);
  const auto dir = std::filesystem::path(s.str("out", "results")) / run_id;
  std::vector<const ResultsTable*> ptrs;
  for (const auto& t : tables) ptrs.push_back(&t);
  write_results(dir, ptrs, base, label);
  for (const auto& t : tables) {
    out << "# " << to_string(t.dataset) << " (" << t.flaky << " flaky / " << t.non_flaky
        << " nonflaky)\n";
    out << render_csv(t);
  }
  out << "results: " << dir.generic_string() << "\n";
  return kExitOk;
}

int cmd_synth(const CliValues& v, std::ostream& out) {
  if (v.dir.empty()) config_error("no output directory given (use --dir)");
  SynthOptions options{v.synth_flaky, v.synth_non_flaky, v.synth_seed};
  if (options.flaky == 0 || options.non_flaky == 0) config_error("class counts must be positive");
  const auto manifest = write_synthetic_corpus(v.dir, options);
  out << options.flaky << " flaky / " << options.non_flaky << " nonflaky\n";
  out << "manifest: " << manifest.generic_string() << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flaky test classifier for quantum software test suites", "qflake"};
  app.require_subcommand(1);
  app.fallthrough();
  CliValues v;
  std::vector<Bound> bound;
  auto bind = [&](CLI::Option* opt, std::function<void(Json&)> apply) {
    bound.push_back({opt, std::move(apply)});
    return opt;
  };

  bind(app.add_option("--seed", v.seed, "Random seed (default 42)"),
       [&](Json& j) { j["seed"] = v.seed; });
  app.add_option("--config", v.config, "JSON config file; command-line flags take precedence");
  bind(app.add_flag("--replicate-paper-vectorization", v.paper_vectorization,
                    "Fit the vocabulary on the whole corpus before splitting"),
       [&](Json& j) { j["replicate_paper_vectorization"] = v.paper_vectorization; });
  bind(app.add_flag("--replicate-paper-threshold", v.paper_threshold,
                    "Tune thresholds on the evaluation fold"),
       [&](Json& j) { j["replicate_paper_threshold"] = v.paper_threshold; });
  bind(app.add_option("--out", v.out, "Output directory (default results)"),
       [&](Json& j) { j["out"] = v.out; });

  auto manifest_opt = [&](CLI::App* sub) {
    bind(sub->add_option("--manifest", v.manifest, "JSON Lines corpus manifest"),
         [&](Json& j) { j["manifest"] = v.manifest; });
  };
  auto model_opts = [&](CLI::App* sub) {
    bind(sub->add_option("--model", v.model, "xgb, dt, rf, knn or svm"),
         [&](Json& j) { j["model"] = v.model; });
    bind(sub->add_option("--profile", v.profile, "paper_vanilla or paper_smote"),
         [&](Json& j) { j["profile"] = v.profile; });
    bind(sub->add_option("--param", v.params, "Hyperparameter override name=value (repeatable)"),
         [&](Json& j) {
           for (const auto& p : v.params) {
             const auto eq = p.find('=');
             if (eq == std::string::npos || eq == 0) config_error("--param expects name=value");
             std::visit([&](const auto& x) { j["params"][p.substr(0, eq)] = x; },
                        parse_param_value(p.substr(eq + 1)));
           }
         });
    bind(sub->add_option("--pca", v.pca, "PCA components (0 disables)"),
         [&](Json& j) { j["pca_components"] = v.pca; });
    bind(sub->add_flag("--smote,!--no-smote", v.smote, "Oversample the minority class"),
         [&](Json& j) { j["smote"] = v.smote; });
    bind(sub->add_option("--threshold", v.threshold, "fixed or tuned"),
         [&](Json& j) { j["threshold"] = v.threshold; });
    bind(sub->add_option("--fixed-threshold", v.fixed_threshold, "Cutoff in fixed mode"),
         [&](Json& j) { j["fixed_threshold"] = v.fixed_threshold; });
    bind(sub->add_option("--tokenizer", v.tokenizer, "default or strict_code"),
         [&](Json& j) { j["tokenizer"] = v.tokenizer; });
  };

  auto* ingest = app.add_subcommand("ingest", "Validate a corpus and write its manifest");
  bind(ingest->add_option("--root", v.root, "Directory with flaky/ and nonflaky/ subtrees"),
       [&](Json& j) { j["root"] = v.root; });
  manifest_opt(ingest);
  bind(ingest->add_option("--manifest-out", v.manifest_out,
                          "Where to write the manifest (default <root>/manifest.jsonl)"),
       [&](Json& j) { j["manifest_out"] = v.manifest_out; });

  auto* train = app.add_subcommand("train", "Train on the full corpus and save a model bundle");
  manifest_opt(train);
  model_opts(train);
  bind(train->add_option("--bundle", v.bundle, "Bundle path (default <out>/bundle.json)"),
       [&](Json& j) { j["bundle"] = v.bundle; });

  auto* pred = app.add_subcommand("predict", "Score files with a saved bundle");
  bind(pred->add_option("--bundle", v.bundle, "Model bundle")->required(),
       [&](Json& j) { j["bundle"] = v.bundle; });
  pred->add_option("files", v.files, "Python test files")->required();

  auto* eval = app.add_subcommand("evaluate", "Stratified cross-validation of one pipeline");
  manifest_opt(eval);
  model_opts(eval);
  auto dataset_opts = [&](CLI::App* sub) {
    bind(sub->add_option("--dataset", v.dataset, "balanced or imbalanced"),
         [&](Json& j) { j["dataset"] = v.dataset; });
    bind(sub->add_option("--folds", v.folds, "Number of folds (default 5)"),
         [&](Json& j) { j["folds"] = v.folds; });
    bind(sub->add_flag("--nested", v.nested, "Grid search inside each training split"),
         [&](Json& j) { j["cv"] = v.nested ? "nested" : "flat"; });
  };
  dataset_opts(eval);

  auto* exp = app.add_subcommand("experiment", "Run the comparison tables");
  manifest_opt(exp);
  dataset_opts(exp);
  bind(exp->add_option("--suite", v.suite, "Suite name (paper)"),
       [&](Json& j) { j["suite"] = v.suite; });
  bind(exp->add_option("--methods", v.methods, "Comma list of vanilla, smote, threshold, hybrid"),
       [&](Json& j) { j["methods"] = v.methods; });
  bind(exp->add_option("--models", v.models, "Comma list of xgb, dt, rf, knn, svm"),
       [&](Json& j) { j["models"] = v.models; });
  bind(exp->add_option("--tokenizer", v.tokenizer, "default or strict_code"),
       [&](Json& j) { j["tokenizer"] = v.tokenizer; });

  auto* synth = app.add_subcommand("synth", "Write the bundled synthetic corpus");
  synth->add_option("--dir", v.dir, "Target directory")->required();
  synth->add_option("--flaky", v.synth_flaky, "Flaky file count (default 45)");
  synth->add_option("--nonflaky", v.synth_non_flaky, "Non-flaky file count (default 243)");
  synth->add_option("--corpus-seed", v.synth_seed, "Generator seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Settings s = merge_settings(v, bound);
    if (*ingest) return cmd_ingest(s, out);
    if (*train) return cmd_train(s, out);
    if (*pred) return cmd_predict(s, v.files, out);
    if (*eval) return cmd_evaluate(s, out);
    if (*exp) return cmd_experiment(s, out);
    if (*synth) return cmd_synth(v, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    for (const auto& d : e.details()) err << "  " << d << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace qflake::cli
