#include "serialize.hpp"

#include "qflake/error.hpp"

namespace qflake {

namespace {

Json matrix_to_json(const Matrix& m) {
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from_json(const Json& j) {
  return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                j.at("data").get<std::vector<double>>());
}

Json tree_to_json(const Tree& tree) {
  // Columnar layout keeps large forests compact.
  Json feature = Json::array(), threshold = Json::array(), left = Json::array(),
       right = Json::array(), value = Json::array(), depth = Json::array(),
       samples = Json::array();
  for (const auto& n : tree.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
    depth.push_back(n.depth);
    samples.push_back(n.n_samples);
  }
  return Json{{"feature", feature}, {"threshold", threshold}, {"left", left},
              {"right", right},     {"value", value},         {"depth", depth},
              {"n_samples", samples}};
}

Tree tree_from_json(const Json& j) {
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto value = j.at("value").get<std::vector<double>>();
  const auto depth = j.at("depth").get<std::vector<int>>();
  const auto samples = j.at("n_samples").get<std::vector<std::size_t>>();
  const std::size_t n = feature.size();
  if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n ||
      depth.size() != n || samples.size() != n || n == 0) {
    throw Error(ErrorCode::BundleInvalid, "malformed tree");
  }
  Tree tree;
  tree.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = tree.nodes[i];
    node = {feature[i], threshold[i], left[i], right[i], value[i], depth[i], samples[i]};
    if (!node.is_leaf()) {
      const auto in_range = [n](int c) { return c > 0 && static_cast<std::size_t>(c) < n; };
      if (!in_range(node.left) || !in_range(node.right)) {
        throw Error(ErrorCode::BundleInvalid, "tree child index out of range");
      }
    }
  }
  return tree;
}

Json trees_to_json(const std::vector<Tree>& trees) {
  Json out = Json::array();
  for (const auto& t : trees) out.push_back(tree_to_json(t));
  return out;
}

std::vector<Tree> trees_from_json(const Json& j) {
  std::vector<Tree> out;
  for (const auto& t : j) out.push_back(tree_from_json(t));
  return out;
}

}  // namespace

Json params_to_json(const ParamMap& params) {
  Json j = Json::object();
  for (const auto& [name, value] : params) {
    std::visit([&](const auto& v) { j[name] = v; }, value);
  }
  return j;
}

ParamMap params_from_json(const Json& j) {
  ParamMap out;
  for (const auto& [name, v] : j.items()) {
    if (v.is_number_integer()) out[name] = v.get<std::int64_t>();
    else if (v.is_number()) out[name] = v.get<double>();
    else if (v.is_string()) out[name] = v.get<std::string>();
    else throw Error(ErrorCode::ConfigInvalid, "unsupported value for parameter " + name);
  }
  return out;
}

Json pipeline_to_json(const PipelineConfig& c) {
  Json j;
  j["family"] = std::string(to_string(c.model.family));
  j["params"] = params_to_json(c.model.params);
  j["tokenizer"] = std::string(to_string(c.tokenizer));
  j["pca_components"] = c.pca_components ? Json(*c.pca_components) : Json();
  j["smote"] = c.smote;
  j["smote_k"] = c.smote_neighbors;
  j["threshold_mode"] = c.threshold_mode == ThresholdMode::Tuned ? "tuned" : "fixed";
  j["fixed_threshold"] = c.fixed_threshold;
  j["tuning_set"] = c.tuning_set == TuningSet::Evaluation ? "evaluation_fold" : "inner_split";
  j["tuning_fraction"] = c.tuning_fraction;
  j["threshold_step"] = c.threshold_step;
  j["vocabulary_scope"] =
      c.vocabulary_scope == VocabularyScope::WholeCorpus ? "whole_corpus" : "training_folds";
  return j;
}

Json pca_to_json(const PcaModel& pca) {
  return Json{{"mean", pca.mean},
              {"components", matrix_to_json(pca.components)},
              {"explained_variance", pca.explained_variance}};
}

PcaModel pca_from_json(const Json& j) {
  PcaModel pca;
  pca.mean = j.at("mean").get<std::vector<double>>();
  pca.components = matrix_from_json(j.at("components"));
  pca.explained_variance = j.at("explained_variance").get<std::vector<double>>();
  if (pca.components.cols() != pca.mean.size() ||
      pca.explained_variance.size() != pca.components.rows()) {
    throw Error(ErrorCode::BundleInvalid, "PCA shapes disagree");
  }
  return pca;
}

Json model_to_json(const TrainedModel& model) {
  Json j;
  j["family"] = std::string(to_string(model.family()));
  j["params"] = params_to_json(model.spec().params);
  j["seed"] = model.spec().seed;
  j["n_features"] = model.n_features();
  j["degenerate_labels"] = model.degenerate_labels();
  Json learned;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DecisionTreeModel>) {
          learned["tree"] = tree_to_json(m.tree);
        } else if constexpr (std::is_same_v<T, RandomForestModel>) {
          learned["trees"] = trees_to_json(m.trees);
        } else if constexpr (std::is_same_v<T, BoostedModel>) {
          learned["base_margin"] = m.base_margin;
          learned["learning_rate"] = m.learning_rate;
          learned["trees"] = trees_to_json(m.trees);
          learned["constant_score"] = m.constant_score ? Json(*m.constant_score) : Json();
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          learned["x"] = matrix_to_json(m.x);
          std::vector<int> y;
          for (Label l : m.y) y.push_back(static_cast<int>(l));
          learned["y"] = y;
          learned["n_neighbors"] = m.n_neighbors;
          learned["distance_weighting"] = m.distance_weighting;
        } else {
          learned["weights"] = m.weights;
          learned["bias"] = m.bias;
          learned["support_vectors"] = m.support_vectors;
        }
      },
      model.params());
  j["learned"] = learned;
  return j;
}

TrainedModel model_from_json(const Json& j) {
  const auto family = parse_family(j.at("family").get<std::string>());
  if (!family) throw Error(ErrorCode::BundleInvalid, "unknown model family");
  ClassifierSpec spec{*family, params_from_json(j.at("params")), j.at("seed").get<std::uint64_t>()};
  try {
    validate_spec(spec);
  } catch (const Error& e) {
    throw Error(ErrorCode::BundleInvalid, std::string("bad hyperparameters: ") + e.what());
  }
  const auto n_features = j.at("n_features").get<std::size_t>();
  const bool degenerate = j.at("degenerate_labels").get<bool>();
  const Json& l = j.at("learned");
  ModelParams params;
  switch (*family) {
    case Family::DT: params = DecisionTreeModel{tree_from_json(l.at("tree"))}; break;
    case Family::RF: params = RandomForestModel{trees_from_json(l.at("trees"))}; break;
    case Family::XGB: {
      BoostedModel m;
      m.base_margin = l.at("base_margin").get<double>();
      m.learning_rate = l.at("learning_rate").get<double>();
      m.trees = trees_from_json(l.at("trees"));
      if (!l.at("constant_score").is_null()) m.constant_score = l.at("constant_score").get<double>();
      params = std::move(m);
      break;
    }
    case Family::KNN: {
      KnnModel m;
      m.x = matrix_from_json(l.at("x"));
      for (int v : l.at("y").get<std::vector<int>>()) {
        if (v != 0 && v != 1) throw Error(ErrorCode::BundleInvalid, "bad KNN label");
        m.y.push_back(static_cast<Label>(v));
      }
      if (m.y.size() != m.x.rows()) throw Error(ErrorCode::BundleInvalid, "KNN shapes disagree");
      m.n_neighbors = l.at("n_neighbors").get<int>();
      m.distance_weighting = l.at("distance_weighting").get<bool>();
      params = std::move(m);
      break;
    }
    case Family::SVM: {
      LinearSvmModel m;
      m.weights = l.at("weights").get<std::vector<double>>();
      m.bias = l.at("bias").get<double>();
      m.support_vectors = l.at("support_vectors").get<std::size_t>();
      if (m.weights.size() != n_features) {
        throw Error(ErrorCode::BundleInvalid, "SVM weight length disagrees with n_features");
      }
      params = std::move(m);
      break;
    }
  }
  return TrainedModel(std::move(spec), n_features, std::move(params), degenerate);
}

}  // namespace qflake
