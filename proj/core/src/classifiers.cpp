#include "qflake/classifiers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "qflake/error.hpp"
#include "qflake/random.hpp"
#include "tree_builder.hpp"

namespace qflake {

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::XGB: return "XGB";
    case Family::DT: return "DT";
    case Family::RF: return "RF";
    case Family::KNN: return "KNN";
    case Family::SVM: return "SVM";
  }
  return "DT";
}

std::optional<Family> parse_family(std::string_view text) noexcept {
  std::string lower(text);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "xgb") return Family::XGB;
  if (lower == "dt") return Family::DT;
  if (lower == "rf") return Family::RF;
  if (lower == "knn") return Family::KNN;
  if (lower == "svm") return Family::SVM;
  return std::nullopt;
}

std::string_view to_string(Criterion c) noexcept {
  return c == Criterion::Entropy ? "entropy" : "gini";
}

std::string format_param(const ParamValue& value) {
  std::ostringstream os;
  std::visit([&](const auto& v) { os << v; }, value);
  return os.str();
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// ---------------------------------------------------------------------------
// Hyperparameter resolution

namespace {

class ParamReader {
 public:
  ParamReader(const ClassifierSpec& spec, std::set<std::string> allowed)
      : spec_(spec), allowed_(std::move(allowed)) {
    for (const auto& [name, value] : spec.params) {
      if (!allowed_.count(name)) {
        throw Error(ErrorCode::SpecInvalid, "unknown hyperparameter '" + name + "' for " +
                                                std::string(to_string(spec.family)));
      }
    }
  }

  std::int64_t integer(const std::string& name, std::int64_t fallback, std::int64_t lo,
                       std::int64_t hi = std::numeric_limits<std::int64_t>::max()) const {
    auto it = spec_.params.find(name);
    if (it == spec_.params.end()) return fallback;
    std::int64_t v;
    if (auto p = std::get_if<std::int64_t>(&it->second)) {
      v = *p;
    } else if (auto d = std::get_if<double>(&it->second); d && std::floor(*d) == *d) {
      v = static_cast<std::int64_t>(*d);
    } else {
      throw Error(ErrorCode::SpecInvalid, name + " must be an integer");
    }
    if (v < lo || v > hi) {
      throw Error(ErrorCode::SpecInvalid, name + " out of range: " + std::to_string(v));
    }
    return v;
  }

  double real(const std::string& name, double fallback, double lo, bool lo_open = false) const {
    auto it = spec_.params.find(name);
    if (it == spec_.params.end()) return fallback;
    double v;
    if (auto p = std::get_if<double>(&it->second)) {
      v = *p;
    } else if (auto i = std::get_if<std::int64_t>(&it->second)) {
      v = static_cast<double>(*i);
    } else {
      throw Error(ErrorCode::SpecInvalid, name + " must be a number");
    }
    if (!std::isfinite(v) || v < lo || (lo_open && v == lo)) {
      throw Error(ErrorCode::SpecInvalid, name + " out of range: " + format_param(it->second));
    }
    return v;
  }

  std::string text(const std::string& name, std::string fallback,
                   std::initializer_list<std::string_view> choices) const {
    auto it = spec_.params.find(name);
    if (it == spec_.params.end()) return fallback;
    auto p = std::get_if<std::string>(&it->second);
    if (!p || std::find(choices.begin(), choices.end(), *p) == choices.end()) {
      throw Error(ErrorCode::SpecInvalid, "invalid value for " + name);
    }
    return *p;
  }

 private:
  const ClassifierSpec& spec_;
  std::set<std::string> allowed_;
};

void expect_family(const ClassifierSpec& spec, std::initializer_list<Family> families) {
  if (std::find(families.begin(), families.end(), spec.family) == families.end()) {
    throw Error(ErrorCode::SpecInvalid,
                "spec family " + std::string(to_string(spec.family)) + " not valid here");
  }
}

TreeParams read_tree(const ParamReader& r) {
  TreeParams p;
  p.criterion = r.text("criterion", "gini", {"gini", "entropy"}) == "entropy" ? Criterion::Entropy
                                                                             : Criterion::Gini;
  p.max_depth = static_cast<int>(r.integer("max_depth", -1, -1, 1000));
  p.min_samples_leaf = static_cast<int>(r.integer("min_samples_leaf", 1, 1, 1'000'000));
  p.min_samples_split = static_cast<int>(r.integer("min_samples_split", 2, 2, 1'000'000));
  return p;
}

}  // namespace

TreeParams resolve_tree_params(const ClassifierSpec& spec) {
  expect_family(spec, {Family::DT});
  ParamReader r(spec, {"criterion", "max_depth", "min_samples_leaf", "min_samples_split"});
  return read_tree(r);
}

ForestParams resolve_forest_params(const ClassifierSpec& spec) {
  expect_family(spec, {Family::RF});
  ParamReader r(spec,
                {"criterion", "max_depth", "min_samples_leaf", "min_samples_split", "n_estimators"});
  ForestParams p;
  p.tree = read_tree(r);
  p.n_estimators = static_cast<int>(r.integer("n_estimators", 100, 1, 100'000));
  return p;
}

BoostParams resolve_boost_params(const ClassifierSpec& spec) {
  expect_family(spec, {Family::XGB});
  ParamReader r(spec, {"learning_rate", "max_depth", "n_estimators", "reg_lambda", "gamma",
                       "min_child_weight"});
  BoostParams p;
  p.learning_rate = r.real("learning_rate", 0.3, 0.0);
  p.max_depth = static_cast<int>(r.integer("max_depth", 6, 0, 1000));
  p.n_estimators = static_cast<int>(r.integer("n_estimators", 100, 0, 100'000));
  p.reg_lambda = r.real("reg_lambda", 1.0, 0.0);
  p.gamma = r.real("gamma", 0.0, 0.0);
  p.min_child_weight = r.real("min_child_weight", 1.0, 0.0);
  return p;
}

KnnParams resolve_knn_params(const ClassifierSpec& spec) {
  expect_family(spec, {Family::KNN});
  ParamReader r(spec, {"n_neighbors", "weights", "metric"});
  r.text("metric", "euclidean", {"euclidean"});
  KnnParams p;
  p.n_neighbors = static_cast<int>(r.integer("n_neighbors", 5, 1, 1'000'000));
  p.distance_weighting = r.text("weights", "distance", {"distance", "uniform"}) == "distance";
  return p;
}

SvmParams resolve_svm_params(const ClassifierSpec& spec) {
  expect_family(spec, {Family::SVM});
  ParamReader r(spec, {"C", "tol", "max_iter"});
  SvmParams p;
  p.c = r.real("C", 1.0, 0.0, /*lo_open=*/true);
  p.tolerance = r.real("tol", 1e-3, 0.0, /*lo_open=*/true);
  p.max_iterations = r.integer("max_iter", 10'000'000, 1);
  return p;
}

void validate_spec(const ClassifierSpec& spec) {
  switch (spec.family) {
    case Family::DT: resolve_tree_params(spec); break;
    case Family::RF: resolve_forest_params(spec); break;
    case Family::XGB: resolve_boost_params(spec); break;
    case Family::KNN: resolve_knn_params(spec); break;
    case Family::SVM: resolve_svm_params(spec); break;
  }
}

// ---------------------------------------------------------------------------
// Trees

std::size_t Tree::leaf_index(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                          : n.right);
  }
  return i;
}

int Tree::depth() const {
  int d = 0;
  for (const auto& n : nodes) d = std::max(d, n.depth);
  return d;
}

std::size_t Tree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

double impurity_from_counts(double non_flaky, double flaky, Criterion criterion) {
  const double total = non_flaky + flaky;
  if (total <= 0.0) throw Error(ErrorCode::EmptySet, "impurity of an empty set");
  const double p[2] = {non_flaky / total, flaky / total};
  if (criterion == Criterion::Gini) return 1.0 - p[0] * p[0] - p[1] * p[1];
  double h = 0.0;
  for (double q : p) {
    if (q > 0.0) h -= q * std::log2(q);
  }
  return h;
}

double impurity(std::span<const Label> labels, Criterion criterion) {
  if (labels.empty()) throw Error(ErrorCode::EmptySet, "impurity of an empty set");
  double counts[2] = {0.0, 0.0};
  for (Label l : labels) counts[is_flaky(l) ? 1 : 0] += 1.0;
  return impurity_from_counts(counts[0], counts[1], criterion);
}

namespace detail {

SortedColumns::SortedColumns(const Matrix& x) : columns_(x.cols()) {
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto row = x.row(r);
    for (std::size_t f = 0; f < row.size(); ++f) {
      if (row[f] != 0.0) columns_[f].push_back({row[f], static_cast<std::uint32_t>(r)});
    }
  }
  for (auto& col : columns_) {
    std::sort(col.begin(), col.end(), [](const ColumnEntry& a, const ColumnEntry& b) {
      return a.value < b.value || (a.value == b.value && a.row < b.row);
    });
  }
}

}  // namespace detail

namespace {

void check_training_input(const Matrix& x, const Labels& y) {
  if (x.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "X rows differ from labels");
  if (y.empty()) throw Error(ErrorCode::EmptySet, "no training rows");
  x.check_finite();
}

struct ClassStats {
  double w[2] = {0.0, 0.0};
  std::size_t n = 0;
};

class ClassificationPolicy {
 public:
  using Stats = ClassStats;

  ClassificationPolicy(const Labels& y, const std::vector<double>& weights, const TreeParams& p)
      : y_(y), weights_(weights), params_(p) {}

  Stats row(std::uint32_t r) const {
    Stats s;
    s.w[is_flaky(y_[r]) ? 1 : 0] = weights_[r];
    s.n = 1;
    return s;
  }
  Stats add(Stats a, const Stats& b) const {
    a.w[0] += b.w[0];
    a.w[1] += b.w[1];
    a.n += b.n;
    return a;
  }
  Stats sub(Stats a, const Stats& b) const {
    a.w[0] -= b.w[0];
    a.w[1] -= b.w[1];
    a.n -= b.n;
    return a;
  }
  double leaf_value(const Stats& s) const {
    const double t = s.w[0] + s.w[1];
    return t > 0.0 ? s.w[1] / t : 0.0;
  }
  bool terminal(const Stats& s, int depth) const {
    if (s.w[0] == 0.0 || s.w[1] == 0.0) return true;
    if (params_.max_depth >= 0 && depth >= params_.max_depth) return true;
    if (s.n < static_cast<std::size_t>(params_.min_samples_split)) return true;
    return s.n < 2 * static_cast<std::size_t>(params_.min_samples_leaf);
  }
  std::optional<double> gain(const Stats& parent, const Stats& left, const Stats& right) const {
    const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
    if (left.n < min_leaf || right.n < min_leaf) return std::nullopt;
    const double wp = parent.w[0] + parent.w[1];
    const double wl = left.w[0] + left.w[1];
    const double wr = right.w[0] + right.w[1];
    return impurity_from_counts(parent.w[0], parent.w[1], params_.criterion) -
           (wl / wp) * impurity_from_counts(left.w[0], left.w[1], params_.criterion) -
           (wr / wp) * impurity_from_counts(right.w[0], right.w[1], params_.criterion);
  }

 private:
  const Labels& y_;
  const std::vector<double>& weights_;
  TreeParams params_;
};

std::vector<std::uint32_t> all_rows(std::size_t n) {
  std::vector<std::uint32_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = static_cast<std::uint32_t>(i);
  return rows;
}

}  // namespace

TrainedModel train_decision_tree(const Matrix& x, const Labels& y, const ClassifierSpec& spec) {
  const TreeParams params = resolve_tree_params(spec);
  check_training_input(x, y);
  const std::vector<double> weights(y.size(), 1.0);
  const detail::SortedColumns columns(x);
  const ClassificationPolicy policy(y, weights, params);
  detail::TreeBuilder<ClassificationPolicy> builder(x, columns, policy);
  Tree tree = builder.build(all_rows(y.size()), {});
  return TrainedModel(spec, x.cols(), DecisionTreeModel{std::move(tree)});
}

TrainedModel train_random_forest(const Matrix& x, const Labels& y, const ClassifierSpec& spec) {
  const ForestParams params = resolve_forest_params(spec);
  check_training_input(x, y);
  const detail::SortedColumns columns(x);
  const std::size_t n = y.size();
  const auto max_features = static_cast<std::size_t>(
      std::max(1.0, std::ceil(std::sqrt(static_cast<double>(x.cols())))));

  RandomForestModel forest;
  forest.trees.reserve(static_cast<std::size_t>(params.n_estimators));
  std::vector<double> weights(n);
  for (int t = 0; t < params.n_estimators; ++t) {
    Rng rng(derive_seed(spec.seed, "rf-tree", static_cast<std::uint64_t>(t)));
    std::fill(weights.begin(), weights.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) weights[rng.below(n)] += 1.0;
    std::vector<std::uint32_t> rows;
    for (std::size_t i = 0; i < n; ++i) {
      if (weights[i] > 0.0) rows.push_back(static_cast<std::uint32_t>(i));
    }
    const ClassificationPolicy policy(y, weights, params.tree);
    detail::TreeBuilder<ClassificationPolicy> builder(x, columns, policy);
    forest.trees.push_back(builder.build(std::move(rows), {max_features, &rng}));
  }
  return TrainedModel(spec, x.cols(), std::move(forest));
}

// ---------------------------------------------------------------------------
// Gradient boosting

namespace {

struct GradStats {
  double g = 0.0;
  double h = 0.0;
  std::size_t n = 0;
};

class NewtonPolicy {
 public:
  using Stats = GradStats;

  NewtonPolicy(const std::vector<double>& g, const std::vector<double>& h, const BoostParams& p)
      : g_(g), h_(h), params_(p) {}

  Stats row(std::uint32_t r) const { return {g_[r], h_[r], 1}; }
  Stats add(Stats a, const Stats& b) const {
    a.g += b.g;
    a.h += b.h;
    a.n += b.n;
    return a;
  }
  Stats sub(Stats a, const Stats& b) const {
    a.g -= b.g;
    a.h -= b.h;
    a.n -= b.n;
    return a;
  }
  double leaf_value(const Stats& s) const { return -s.g / (s.h + params_.reg_lambda); }
  bool terminal(const Stats& s, int depth) const {
    return depth >= params_.max_depth || s.n < 2;
  }
  std::optional<double> gain(const Stats& parent, const Stats& left, const Stats& right) const {
    if (left.h < params_.min_child_weight || right.h < params_.min_child_weight) {
      return std::nullopt;
    }
    const double lambda = params_.reg_lambda;
    const double g = 0.5 * (left.g * left.g / (left.h + lambda) +
                            right.g * right.g / (right.h + lambda) -
                            parent.g * parent.g / (parent.h + lambda)) -
                     params_.gamma;
    if (!(g > kMinGain)) return std::nullopt;
    return g;
  }

  static constexpr double kMinGain = 1e-6;

 private:
  const std::vector<double>& g_;
  const std::vector<double>& h_;
  BoostParams params_;
};

}  // namespace

TrainedModel train_gbt(const Matrix& x, const Labels& y, const ClassifierSpec& spec) {
  const BoostParams params = resolve_boost_params(spec);
  check_training_input(x, y);
  const std::size_t n = y.size();
  const auto n_flaky = static_cast<std::size_t>(std::count(y.begin(), y.end(), Label::Flaky));

  BoostedModel model;
  model.learning_rate = params.learning_rate;
  if (n_flaky == 0 || n_flaky == n) {
    model.constant_score = n_flaky == 0 ? 0.0 : 1.0;
    return TrainedModel(spec, x.cols(), std::move(model), /*degenerate_labels=*/true);
  }
  const double p = static_cast<double>(n_flaky) / static_cast<double>(n);
  model.base_margin = std::log(p / (1.0 - p));
  if (params.n_estimators == 0 || params.learning_rate == 0.0) {
    return TrainedModel(spec, x.cols(), std::move(model));
  }

  const detail::SortedColumns columns(x);
  std::vector<double> margin(n, model.base_margin);
  std::vector<double> g(n);
  std::vector<double> h(n);
  const NewtonPolicy policy(g, h, params);
  detail::TreeBuilder<NewtonPolicy> builder(x, columns, policy);
  const auto rows = all_rows(n);
  model.trees.reserve(static_cast<std::size_t>(params.n_estimators));
  for (int round = 0; round < params.n_estimators; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double s = sigmoid(margin[i]);
      g[i] = s - (is_flaky(y[i]) ? 1.0 : 0.0);
      h[i] = s * (1.0 - s);
    }
    Tree tree = builder.build(rows, {});
    for (std::size_t i = 0; i < n; ++i) margin[i] += params.learning_rate * tree.predict(x.row(i));
    model.trees.push_back(std::move(tree));
  }
  return TrainedModel(spec, x.cols(), std::move(model));
}

// ---------------------------------------------------------------------------
// k-nearest neighbours

TrainedModel train_knn(const Matrix& x, const Labels& y, const ClassifierSpec& spec) {
  const KnnParams params = resolve_knn_params(spec);
  check_training_input(x, y);
  if (static_cast<std::size_t>(params.n_neighbors) > y.size()) {
    throw Error(ErrorCode::KTooLarge, "n_neighbors " + std::to_string(params.n_neighbors) +
                                          " exceeds training rows " + std::to_string(y.size()));
  }
  return TrainedModel(spec, x.cols(), KnnModel{x, y, params.n_neighbors, params.distance_weighting});
}

namespace {

double knn_score(const KnnModel& m, std::span<const double> q,
                 std::vector<std::pair<double, std::size_t>>& scratch) {
  scratch.clear();
  for (std::size_t i = 0; i < m.x.rows(); ++i) {
    scratch.emplace_back(squared_distance(q, m.x.row(i)), i);
  }
  const auto k = static_cast<std::size_t>(m.n_neighbors);
  std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k),
                    scratch.end());
  std::size_t zero_total = 0;
  std::size_t zero_flaky = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (scratch[i].first == 0.0) {
      ++zero_total;
      if (is_flaky(m.y[scratch[i].second])) ++zero_flaky;
    }
  }
  if (m.distance_weighting && zero_total > 0) {
    return static_cast<double>(zero_flaky) / static_cast<double>(zero_total);
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = m.distance_weighting ? 1.0 / std::sqrt(scratch[i].first) : 1.0;
    if (is_flaky(m.y[scratch[i].second])) num += w;
    den += w;
  }
  return num / den;
}

}  // namespace

// ---------------------------------------------------------------------------
// Linear SVM: SMO on the dual with second-order working-set selection.

TrainedModel train_svm(const Matrix& x, const Labels& y, const ClassifierSpec& spec) {
  const SvmParams params = resolve_svm_params(spec);
  check_training_input(x, y);
  const std::size_t n = y.size();
  const auto n_flaky = static_cast<std::size_t>(std::count(y.begin(), y.end(), Label::Flaky));
  if (n_flaky == 0 || n_flaky == n) throw Error(ErrorCode::SingleClass, "SVM needs both classes");

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> xm(x.data().data(), static_cast<Eigen::Index>(n),
                                      static_cast<Eigen::Index>(x.cols()));
  const Eigen::MatrixXd kernel = xm * xm.transpose();

  std::vector<double> yy(n);
  for (std::size_t i = 0; i < n; ++i) yy[i] = is_flaky(y[i]) ? 1.0 : -1.0;
  auto q = [&](std::size_t i, std::size_t j) {
    return yy[i] * yy[j] * kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };
  auto qd = [&](std::size_t i) {
    return kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
  };

  const double c = params.c;
  constexpr double kTau = 1e-12;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  auto upper = [&](std::size_t i) { return alpha[i] >= c; };
  auto lower = [&](std::size_t i) { return alpha[i] <= 0.0; };

  for (std::int64_t iter = 0; iter < params.max_iterations; ++iter) {
    double gmax = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t i_sel = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (yy[t] > 0) {
        if (!upper(t) && -grad[t] >= gmax) {
          gmax = -grad[t];
          i_sel = static_cast<std::ptrdiff_t>(t);
        }
      } else if (!lower(t) && grad[t] >= gmax) {
        gmax = grad[t];
        i_sel = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (i_sel < 0) break;
    const auto i = static_cast<std::size_t>(i_sel);

    double gmax2 = -std::numeric_limits<double>::infinity();
    double obj_min = std::numeric_limits<double>::infinity();
    std::ptrdiff_t j_sel = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (yy[t] > 0) {
        if (lower(t)) continue;
        const double diff = gmax + grad[t];
        gmax2 = std::max(gmax2, grad[t]);
        if (diff > 0) {
          double quad = qd(i) + qd(t) - 2.0 * yy[i] * q(i, t);
          if (quad <= 0) quad = kTau;
          const double obj = -(diff * diff) / quad;
          if (obj <= obj_min) {
            obj_min = obj;
            j_sel = static_cast<std::ptrdiff_t>(t);
          }
        }
      } else {
        if (upper(t)) continue;
        const double diff = gmax - grad[t];
        gmax2 = std::max(gmax2, -grad[t]);
        if (diff > 0) {
          double quad = qd(i) + qd(t) + 2.0 * yy[i] * q(i, t);
          if (quad <= 0) quad = kTau;
          const double obj = -(diff * diff) / quad;
          if (obj <= obj_min) {
            obj_min = obj;
            j_sel = static_cast<std::ptrdiff_t>(t);
          }
        }
      }
    }
    if (gmax + gmax2 < params.tolerance || j_sel < 0) break;
    const auto j = static_cast<std::size_t>(j_sel);

    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (yy[i] != yy[j]) {
      double quad = qd(i) + qd(j) + 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = qd(i) + qd(j) - 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) grad[t] += q(i, t) * di + q(j, t) * dj;
  }

  // Offset from the KKT conditions (average over free vectors).
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = yy[t] * grad[t];
    if (upper(t)) {
      if (yy[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (yy[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

  LinearSvmModel model;
  model.weights.assign(x.cols(), 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] <= 0.0) continue;
    ++model.support_vectors;
    const double coef = alpha[t] * yy[t];
    auto row = x.row(t);
    for (std::size_t f = 0; f < row.size(); ++f) model.weights[f] += coef * row[f];
  }
  model.bias = -rho;
  return TrainedModel(spec, x.cols(), std::move(model));
}

// ---------------------------------------------------------------------------

TrainedModel train(const Matrix& x, const Labels& y, const ClassifierSpec& spec) {
  switch (spec.family) {
    case Family::DT: return train_decision_tree(x, y, spec);
    case Family::RF: return train_random_forest(x, y, spec);
    case Family::XGB: return train_gbt(x, y, spec);
    case Family::KNN: return train_knn(x, y, spec);
    case Family::SVM: return train_svm(x, y, spec);
  }
  throw Error(ErrorCode::SpecInvalid, "unknown family");
}

std::vector<double> score(const TrainedModel& model, const Matrix& x) {
  if (x.rows() > 0 && x.cols() != model.n_features()) {
    throw Error(ErrorCode::DimensionMismatch,
                "model expects " + std::to_string(model.n_features()) + " features, got " +
                    std::to_string(x.cols()));
  }
  std::vector<double> out(x.rows());
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        std::vector<std::pair<double, std::size_t>> scratch;
        for (std::size_t r = 0; r < x.rows(); ++r) {
          auto row = x.row(r);
          double s;
          if constexpr (std::is_same_v<T, DecisionTreeModel>) {
            s = m.tree.predict(row);
          } else if constexpr (std::is_same_v<T, RandomForestModel>) {
            double sum = 0.0;
            for (const auto& t : m.trees) sum += t.predict(row);
            s = sum / static_cast<double>(m.trees.size());
          } else if constexpr (std::is_same_v<T, BoostedModel>) {
            if (m.constant_score) {
              s = *m.constant_score;
            } else {
              double f = m.base_margin;
              for (const auto& t : m.trees) f += m.learning_rate * t.predict(row);
              s = sigmoid(f);
            }
          } else if constexpr (std::is_same_v<T, KnnModel>) {
            s = knn_score(m, row, scratch);
          } else {
            s = sigmoid(dot(m.weights, row) + m.bias);
          }
          out[r] = std::clamp(s, 0.0, 1.0);
        }
      },
      model.params());
  return out;
}

Labels predict(std::span<const double> scores, double threshold) {
  Labels out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(s >= threshold ? Label::Flaky : Label::NonFlaky);
  return out;
}

}  // namespace qflake
