#include "qflake/metrics.hpp"

#include <cmath>

#include "qflake/classifiers.hpp"
#include "qflake/error.hpp"

namespace qflake {

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::Accuracy: return "accuracy";
    case Metric::Precision: return "precision";
    case Metric::Recall: return "recall";
    case Metric::F1: return "f1";
    case Metric::Mcc: return "mcc";
  }
  return "";
}

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorCode::LengthMismatch, "y_true and y_pred lengths differ");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool t = is_flaky(y_true[i]);
    const bool p = is_flaky(y_pred[i]);
    if (t && p) ++cm.tp;
    else if (!t && p) ++cm.fp;
    else if (t && !p) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

MetricReport compute_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::EmptyMatrix, "confusion matrix has no samples");
  const auto tp = static_cast<double>(cm.tp);
  const auto fp = static_cast<double>(cm.fp);
  const auto fn = static_cast<double>(cm.fn);
  const auto tn = static_cast<double>(cm.tn);

  MetricReport r;
  auto set = [&](Metric m, double num, double den) {
    const auto i = static_cast<std::size_t>(m);
    if (den == 0.0) {
      r.values[i] = 0.0;
      r.zero_denominator |= static_cast<std::uint8_t>(1U << i);
    } else {
      r.values[i] = num / den;
    }
  };
  set(Metric::Accuracy, tp + tn, tp + fp + fn + tn);
  set(Metric::Precision, tp, tp + fp);
  set(Metric::Recall, tp, tp + fn);
  // Equal to 2PR / (P + R); the denominator of that form vanishes iff tp == 0.
  if (cm.tp == 0) {
    set(Metric::F1, 0.0, 0.0);
  } else {
    set(Metric::F1, 2.0 * tp, 2.0 * tp + fp + fn);
  }
  const double marginals = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  set(Metric::Mcc, tp * tn - fp * fn, marginals == 0.0 ? 0.0 : std::sqrt(marginals));
  return r;
}

AggregateReport aggregate(std::span<const MetricReport> reports) {
  if (reports.empty()) throw Error(ErrorCode::EmptyInput, "no reports to aggregate");
  AggregateReport agg;
  const auto n = static_cast<double>(reports.size());
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    double sum = 0.0;
    for (const auto& r : reports) sum += r.values[m];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : reports) ss += (r.values[m] - mean) * (r.values[m] - mean);
    agg.stats[m] = {mean, std::sqrt(ss / n)};
  }
  return agg;
}

double ThresholdCurve::f1_at(double threshold) const {
  for (const auto& p : grid) {
    if (p.threshold == threshold) return p.f1;
  }
  throw Error(ErrorCode::EmptyInput, "threshold not on the grid");
}

std::vector<double> threshold_grid(double step) {
  const double span = kThresholdHigh - kThresholdLow;
  if (!(step > 0.0)) throw Error(ErrorCode::ConfigInvalid, "threshold step must be positive");
  const double intervals = span / step;
  const double rounded = std::round(intervals);
  if (std::abs(intervals - rounded) > 1e-9) {
    throw Error(ErrorCode::ConfigInvalid, "threshold step must divide 0.8");
  }
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(rounded);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = kThresholdLow + static_cast<double>(i) * step;
    grid.push_back(std::round(t * 1e9) / 1e9);
  }
  return grid;
}

ThresholdCurve tune_threshold(std::span<const double> scores, std::span<const Label> y_true,
                              double grid_step) {
  if (scores.empty()) throw Error(ErrorCode::EmptyInput, "no scores to tune on");
  if (scores.size() != y_true.size()) {
    throw Error(ErrorCode::LengthMismatch, "scores and labels lengths differ");
  }
  ThresholdCurve curve;
  bool first = true;
  for (double t : threshold_grid(grid_step)) {
    const auto pred = predict(scores, t);
    const double f1 = compute_metrics(confusion(y_true, pred)).f1();
    curve.grid.push_back({t, f1});
    if (first || f1 > curve.best_f1) {
      curve.best_f1 = f1;
      curve.best_threshold = t;
      first = false;
    }
  }
  return curve;
}

}  // namespace qflake
