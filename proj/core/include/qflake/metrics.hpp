#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qflake/label.hpp"

namespace qflake {

/// Flaky is the positive class.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred);

enum class Metric : std::size_t { Accuracy = 0, Precision, Recall, F1, Mcc };
inline constexpr std::size_t kMetricCount = 5;
inline constexpr Metric kAllMetrics[kMetricCount] = {Metric::Accuracy, Metric::Precision,
                                                     Metric::Recall, Metric::F1, Metric::Mcc};
std::string_view to_string(Metric m) noexcept;

struct MetricReport {
  std::array<double, kMetricCount> values{};
  /// Bit i set when metric i had a zero denominator and was defined as 0.
  std::uint8_t zero_denominator = 0;

  double operator[](Metric m) const { return values[static_cast<std::size_t>(m)]; }
  double accuracy() const { return (*this)[Metric::Accuracy]; }
  double precision() const { return (*this)[Metric::Precision]; }
  double recall() const { return (*this)[Metric::Recall]; }
  double f1() const { return (*this)[Metric::F1]; }
  double mcc() const { return (*this)[Metric::Mcc]; }
  bool flagged(Metric m) const { return (zero_denominator >> static_cast<std::size_t>(m)) & 1U; }

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

/// Throws EmptyMatrix when the matrix has no samples.
MetricReport compute_metrics(const ConfusionMatrix& cm);

struct MetricStats {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  friend bool operator==(const MetricStats&, const MetricStats&) = default;
};

struct AggregateReport {
  std::array<MetricStats, kMetricCount> stats{};
  const MetricStats& operator[](Metric m) const { return stats[static_cast<std::size_t>(m)]; }
  friend bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

/// Per-metric mean and population std. Throws EmptyInput on no reports.
AggregateReport aggregate(std::span<const MetricReport> reports);

struct ThresholdPoint {
  double threshold = 0.0;
  double f1 = 0.0;
  friend bool operator==(const ThresholdPoint&, const ThresholdPoint&) = default;
};

struct ThresholdCurve {
  std::vector<ThresholdPoint> grid;
  double best_threshold = 0.5;
  double best_f1 = 0.0;

  /// F1 at a grid threshold (exact match), if present.
  double f1_at(double threshold) const;
  friend bool operator==(const ThresholdCurve&, const ThresholdCurve&) = default;
};

inline constexpr double kThresholdLow = 0.1;
inline constexpr double kThresholdHigh = 0.9;
inline constexpr double kDefaultThresholdStep = 0.1;
inline constexpr double kDefaultThreshold = 0.5;

/// Thresholds 0.1, 0.1 + step, ..., 0.9, each rounded to the nearest decimal
/// so they compare equal to the same literal. Step must divide 0.8.
std::vector<double> threshold_grid(double step = kDefaultThresholdStep);

/// F1 per grid threshold (predict flaky iff score >= t); ties resolve to the
/// lowest threshold. Throws EmptyInput / LengthMismatch.
ThresholdCurve tune_threshold(std::span<const double> scores, std::span<const Label> y_true,
                              double grid_step = kDefaultThresholdStep);

}  // namespace qflake
