#pragma once

// Reference implementations written straight from textbook definitions, kept
// apart from the library code they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "qflake/linalg.hpp"

namespace qflake::oracle {

struct Metrics {
  double accuracy = 0, precision = 0, recall = 0, f1 = 0, mcc = 0;
  bool precision_zero = false, recall_zero = false, f1_zero = false, mcc_zero = false;
};

inline Metrics direct_metrics(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn,
                              std::uint64_t tn) {
  using L = long double;
  Metrics m;
  const L total = L(tp) + L(fp) + L(fn) + L(tn);
  m.accuracy = static_cast<double>((L(tp) + L(tn)) / total);
  L p = 0, r = 0;
  if (tp + fp == 0) m.precision_zero = true;
  else p = L(tp) / (L(tp) + L(fp));
  if (tp + fn == 0) m.recall_zero = true;
  else r = L(tp) / (L(tp) + L(fn));
  m.precision = static_cast<double>(p);
  m.recall = static_cast<double>(r);
  if (p + r == 0) m.f1_zero = true;
  else m.f1 = static_cast<double>(2 * p * r / (p + r));
  if (tp + fp == 0 || tp + fn == 0 || tn + fp == 0 || tn + fn == 0) {
    m.mcc_zero = true;
  } else {
    const L num = L(tp) * L(tn) - L(fp) * L(fn);
    m.mcc = static_cast<double>(num / (std::sqrt(L(tp) + L(fp)) * std::sqrt(L(tp) + L(fn)) *
                                       std::sqrt(L(tn) + L(fp)) * std::sqrt(L(tn) + L(fn))));
  }
  return m;
}

using Square = std::vector<std::vector<double>>;

inline Square sample_covariance(const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += x(i, j);
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  Square c(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) {
        c[a][b] += (x(i, a) - mean[a]) * (x(i, b) - mean[b]);
      }
    }
  }
  for (auto& row : c) {
    for (auto& v : row) v /= static_cast<double>(n - 1);
  }
  return c;
}

/// Cyclic Jacobi rotations on a symmetric matrix. Returns eigenvalues in
/// descending order with matching unit eigenvectors.
inline std::pair<std::vector<double>, Square> jacobi_eigen(Square a) {
  const std::size_t d = a.size();
  Square v(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(d);
  for (std::size_t i = 0; i < d; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a[i][i] > a[j][j]; });
  std::vector<double> values;
  Square vectors;
  for (auto i : order) {
    values.push_back(a[i][i]);
    std::vector<double> col(d);
    for (std::size_t k = 0; k < d; ++k) col[k] = v[k][i];
    vectors.push_back(std::move(col));
  }
  return {values, vectors};
}

/// Inverse-distance weighted k-NN flaky score by exhaustive search.
inline double knn_score(const std::vector<std::vector<double>>& xs, const std::vector<int>& ys,
                        const std::vector<double>& q, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) s += (xs[i][j] - q[j]) * (xs[i][j] - q[j]);
    d.push_back({std::sqrt(s), i});
  }
  std::sort(d.begin(), d.end());
  d.resize(std::min(k, d.size()));
  std::size_t zeros = 0, zero_flaky = 0;
  double num = 0.0, den = 0.0;
  for (auto [dist, i] : d) {
    if (dist == 0.0) {
      ++zeros;
      zero_flaky += ys[i];
    } else {
      num += ys[i] / dist;
      den += 1.0 / dist;
    }
  }
  if (zeros > 0) return static_cast<double>(zero_flaky) / static_cast<double>(zeros);
  return num / den;
}

}  // namespace qflake::oracle
