#include "qflake/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "qflake/error.hpp"

namespace qflake {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> view(const Matrix& m) {
  return {m.data().data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimensionMismatch, "matrix data length does not match shape");
  }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> copy;
  for (const auto& r : rows) copy.emplace_back(r);
  return from_rows(copy);
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

Matrix Matrix::select_rows(std::span<const std::size_t> positions) const {
  Matrix out(positions.size(), cols_);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    auto src = row(positions[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "row length mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

void Matrix::check_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "matrix contains NaN or Inf");
  }
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  }
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  Eigen::Map<RowMajor> dst(out.data().data(), static_cast<Eigen::Index>(out.rows()),
                           static_cast<Eigen::Index>(out.cols()));
  dst.noalias() = view(a) * view(b);
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> column_means(const Matrix& m) {
  std::vector<double> mean(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) mean[j] += r[j];
  }
  if (m.rows() > 0) {
    for (double& v : mean) v /= static_cast<double>(m.rows());
  }
  return mean;
}

std::size_t pca_max_components(std::size_t n_rows, std::size_t n_cols) noexcept {
  if (n_rows < 2) return 0;
  return std::min(n_rows - 1, n_cols);
}

PcaModel pca_fit(const Matrix& x, std::size_t k) {
  if (x.rows() < 2) throw Error(ErrorCode::DegenerateInput, "PCA needs at least 2 rows");
  const std::size_t ceiling = pca_max_components(x.rows(), x.cols());
  if (k == 0 || k > ceiling) {
    throw Error(ErrorCode::RankTooSmall, "PCA component count " + std::to_string(k) +
                                             " outside [1, " + std::to_string(ceiling) + "]");
  }
  x.check_finite();

  PcaModel model;
  model.mean = column_means(x);
  const Eigen::Map<const Eigen::RowVectorXd> mean(model.mean.data(),
                                                  static_cast<Eigen::Index>(model.mean.size()));
  const Eigen::MatrixXd centered = view(x).rowwise() - mean;

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const auto& v = svd.matrixV();

  const std::size_t d = x.cols();
  const double denom = static_cast<double>(x.rows() - 1);
  model.components = Matrix(k, d);
  model.explained_variance.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    model.explained_variance[c] = sv(col) * sv(col) / denom;
    // sign: largest |entry| positive, earliest index on ties
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double a = std::abs(v(static_cast<Eigen::Index>(j), col));
      if (a > best) {
        best = a;
        arg = j;
      }
    }
    const double sign = v(static_cast<Eigen::Index>(arg), col) < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      model.components(c, j) = sign * v(static_cast<Eigen::Index>(j), col);
    }
  }
  return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& x) {
  if (x.cols() != model.n_features()) {
    throw Error(ErrorCode::DimensionMismatch,
                "PCA expects " + std::to_string(model.n_features()) + " columns, got " +
                    std::to_string(x.cols()));
  }
  // Row by row with a fixed summation order, so a row projects to the same
  // bits whether it arrives alone or inside a batch.
  Matrix out(x.rows(), model.n_components());
  std::vector<double> centered(x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = x.row(i);
    for (std::size_t j = 0; j < x.cols(); ++j) centered[j] = row[j] - model.mean[j];
    for (std::size_t c = 0; c < model.n_components(); ++c) {
      out(i, c) = dot(centered, model.components.row(c));
    }
  }
  return out;
}

Matrix pca_reconstruct(const PcaModel& model, const Matrix& scores) {
  if (scores.cols() != model.n_components()) {
    throw Error(ErrorCode::DimensionMismatch, "score width differs from component count");
  }
  Matrix out(scores.rows(), model.n_features());
  if (scores.rows() == 0) return out;
  const Eigen::Map<const Eigen::RowVectorXd> mean(model.mean.data(),
                                                  static_cast<Eigen::Index>(model.mean.size()));
  Eigen::Map<RowMajor> dst(out.data().data(), static_cast<Eigen::Index>(out.rows()),
                           static_cast<Eigen::Index>(out.cols()));
  dst.noalias() = view(scores) * view(model.components);
  dst.rowwise() += mean;
  return out;
}

}  // namespace qflake
