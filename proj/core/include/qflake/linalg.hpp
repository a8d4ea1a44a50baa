#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qflake {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Throws DimensionMismatch if data.size() != rows * cols.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  /// Ragged input throws DimensionMismatch.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  /// Rows at the given positions, in order (repeats allowed).
  Matrix select_rows(std::span<const std::size_t> positions) const;
  void append_row(std::span<const double> values);

  /// Throws NonFinite on NaN/Inf.
  void check_finite() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix transpose(const Matrix& m);
Matrix multiply(const Matrix& a, const Matrix& b);
double squared_distance(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);
std::vector<double> column_means(const Matrix& m);

struct PcaModel {
  std::vector<double> mean;               // length d
  Matrix components;                      // k x d, orthonormal rows
  std::vector<double> explained_variance; // length k, non-increasing

  std::size_t n_components() const noexcept { return components.rows(); }
  std::size_t n_features() const noexcept { return mean.size(); }
};

/// Largest admissible component count for an n x d input: min(n - 1, d).
std::size_t pca_max_components(std::size_t n_rows, std::size_t n_cols) noexcept;

/// Principal axes from the SVD of the column-centered input. Each component's
/// largest-magnitude entry is made positive. Throws DegenerateInput for fewer
/// than two rows and RankTooSmall if k is 0 or above pca_max_components.
PcaModel pca_fit(const Matrix& x, std::size_t k);

/// (x - mean) * components^T. Throws DimensionMismatch on column mismatch.
Matrix pca_transform(const PcaModel& model, const Matrix& x);

/// scores * components + mean.
Matrix pca_reconstruct(const PcaModel& model, const Matrix& scores);

}  // namespace qflake
