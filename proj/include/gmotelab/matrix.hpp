#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "gmotelab/error.hpp"

namespace gmotelab {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  Vector row_vec(std::size_t i) const { return Vector(row(i).begin(), row(i).end()); }

  void push_row(std::span<const double> r);
  Matrix select_rows(const std::vector<std::size_t>& idx) const;
  void append_rows(const Matrix& other);

  const Vector& data() const { return data_; }
  Vector& data() { return data_; }

  bool operator==(const Matrix& other) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

inline Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows.size() ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, Errc::dimension_mismatch, "ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

inline Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

inline Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  Matrix m;
  if (rows.empty()) return m;
  m.rows_ = rows.size();
  m.cols_ = rows[0].size();
  m.data_.reserve(m.rows_ * m.cols_);
  for (const auto& r : rows) {
    require(r.size() == m.cols_, Errc::dimension_mismatch, "ragged rows");
    m.data_.insert(m.data_.end(), r.begin(), r.end());
  }
  return m;
}

inline void Matrix::push_row(std::span<const double> r) {
  if (rows_ == 0 && cols_ == 0) cols_ = r.size();
  require(r.size() == cols_, Errc::dimension_mismatch, "row width mismatch");
  data_.insert(data_.end(), r.begin(), r.end());
  ++rows_;
}

inline Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
  Matrix out(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto src = row(idx[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

inline void Matrix::append_rows(const Matrix& other) {
  if (other.empty()) return;
  if (rows_ == 0 && cols_ == 0) cols_ = other.cols();
  require(other.cols() == cols_, Errc::dimension_mismatch, "column count mismatch");
  data_.insert(data_.end(), other.data().begin(), other.data().end());
  rows_ += other.rows();
}

double squared_distance(std::span<const double> a, std::span<const double> b);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

// Column means of X.
Vector column_means(const Matrix& X);
// MLE covariance (1/N) of X.
Matrix covariance_mle(const Matrix& X);

}  // namespace gmotelab
