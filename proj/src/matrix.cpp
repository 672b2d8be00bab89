#include "gmotelab/matrix.hpp"

#include <cmath>

namespace gmotelab {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

Vector column_means(const Matrix& X) {
  require(X.rows() > 0, Errc::empty_data, "column_means of empty matrix");
  Vector mu(X.cols(), 0.0);
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = 0; j < X.cols(); ++j) mu[j] += X(i, j);
  for (auto& v : mu) v /= static_cast<double>(X.rows());
  return mu;
}

Matrix covariance_mle(const Matrix& X) {
  require(X.rows() > 0, Errc::empty_data, "covariance of empty matrix");
  const std::size_t n = X.rows(), m = X.cols();
  Vector mu = column_means(X);
  Matrix S(m, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < m; ++a) {
      double da = X(i, a) - mu[a];
      for (std::size_t b = a; b < m; ++b) S(a, b) += da * (X(i, b) - mu[b]);
    }
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) {
      S(a, b) /= static_cast<double>(n);
      S(b, a) = S(a, b);
    }
  return S;
}

}  // namespace gmotelab
