#include "gmotelab/numcore.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gmotelab {

namespace {

constexpr double kSpecialFnTol = 1e-10;
constexpr int kMaxSpecialFnIter = 500;

// Attempts a plain Cholesky-Banachiewicz factorization of S + ridge*I.
bool try_cholesky(const Matrix& S, double ridge, Matrix& L, double& log_det) {
  const std::size_t m = S.rows();
  L = Matrix(m, m);
  log_det = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = S(i, j) + (i == j ? ridge : 0.0);
      for (std::size_t k = 0; k < j; ++k) sum -= L(i, k) * L(j, k);
      if (i == j) {
        if (!(sum > 0.0) || !std::isfinite(sum)) return false;
        L(i, i) = std::sqrt(sum);
        log_det += 2.0 * std::log(L(i, i));
      } else {
        L(i, j) = sum / L(j, j);
      }
    }
  }
  return true;
}

}  // namespace

CholeskyFactor cholesky(const Matrix& S, double base_ridge) {
  require(S.rows() == S.cols(), Errc::invalid_argument, "cholesky requires a square matrix");
  require(S.rows() > 0, Errc::empty_data, "cholesky of empty matrix");
  const std::size_t m = S.rows();

  double trace = 0.0;
  for (std::size_t i = 0; i < m; ++i) trace += S(i, i);
  double unit = trace / static_cast<double>(m);
  if (!(unit > 0.0)) unit = 1.0;  // zero/negative trace: fall back to absolute scale

  static constexpr double kSchedule[] = {0.0, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2};
  CholeskyFactor f;
  for (double s : kSchedule) {
    double ridge = std::max(base_ridge, s * unit);
    if (try_cholesky(S, ridge, f.lower, f.log_determinant)) {
      f.ridge_applied = ridge;
      return f;
    }
  }
  raise(Errc::not_positive_definite, "matrix not positive definite at maximum ridge");
}

double mahalanobis_sq(std::span<const double> x, std::span<const double> mean,
                      const CholeskyFactor& chol) {
  const std::size_t m = chol.dim();
  require(x.size() == m && mean.size() == m, Errc::dimension_mismatch,
          "mahalanobis_sq dimension mismatch");
  // Forward solve L z = x - mean; result is |z|^2.
  Vector z(m);
  const Matrix& L = chol.lower;
  double d2 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double sum = x[i] - mean[i];
    for (std::size_t k = 0; k < i; ++k) sum -= L(i, k) * z[k];
    z[i] = sum / L(i, i);
    d2 += z[i] * z[i];
  }
  return d2;
}

double mvn_logpdf(std::span<const double> x, std::span<const double> mean,
                  const CholeskyFactor& chol) {
  const double m = static_cast<double>(chol.dim());
  double d2 = mahalanobis_sq(x, mean, chol);
  return -0.5 * m * std::log(2.0 * M_PI) - 0.5 * chol.log_determinant - 0.5 * d2;
}

Vector mvn_sample(std::span<const double> mean, const CholeskyFactor& chol, RngStream& rng) {
  const std::size_t m = chol.dim();
  require(mean.size() == m, Errc::dimension_mismatch, "mvn_sample dimension mismatch");
  Vector z(m);
  for (auto& v : z) v = rng.normal();
  Vector x(mean.begin(), mean.end());
  const Matrix& L = chol.lower;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k <= i; ++k) x[i] += L(i, k) * z[k];
  return x;
}

namespace {

// Lower regularized gamma P(a, x) by series expansion (x < a + 1).
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxSpecialFnIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16 || std::fabs(del) < kSpecialFnTol * 1e-4) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a, x) by continued fraction (x >= a + 1),
// modified Lentz.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxSpecialFnIter; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxSpecialFnIter; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  require(a > 0.0, Errc::invalid_argument, "gamma_q requires a > 0");
  require(x >= 0.0, Errc::invalid_argument, "gamma_q requires x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double regularized_beta(double a, double b, double x) {
  require(a > 0.0 && b > 0.0, Errc::invalid_argument, "beta requires a, b > 0");
  require(x >= 0.0 && x <= 1.0, Errc::invalid_argument, "beta requires x in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                 b * std::log1p(-x);
  double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double chi_sq_sf(double x, std::size_t dof) {
  require(dof >= 1, Errc::invalid_argument, "chi_sq_sf requires dof >= 1");
  require(x >= 0.0, Errc::invalid_argument, "chi_sq_sf requires x >= 0");
  return regularized_gamma_q(0.5 * static_cast<double>(dof), 0.5 * x);
}

double f_sf(double x, std::size_t d1, std::size_t d2) {
  require(d1 >= 1 && d2 >= 1, Errc::invalid_argument, "f_sf requires d1, d2 >= 1");
  require(x >= 0.0, Errc::invalid_argument, "f_sf requires x >= 0");
  double n1 = static_cast<double>(d1), n2 = static_cast<double>(d2);
  // P(F > x) = I_{d2/(d2 + d1 x)}(d2/2, d1/2)
  return regularized_beta(0.5 * n2, 0.5 * n1, n2 / (n2 + n1 * x));
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace gmotelab
