#pragma once

#include <span>

#include "gmotelab/matrix.hpp"
#include "gmotelab/rng.hpp"

namespace gmotelab {

// Lower-triangular factor L with L*L^T = S + ridge_applied*I.
struct CholeskyFactor {
  Matrix lower;
  double log_determinant = 0.0;  // of the regularized input
  double ridge_applied = 0.0;

  std::size_t dim() const { return lower.rows(); }
};

// Factorizes S + r*I for the smallest r in the escalation schedule
// {0, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2} * trace(S)/M that is positive definite,
// starting from base_ridge. Throws NotPositiveDefinite when the maximum ridge
// fails.
CholeskyFactor cholesky(const Matrix& S, double base_ridge = 0.0);

// (x - mean)^T Sigma^{-1} (x - mean) via triangular solve against the factor.
double mahalanobis_sq(std::span<const double> x, std::span<const double> mean,
                      const CholeskyFactor& chol);

// Log density of N(mean, Sigma) at x.
double mvn_logpdf(std::span<const double> x, std::span<const double> mean,
                  const CholeskyFactor& chol);

// mean + L*z with z iid standard normal from rng.
Vector mvn_sample(std::span<const double> mean, const CholeskyFactor& chol, RngStream& rng);

// Upper tail P(chi^2_dof > x).
double chi_sq_sf(double x, std::size_t dof);

// Upper tail of the F distribution with d1, d2 degrees of freedom.
double f_sf(double x, std::size_t d1, std::size_t d2);

// Regularized incomplete gamma Q(a, x) and incomplete beta I_x(a, b);
// series/continued-fraction evaluation, absolute tolerance 1e-10.
double regularized_gamma_q(double a, double x);
double regularized_beta(double a, double b, double x);

// Standard normal upper tail.
double normal_sf(double z);

}  // namespace gmotelab
