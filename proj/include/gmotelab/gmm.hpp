#pragma once

#include <vector>

#include "gmotelab/matrix.hpp"
#include "gmotelab/numcore.hpp"
#include "gmotelab/rng.hpp"

namespace gmotelab {

struct GaussianComponent {
  double weight = 1.0;
  Vector mean;
  Matrix covariance;
  CholeskyFactor cached_cholesky;
};

struct GmmModel {
  std::vector<GaussianComponent> components;
  std::size_t dim = 0;
  double log_likelihood = 0.0;
  std::size_t n_iterations = 0;
  double bic = 0.0;
  std::size_t param_count = 0;
  std::size_t n_fit = 0;  // sample size the parameters were estimated from
  // Per-iteration log-likelihood of the winning run.
  std::vector<double> loglik_trace;

  std::size_t n_components() const { return components.size(); }
};

struct EmConfig {
  std::size_t max_iterations = 200;
  double rel_tolerance = 1e-6;
  std::size_t n_restarts = 5;
  // Collapse guard threshold on a component's effective count. 0 means auto (M + 1).
  double min_effective_count = 0.0;
};

// EM fit with k-means++ mean seeding, pooled-covariance initialization and a
// component-collapse guard; best of n_restarts by final log-likelihood
// (ties go to the lowest restart index).
GmmModel em_fit(const Matrix& X, std::size_t C, const EmConfig& cfg, RngStream& rng);

// Total mixture log-likelihood of X under the model (log-sum-exp over components).
double gmm_loglik(const GmmModel& model, const Matrix& X);

// -2 log L + nu ln(n), with nu = (C-1) + C*M + C*M(M+1)/2. Stored on the model.
double bic(GmmModel& model, std::size_t n);

// Fits every component count in c_range and returns the lowest-BIC model;
// ties break toward smaller C.
GmmModel select_by_bic(const Matrix& X, const std::vector<std::size_t>& c_range,
                       const EmConfig& cfg, RngStream& rng);

// Default candidate range: 1 .. min(9, floor(N/(M+2))), at least {1}.
std::vector<std::size_t> default_c_range(std::size_t n, std::size_t m);

// n draws: component by weight, then one multivariate-normal sample.
Matrix gmm_sample(const GmmModel& model, std::size_t n, RngStream& rng);

}  // namespace gmotelab
