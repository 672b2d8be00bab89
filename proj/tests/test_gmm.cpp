#include <cmath>
#include <vector>

#include "doctest.h"
#include "gmotelab/gmm.hpp"
#include "gmotelab/matrix.hpp"
#include "helpers.hpp"

using namespace gmotelab;
using namespace testutil;

namespace {

// Test-side mixture log-likelihood with analytic 1-D / 2-D densities.
double naive_loglik(const GmmModel& model, const Matrix& X) {
  double total = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double density = 0.0;
    for (const auto& comp : model.components) {
      double q, logdet;
      if (model.dim == 1) {
        double s = comp.covariance(0, 0) + comp.cached_cholesky.ridge_applied;
        double d = X(i, 0) - comp.mean[0];
        q = d * d / s;
        logdet = std::log(s);
      } else {
        REQUIRE(model.dim == 2);
        double r = comp.cached_cholesky.ridge_applied;
        double a = comp.covariance(0, 0) + r, b = comp.covariance(0, 1),
               c = comp.covariance(1, 1) + r;
        double det = a * c - b * b;
        double dx = X(i, 0) - comp.mean[0], dy = X(i, 1) - comp.mean[1];
        q = (c * dx * dx - 2.0 * b * dx * dy + a * dy * dy) / det;
        logdet = std::log(det);
      }
      density += comp.weight *
                 std::exp(-0.5 * (model.dim * std::log(2.0 * M_PI) + logdet + q));
    }
    total += std::log(density);
  }
  return total;
}

}  // namespace

TEST_SUITE("gmm") {

TEST_CASE("single component reproduces mean and MLE covariance") {
  RngStream rng(314, "c1");
  for (int rep = 0; rep < 10; ++rep) {
    std::size_t n = 20 + rng.uniform_int(80), m = 1 + rng.uniform_int(3);
    Matrix X = random_matrix(n, m, rng, 1.0 + rng.uniform(), rng.normal());
    RngStream fit_rng(rep, "fit");
    GmmModel model = em_fit(X, 1, EmConfig{}, fit_rng);

    REQUIRE(model.n_components() == 1);
    CHECK(model.components[0].weight == doctest::Approx(1.0).epsilon(1e-12));
    Vector mu = column_means(X);
    Matrix S = covariance_mle(X);
    for (std::size_t j = 0; j < m; ++j)
      CHECK(model.components[0].mean[j] == doctest::Approx(mu[j]).epsilon(1e-10));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        CHECK(model.components[0].covariance(a, b) ==
              doctest::Approx(S(a, b)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("log-likelihood trace is non-decreasing") {
  RngStream rng(271, "mono");
  Matrix X = vstack(gaussian_blob({0.0, 0.0}, 1.0, 60, rng),
                    gaussian_blob({5.0, 5.0}, 0.7, 40, rng));
  RngStream fit_rng(1, "fit");
  GmmModel model = em_fit(X, 2, EmConfig{}, fit_rng);
  REQUIRE(model.loglik_trace.size() >= 2);
  for (std::size_t i = 1; i < model.loglik_trace.size(); ++i)
    CHECK(model.loglik_trace[i] >= model.loglik_trace[i - 1] - 1e-8);
  CHECK(model.log_likelihood == doctest::Approx(model.loglik_trace.back()));
}

TEST_CASE("gmm_loglik matches a naive density sum") {
  RngStream rng(99, "naive");
  Matrix X = vstack(gaussian_blob({-3.0, 0.0}, 0.8, 50, rng),
                    gaussian_blob({3.0, 1.0}, 1.2, 70, rng));
  RngStream fit_rng(2, "fit");
  GmmModel model = em_fit(X, 2, EmConfig{}, fit_rng);
  CHECK(gmm_loglik(model, X) == doctest::Approx(naive_loglik(model, X)).epsilon(1e-9));
  CHECK(model.log_likelihood == doctest::Approx(naive_loglik(model, X)).epsilon(1e-9));

  // 1-D case
  Matrix X1(80, 1);
  for (std::size_t i = 0; i < 80; ++i) X1(i, 0) = (i < 40 ? -2.0 : 2.0) + 0.5 * rng.normal();
  RngStream fit1(3, "fit");
  GmmModel m1 = em_fit(X1, 2, EmConfig{}, fit1);
  CHECK(gmm_loglik(m1, X1) == doctest::Approx(naive_loglik(m1, X1)).epsilon(1e-9));
}

TEST_CASE("weights sum to one and covariances stay positive definite") {
  RngStream rng(55, "wsum");
  Matrix X = vstack(gaussian_blob({0.0, 0.0}, 1.0, 45, rng),
                    gaussian_blob({4.0, -2.0}, 0.6, 35, rng));
  RngStream fit_rng(4, "fit");
  GmmModel model = em_fit(X, 3, EmConfig{}, fit_rng);
  double wsum = 0.0;
  for (const auto& comp : model.components) {
    CHECK(comp.weight > 0.0);
    wsum += comp.weight;
    CHECK(comp.cached_cholesky.dim() == 2);
    CHECK(std::isfinite(comp.cached_cholesky.log_determinant));
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("bic formula") {
  RngStream rng(12, "bic");
  Matrix X = gaussian_blob({1.0, 2.0}, 1.0, 90, rng);
  RngStream fit_rng(5, "fit");
  GmmModel model = em_fit(X, 2, EmConfig{}, fit_rng);
  double value = bic(model, X.rows());
  std::size_t C = 2, M = 2;
  double nu = static_cast<double>((C - 1) + C * M + C * M * (M + 1) / 2);
  CHECK(value ==
        doctest::Approx(-2.0 * model.log_likelihood + nu * std::log(90.0)).epsilon(1e-12));
  CHECK(model.bic == value);
  CHECK(model.param_count == static_cast<std::size_t>(nu));
}

TEST_CASE("select_by_bic prefers two components for separated blobs") {
  RngStream rng(2718, "sel2");
  Matrix X = vstack(gaussian_blob({0.0, 0.0}, 1.0, 120, rng),
                    gaussian_blob({8.0, 8.0}, 1.0, 120, rng));
  RngStream fit_rng(6, "fit");
  GmmModel model = select_by_bic(X, {1, 2, 3, 4, 5}, EmConfig{}, fit_rng);
  CHECK(model.n_components() == 2);
}

TEST_CASE("select_by_bic prefers one component for a single Gaussian") {
  RngStream rng(161, "sel1");
  Matrix X = gaussian_blob({0.0, 0.0}, 1.0, 200, rng);
  RngStream fit_rng(7, "fit");
  GmmModel model = select_by_bic(X, {1, 2, 3}, EmConfig{}, fit_rng);
  CHECK(model.n_components() == 1);
}

TEST_CASE("default_c_range caps by sample size") {
  CHECK(default_c_range(100, 2) == std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK(default_c_range(20, 2) == std::vector<std::size_t>{1, 2, 3, 4, 5});
  CHECK(default_c_range(10, 8) == std::vector<std::size_t>{1});
  CHECK(default_c_range(3, 50) == std::vector<std::size_t>{1});
}

TEST_CASE("em survives duplicate-heavy data via the covariance ridge") {
  Matrix X(30, 2);
  for (std::size_t i = 0; i < 30; ++i) {
    X(i, 0) = i < 15 ? 1.0 : 2.0;  // two exact point masses
    X(i, 1) = i < 15 ? 1.0 : 2.0;
  }
  RngStream fit_rng(8, "fit");
  GmmModel model = em_fit(X, 2, EmConfig{}, fit_rng);
  CHECK(std::isfinite(model.log_likelihood));
  CHECK(model.n_components() == 2);
}

TEST_CASE("gmm_sample moments follow the model") {
  GmmModel model;
  model.dim = 2;
  GaussianComponent comp;
  comp.weight = 1.0;
  comp.mean = {2.0, -1.0};
  comp.covariance = Matrix(2, 2);
  comp.covariance(0, 0) = 1.5;
  comp.covariance(1, 1) = 0.5;
  comp.cached_cholesky = cholesky(comp.covariance);
  model.components.push_back(comp);
  model.n_fit = 100;

  RngStream rng(77, "draws");
  Matrix draws = gmm_sample(model, 40000, rng);
  Vector m = column_means(draws);
  CHECK(m[0] == doctest::Approx(2.0).epsilon(0.02));
  CHECK(m[1] == doctest::Approx(-1.0).epsilon(0.03));
  Matrix C = covariance_mle(draws);
  CHECK(C(0, 0) == doctest::Approx(1.5).epsilon(0.05));
  CHECK(C(1, 1) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("em_fit is deterministic for a fixed stream") {
  RngStream data_rng(31, "dat");
  Matrix X = vstack(gaussian_blob({0.0, 0.0}, 1.0, 40, data_rng),
                    gaussian_blob({5.0, 0.0}, 1.0, 40, data_rng));
  RngStream r1(9, "fit"), r2(9, "fit");
  GmmModel a = em_fit(X, 2, EmConfig{}, r1);
  GmmModel b = em_fit(X, 2, EmConfig{}, r2);
  CHECK(a.log_likelihood == b.log_likelihood);
  REQUIRE(a.n_components() == b.n_components());
  for (std::size_t c = 0; c < a.n_components(); ++c) {
    CHECK(a.components[c].weight == b.components[c].weight);
    CHECK(a.components[c].mean == b.components[c].mean);
    CHECK(a.components[c].covariance == b.components[c].covariance);
  }
}

TEST_CASE("input validation") {
  Matrix empty;
  RngStream rng(1, "v");
  CHECK_THROWS_AS(em_fit(empty, 1, EmConfig{}, rng), Error);
  Matrix X(5, 2);
  CHECK_THROWS_AS(em_fit(X, 0, EmConfig{}, rng), Error);
  CHECK_THROWS_AS(em_fit(X, 6, EmConfig{}, rng), Error);  // C > N
}

}  // TEST_SUITE
