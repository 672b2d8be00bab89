#include <cmath>
#include <vector>

#include "doctest.h"
#include "gmotelab/error.hpp"
#include "gmotelab/matrix.hpp"
#include "gmotelab/numcore.hpp"
#include "gmotelab/rng.hpp"
#include "helpers.hpp"

using namespace gmotelab;
using namespace testutil;

TEST_SUITE("numcore") {

TEST_CASE("cholesky reconstructs the input") {
  Matrix S(3, 3);
  double vals[9] = {4, 2, 1, 2, 5, 3, 1, 3, 6};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) S(i, j) = vals[3 * i + j];

  auto F = cholesky(S);
  CHECK(F.ridge_applied == 0.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 3; ++k) acc += F.lower(i, k) * F.lower(j, k);
      CHECK(acc == doctest::Approx(S(i, j)).epsilon(1e-12));
    }
  // det(S) = 4*(30-9) - 2*(12-3) + 1*(6-5) = 84 - 18 + 1 = 67
  CHECK(F.log_determinant == doctest::Approx(std::log(67.0)).epsilon(1e-12));
}

TEST_CASE("cholesky 2x2 analytic factor") {
  Matrix S(2, 2);
  S(0, 0) = 9.0;
  S(0, 1) = S(1, 0) = 3.0;
  S(1, 1) = 5.0;
  auto F = cholesky(S);
  CHECK(F.lower(0, 0) == doctest::Approx(3.0));
  CHECK(F.lower(1, 0) == doctest::Approx(1.0));
  CHECK(F.lower(1, 1) == doctest::Approx(2.0));
  CHECK(F.lower(0, 1) == 0.0);
}

TEST_CASE("cholesky applies a ridge to a singular matrix") {
  Matrix S(2, 2);  // rank 1
  S(0, 0) = 1.0;
  S(0, 1) = S(1, 0) = 1.0;
  S(1, 1) = 1.0;
  auto F = cholesky(S);
  CHECK(F.ridge_applied > 0.0);
  for (std::size_t i = 0; i < 2; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < 2; ++k) acc += F.lower(i, k) * F.lower(i, k);
    CHECK(acc == doctest::Approx(S(i, i) + F.ridge_applied).epsilon(1e-10));
  }
}

TEST_CASE("cholesky rejects an indefinite matrix beyond the ridge schedule") {
  Matrix S(2, 2);  // eigenvalues 3 and -1; max ridge 1e-2*trace/2 = 0.01 cannot fix it
  S(0, 0) = 1.0;
  S(0, 1) = S(1, 0) = 2.0;
  S(1, 1) = 1.0;
  CHECK_THROWS_AS(cholesky(S), Error);
}

TEST_CASE("mahalanobis with identity covariance is the squared distance") {
  Matrix S(3, 3);
  for (std::size_t i = 0; i < 3; ++i) S(i, i) = 1.0;
  auto F = cholesky(S);
  std::vector<double> x{1.0, -2.0, 0.5}, mu{0.0, 1.0, 0.5};
  CHECK(mahalanobis_sq(x, mu, F) == doctest::Approx(1.0 + 9.0 + 0.0).epsilon(1e-14));
}

TEST_CASE("mahalanobis against a hand-inverted 2x2 covariance") {
  Matrix S(2, 2);
  S(0, 0) = 2.0;
  S(0, 1) = S(1, 0) = 0.5;
  S(1, 1) = 1.0;
  auto F = cholesky(S);
  // inv(S) = 1/1.75 * [[1, -0.5], [-0.5, 2]]
  std::vector<double> x{1.0, 2.0}, mu{0.0, 0.0};
  double expected = (1.0 * 1.0 - 0.5 * 1.0 * 2.0 - 0.5 * 2.0 * 1.0 + 2.0 * 4.0) / 1.75;
  CHECK(mahalanobis_sq(x, mu, F) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("mvn_logpdf at the mean and by quadrature mass") {
  Matrix S(2, 2);
  S(0, 0) = 1.5;
  S(0, 1) = S(1, 0) = 0.3;
  S(1, 1) = 0.8;
  auto F = cholesky(S);
  std::vector<double> mu{0.4, -0.2};

  double det = 1.5 * 0.8 - 0.09;
  double at_mean = -0.5 * (2.0 * std::log(2.0 * M_PI) + std::log(det));
  CHECK(mvn_logpdf(mu, mu, F) == doctest::Approx(at_mean).epsilon(1e-12));

  // total mass by 2-D Simpson over +-8 sd
  auto slice = [&](double x0) {
    return simpson(
        [&](double x1) {
          std::vector<double> p{x0, x1};
          return std::exp(mvn_logpdf(p, mu, F));
        },
        mu[1] - 10.0, mu[1] + 10.0, 400);
  };
  double mass = simpson(slice, mu[0] - 10.0, mu[0] + 10.0, 400);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mvn_sample matches the requested moments") {
  Matrix S(2, 2);
  S(0, 0) = 2.0;
  S(0, 1) = S(1, 0) = -0.6;
  S(1, 1) = 1.2;
  auto F = cholesky(S);
  std::vector<double> mu{3.0, -1.0};

  RngStream rng(99, "mvn-moments");
  const std::size_t n = 60000;
  Matrix draws(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    Vector v = mvn_sample(mu, F, rng);
    draws(i, 0) = v[0];
    draws(i, 1) = v[1];
  }
  Vector m = column_means(draws);
  CHECK(m[0] == doctest::Approx(3.0).epsilon(0.02));
  CHECK(m[1] == doctest::Approx(-1.0).epsilon(0.02));
  Matrix C = covariance_mle(draws);
  CHECK(C(0, 0) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(C(0, 1) == doctest::Approx(-0.6).epsilon(0.08));
  CHECK(C(1, 1) == doctest::Approx(1.2).epsilon(0.05));
}

TEST_CASE("chi_sq_sf against closed forms and quadrature") {
  // dof 2 closed form exp(-x/2)
  for (double x : {0.5, 1.0, 3.0, 5.991, 10.0})
    CHECK(chi_sq_sf(x, 2) == doctest::Approx(std::exp(-0.5 * x)).epsilon(1e-10));
  // dof 4 closed form
  for (double x : {1.0, 4.0, 9.0})
    CHECK(chi_sq_sf(x, 4) == doctest::Approx(std::exp(-0.5 * x) * (1.0 + 0.5 * x)).epsilon(1e-10));
  // odd dof against the recurrence oracle
  for (int k : {1, 3, 5, 7})
    for (double x : {0.2, 1.0, 2.5, 6.0, 15.0})
      CHECK(chi_sq_sf(x, k) == doctest::Approx(chi_sq_sf_ref(x, k)).epsilon(1e-8));
  CHECK(chi_sq_sf(0.0, 3) == 1.0);
  CHECK_THROWS_AS(chi_sq_sf(-1.0, 3), Error);
}

TEST_CASE("f_sf symmetry point and quadrature oracle") {
  for (int d : {1, 2, 5, 10, 40}) CHECK(std::fabs(f_sf(1.0, d, d) - 0.5) < 1e-10);
  for (int d1 : {1, 2, 3, 8})
    for (int d2 : {2, 5, 17})
      for (double x : {0.3, 1.0, 2.7, 6.0})
        CHECK(f_sf(x, d1, d2) == doctest::Approx(f_sf_ref(x, d1, d2)).epsilon(1e-7));
  CHECK(f_sf(0.0, 3, 4) == 1.0);
}

TEST_CASE("regularized gamma and beta special cases") {
  // Q(1, x) = exp(-x)
  for (double x : {0.1, 1.0, 4.0})
    CHECK(regularized_gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-10));
  // I_x(1, 1) = x
  for (double x : {0.2, 0.5, 0.9})
    CHECK(regularized_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-10));
  // I_x(a, 1) = x^a
  CHECK(regularized_beta(2.5, 1.0, 0.7) == doctest::Approx(std::pow(0.7, 2.5)).epsilon(1e-10));
  // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
  CHECK(regularized_beta(2.0, 3.5, 0.4) ==
        doctest::Approx(1.0 - regularized_beta(3.5, 2.0, 0.6)).epsilon(1e-10));
}

TEST_CASE("normal_sf against quadrature") {
  CHECK(normal_sf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  for (double z : {-2.0, -0.5, 0.3, 1.0, 1.959963984540054, 3.0, 6.0})
    CHECK(normal_sf(z) == doctest::Approx(normal_sf_ref(z)).epsilon(1e-8));
  CHECK(normal_sf(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-9));
}

TEST_CASE("tail functions are monotone on a grid") {
  double prev = 1.0;
  for (int i = 1; i <= 1000; ++i) {
    double v = chi_sq_sf(i * 0.02, 3);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
  prev = 1.0;
  for (int i = 1; i <= 1000; ++i) {
    double v = f_sf(i * 0.01, 4, 9);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}

}  // TEST_SUITE
