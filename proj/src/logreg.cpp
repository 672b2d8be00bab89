#include <algorithm>
#include <cmath>
#include <vector>

#include "gmotelab/learners.hpp"
#include "gmotelab/numcore.hpp"

namespace gmotelab {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double t) {  // log(1 + e^t) without overflow
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

Vector solve_spd(const CholeskyFactor& ch, const Vector& rhs) {
  const std::size_t d = ch.dim();
  Vector z(d), x(d);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = rhs[i];
    for (std::size_t j = 0; j < i; ++j) acc -= ch.lower(i, j) * z[j];
    z[i] = acc / ch.lower(i, i);
  }
  for (std::size_t ii = d; ii-- > 0;) {
    double acc = z[ii];
    for (std::size_t j = ii + 1; j < d; ++j) acc -= ch.lower(j, ii) * x[j];
    x[ii] = acc / ch.lower(ii, ii);
  }
  return x;
}

}  // namespace

LogisticModel logreg_fit(const Matrix& X, const std::vector<int>& y, const LogregConfig& cfg) {
  require(X.rows() >= 2, Errc::empty_data, "logreg_fit needs at least two rows");
  require(X.rows() == y.size(), Errc::length_mismatch, "logreg_fit label count mismatch");
  for (int v : y)
    require(v == 0 || v == 1, Errc::invalid_argument, "logreg_fit labels must be 0/1");

  const std::size_t n = X.rows(), m = X.cols(), d = m + 1;
  Vector theta(d, 0.0);  // theta[0] = intercept

  auto linear = [&](std::size_t i, const Vector& th) {
    double z = th[0];
    for (std::size_t j = 0; j < m; ++j) z += th[j + 1] * X(i, j);
    return z;
  };
  auto penalized_nll = [&](const Vector& th) {
    double nll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double z = linear(i, th);
      nll += (y[i] == 1) ? softplus(-z) : softplus(z);
    }
    for (std::size_t j = 1; j < d; ++j) nll += 0.5 * cfg.ridge * th[j] * th[j];
    return nll;
  };

  LogisticModel model;
  model.nll_trace.push_back(penalized_nll(theta));

  Vector p(n), g(d);
  for (std::size_t iter = 0;; ++iter) {
    for (std::size_t i = 0; i < n; ++i) p[i] = sigmoid(linear(i, theta));
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double r = p[i] - static_cast<double>(y[i]);
      g[0] += r;
      for (std::size_t j = 0; j < m; ++j) g[j + 1] += r * X(i, j);
    }
    for (std::size_t j = 1; j < d; ++j) g[j] += cfg.ridge * theta[j];

    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    if (gmax <= cfg.tolerance) {
      model.converged = true;
      break;
    }
    if (iter >= cfg.max_iterations) break;

    Matrix H(d, d);
    for (std::size_t i = 0; i < n; ++i) {
      double w = p[i] * (1.0 - p[i]);
      if (w == 0.0) continue;
      H(0, 0) += w;
      for (std::size_t a = 0; a < m; ++a) {
        double wxa = w * X(i, a);
        H(0, a + 1) += wxa;
        for (std::size_t b = a; b < m; ++b) H(a + 1, b + 1) += wxa * X(i, b);
      }
    }
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b) H(b, a) = H(a, b);
    for (std::size_t j = 1; j < d; ++j) H(j, j) += cfg.ridge;

    Vector step = solve_spd(cholesky(H), g);
    double current = model.nll_trace.back();
    double lambda = 1.0;
    bool accepted = false;
    Vector trial(d);
    for (int halving = 0; halving < 40; ++halving, lambda *= 0.5) {
      for (std::size_t j = 0; j < d; ++j) trial[j] = theta[j] - lambda * step[j];
      double value = penalized_nll(trial);
      if (value <= current) {
        theta = trial;
        model.nll_trace.push_back(value);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no damping level improves: we are at numerical rest
    model.n_iterations = iter + 1;
  }

  model.intercept = theta[0];
  model.weights.assign(theta.begin() + 1, theta.end());
  return model;
}

double logreg_score(const LogisticModel& model, std::span<const double> x) {
  require(x.size() == model.weights.size(), Errc::dimension_mismatch,
          "logreg_score dimension mismatch");
  double z = model.intercept;
  for (std::size_t j = 0; j < x.size(); ++j) z += model.weights[j] * x[j];
  return sigmoid(z);
}

}  // namespace gmotelab
