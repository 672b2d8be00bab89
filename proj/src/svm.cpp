#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gmotelab/learners.hpp"

namespace gmotelab {

namespace {

constexpr double kAlphaEps = 1e-12;

struct Smo {
  const Matrix& X;  // standardized rows
  std::vector<double> y;
  double C, gamma, tol;
  std::vector<double> alpha, err;  // err[i] = f(x_i) - y_i, kept incrementally
  double b = 0.0;
  Matrix K;

  Smo(const Matrix& x, std::vector<double> labels, double cost, double g, double t)
      : X(x), y(std::move(labels)), C(cost), gamma(g), tol(t) {
    const std::size_t n = X.rows();
    alpha.assign(n, 0.0);
    err.resize(n);
    for (std::size_t i = 0; i < n; ++i) err[i] = -y[i];  // f == 0 initially
    K = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      K(i, i) = 1.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        double v = std::exp(-gamma * squared_distance(X.row(i), X.row(j)));
        K(i, j) = v;
        K(j, i) = v;
      }
    }
  }

  bool non_bound(std::size_t i) const { return alpha[i] > 0.0 && alpha[i] < C; }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    double a1 = alpha[i1], a2 = alpha[i2];
    double y1 = y[i1], y2 = y[i2], s = y1 * y2;
    double E1 = err[i1], E2 = err[i2];

    double L, H;
    if (s < 0.0) {
      L = std::max(0.0, a2 - a1);
      H = std::min(C, C + a2 - a1);
    } else {
      L = std::max(0.0, a1 + a2 - C);
      H = std::min(C, a1 + a2);
    }
    if (L >= H) return false;

    double k11 = K(i1, i1), k12 = K(i1, i2), k22 = K(i2, i2);
    double eta = k11 + k22 - 2.0 * k12;
    double a2_new;
    if (eta > 0.0) {
      a2_new = a2 + y2 * (E1 - E2) / eta;
      a2_new = std::clamp(a2_new, L, H);
    } else {
      // flat direction: evaluate the objective at both clip ends
      double f1 = y1 * (E1 + b) - a1 * k11 - s * a2 * k12;
      double f2 = y2 * (E2 + b) - s * a1 * k12 - a2 * k22;
      double L1 = a1 + s * (a2 - L), H1 = a1 + s * (a2 - H);
      double objL = L1 * f1 + L * f2 + 0.5 * L1 * L1 * k11 + 0.5 * L * L * k22 + s * L * L1 * k12;
      double objH = H1 * f1 + H * f2 + 0.5 * H1 * H1 * k11 + 0.5 * H * H * k22 + s * H * H1 * k12;
      if (objL < objH - kAlphaEps)
        a2_new = L;
      else if (objL > objH + kAlphaEps)
        a2_new = H;
      else
        a2_new = a2;
    }
    if (std::abs(a2_new - a2) < kAlphaEps * (a2_new + a2 + kAlphaEps)) return false;
    double a1_new = a1 + s * (a2 - a2_new);

    double d1 = y1 * (a1_new - a1), d2 = y2 * (a2_new - a2);
    double b1 = b - E1 - d1 * k11 - d2 * k12;
    double b2 = b - E2 - d1 * k12 - d2 * k22;
    double b_new;
    if (a1_new > 0.0 && a1_new < C)
      b_new = b1;
    else if (a2_new > 0.0 && a2_new < C)
      b_new = b2;
    else
      b_new = 0.5 * (b1 + b2);

    double db = b_new - b;
    for (std::size_t k = 0; k < err.size(); ++k) err[k] += d1 * K(i1, k) + d2 * K(i2, k) + db;
    alpha[i1] = a1_new;
    alpha[i2] = a2_new;
    b = b_new;
    return true;
  }

  bool examine(std::size_t i2) {
    double r2 = err[i2] * y[i2];
    if (!((r2 < -tol && alpha[i2] < C) || (r2 > tol && alpha[i2] > 0.0))) return false;

    // best second choice: maximize |E1 - E2| over non-bound points
    std::size_t best = err.size();
    double gap = -1.0;
    for (std::size_t k = 0; k < err.size(); ++k) {
      if (!non_bound(k)) continue;
      double g = std::abs(err[k] - err[i2]);
      if (g > gap) {
        gap = g;
        best = k;
      }
    }
    if (best < err.size() && take_step(best, i2)) return true;
    for (std::size_t k = 0; k < err.size(); ++k)
      if (non_bound(k) && take_step(k, i2)) return true;
    for (std::size_t k = 0; k < err.size(); ++k)
      if (take_step(k, i2)) return true;
    return false;
  }

  double dual_objective() const {
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      lin += alpha[i];
      if (alpha[i] == 0.0) continue;
      for (std::size_t j = 0; j < alpha.size(); ++j)
        quad += alpha[i] * alpha[j] * y[i] * y[j] * K(i, j);
    }
    return lin - 0.5 * quad;
  }
};

}  // namespace

SvmModel svm_fit(const Matrix& X, const std::vector<int>& y, const SvmConfig& cfg) {
  require(X.rows() >= 2, Errc::empty_data, "svm_fit needs at least two rows");
  require(X.rows() == y.size(), Errc::length_mismatch, "svm_fit label count mismatch");
  require(X.cols() >= 1, Errc::invalid_argument, "svm_fit needs at least one feature");
  std::size_t pos = 0;
  for (int v : y) {
    require(v == 0 || v == 1, Errc::invalid_argument, "svm_fit labels must be 0/1");
    pos += static_cast<std::size_t>(v == 1);
  }
  require(pos > 0 && pos < y.size(), Errc::single_class, "svm_fit needs both classes");

  const std::size_t n = X.rows(), m = X.cols();
  SvmModel model;
  model.cost = cfg.cost;
  model.gamma = cfg.gamma > 0.0 ? cfg.gamma : 1.0 / static_cast<double>(m);
  model.feature_mean = column_means(X);
  model.feature_sd.assign(m, 1.0);
  for (std::size_t j = 0; j < m; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = X(i, j) - model.feature_mean[j];
      acc += d * d;
    }
    double sd = n > 1 ? std::sqrt(acc / static_cast<double>(n - 1)) : 0.0;
    model.feature_sd[j] = sd > 0.0 ? sd : 1.0;
  }

  Matrix Z(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      Z(i, j) = (X(i, j) - model.feature_mean[j]) / model.feature_sd[j];

  std::vector<double> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = y[i] == 1 ? 1.0 : -1.0;

  Smo smo(Z, std::move(labels), cfg.cost, model.gamma, cfg.tolerance);
  bool examine_all = true;
  std::size_t changed = 1;
  for (std::size_t sweep = 0; (changed > 0 || examine_all) && sweep < cfg.max_sweeps; ++sweep) {
    changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!examine_all && !smo.non_bound(i)) continue;
      changed += static_cast<std::size_t>(smo.examine(i));
    }
    if (cfg.record_objective) model.objective_trace.push_back(smo.dual_objective());
    if (examine_all)
      examine_all = false;
    else if (changed == 0)
      examine_all = true;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (smo.alpha[i] <= 0.0) continue;
    model.support_vectors.push_row(Z.row(i));
    model.dual_coef.push_back(smo.alpha[i] * smo.y[i]);
  }
  model.bias = smo.b;
  return model;
}

double svm_score(const SvmModel& model, std::span<const double> x) {
  require(x.size() == model.feature_mean.size(), Errc::dimension_mismatch,
          "svm_score dimension mismatch");
  Vector z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    z[j] = (x[j] - model.feature_mean[j]) / model.feature_sd[j];
  double f = model.bias;
  for (std::size_t i = 0; i < model.support_vectors.rows(); ++i)
    f += model.dual_coef[i] *
         std::exp(-model.gamma * squared_distance(model.support_vectors.row(i),
                                                  std::span<const double>(z)));
  return f;
}

}  // namespace gmotelab
