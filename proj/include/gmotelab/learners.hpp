#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gmotelab/matrix.hpp"

namespace gmotelab {

// ---------------------------------------------------------------- CART -----

struct CartConfig {
  std::size_t min_split = 20;   // a node needs this many rows to try a split
  std::size_t min_bucket = 7;   // each child must keep at least this many rows
  double complexity = 0.01;     // required Gini decrease relative to the root
  std::size_t max_depth = 30;
};

struct CartNode {
  bool leaf = true;
  std::size_t split_feature = 0;
  double split_threshold = 0.0;  // x[f] <= threshold goes left
  int left = -1;
  int right = -1;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  double positive_fraction = 0.0;
};

struct CartModel {
  std::vector<CartNode> nodes;  // nodes[0] is the root
  std::size_t dim = 0;
};

CartModel cart_fit(const Matrix& X, const std::vector<int>& y, const CartConfig& cfg = {});
double cart_score(const CartModel& model, std::span<const double> x);

// --------------------------------------------------- logistic regression ---

struct LogregConfig {
  std::size_t max_iterations = 100;
  double tolerance = 1e-8;  // gradient infinity-norm target
  double ridge = 1e-8;      // on weights only; the intercept is unpenalized
};

struct LogisticModel {
  Vector weights;
  double intercept = 0.0;
  bool converged = false;
  std::size_t n_iterations = 0;
  Vector nll_trace;  // penalized negative log-likelihood after each accepted step
};

LogisticModel logreg_fit(const Matrix& X, const std::vector<int>& y,
                         const LogregConfig& cfg = {});
double logreg_score(const LogisticModel& model, std::span<const double> x);

// ------------------------------------------------------------- RBF SVM -----

struct SvmConfig {
  double cost = 1.0;
  double gamma = 0.0;  // 0 means 1/M
  double tolerance = 1e-3;
  std::size_t max_sweeps = 1000;     // hard bound on full optimization passes
  bool record_objective = false;     // keep the dual objective per sweep
};

struct SvmModel {
  Matrix support_vectors;  // standardized coordinates
  Vector dual_coef;        // alpha_i * y_i per support vector
  double bias = 0.0;
  double gamma = 0.0;
  double cost = 1.0;
  Vector feature_mean;
  Vector feature_sd;
  Vector objective_trace;  // filled when record_objective is set
};

SvmModel svm_fit(const Matrix& X, const std::vector<int>& y, const SvmConfig& cfg = {});
double svm_score(const SvmModel& model, std::span<const double> x);

}  // namespace gmotelab
