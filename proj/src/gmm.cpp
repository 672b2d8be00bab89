#include "gmotelab/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gmotelab {

namespace {

constexpr double kWeightFloor = 1e-6;
constexpr double kCollapseRidgeScale = 1e-4;

double log_sum_exp(std::span<const double> v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

// k-means++ style seeding: first mean uniform, the rest by squared-distance
// weighting over the current seed set. Falls back to unused indices when all
// remaining distances are zero (duplicate rows).
std::vector<std::size_t> kmeanspp_seed(const Matrix& X, std::size_t k, RngStream& rng) {
  const std::size_t n = X.rows();
  std::vector<std::size_t> chosen;
  std::vector<bool> used(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  std::size_t first = rng.uniform_int(n);
  chosen.push_back(first);
  used[first] = true;

  while (chosen.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = squared_distance(X.row(i), X.row(chosen.back()));
      d2[i] = std::min(d2[i], d);
      if (!used[i]) total += d2[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      double u = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        acc += d2[i];
        if (acc >= u) {
          pick = i;
          break;
        }
      }
    }
    if (pick == n) {
      for (std::size_t i = 0; i < n; ++i)
        if (!used[i]) {
          pick = i;
          break;
        }
    }
    chosen.push_back(pick);
    used[pick] = true;
  }
  return chosen;
}

struct EStepResult {
  Matrix resp;  // N x C responsibilities
  double loglik = 0.0;
};

EStepResult e_step(const GmmModel& model, const Matrix& X) {
  const std::size_t n = X.rows(), c = model.n_components();
  EStepResult r;
  r.resp = Matrix(n, c);
  Vector logw(c);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const auto& comp = model.components[j];
      logw[j] = std::log(comp.weight) + mvn_logpdf(X.row(i), comp.mean, comp.cached_cholesky);
    }
    double lse = log_sum_exp(logw);
    r.loglik += lse;
    for (std::size_t j = 0; j < c; ++j) r.resp(i, j) = std::exp(logw[j] - lse);
  }
  return r;
}

void m_step(GmmModel& model, const Matrix& X, const Matrix& resp, double min_effective,
            double pooled_unit) {
  const std::size_t n = X.rows(), m = X.cols(), c = model.n_components();
  Vector eff(c, 0.0);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t i = 0; i < n; ++i) eff[j] += resp(i, j);

  double weight_total = 0.0;
  for (std::size_t j = 0; j < c; ++j) {
    auto& comp = model.components[j];
    bool collapsed = eff[j] < min_effective;
    double denom = std::max(eff[j], 1e-12);

    comp.mean.assign(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < m; ++a) comp.mean[a] += resp(i, j) * X(i, a);
    for (auto& v : comp.mean) v /= denom;

    Matrix S(m, m);
    for (std::size_t i = 0; i < n; ++i) {
      double w = resp(i, j);
      if (w == 0.0) continue;
      for (std::size_t a = 0; a < m; ++a) {
        double da = X(i, a) - comp.mean[a];
        for (std::size_t b = a; b < m; ++b) S(a, b) += w * da * (X(i, b) - comp.mean[b]);
      }
    }
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a; b < m; ++b) {
        S(a, b) /= denom;
        S(b, a) = S(a, b);
      }
    comp.covariance = S;

    double base_ridge = 0.0;
    if (collapsed) {
      double tr = 0.0;
      for (std::size_t a = 0; a < m; ++a) tr += S(a, a);
      double unit = tr > 0.0 ? tr / static_cast<double>(m) : pooled_unit;
      base_ridge = kCollapseRidgeScale * unit;
    }
    comp.cached_cholesky = cholesky(S, base_ridge);

    comp.weight = std::max(eff[j] / static_cast<double>(n), collapsed ? kWeightFloor : 0.0);
    weight_total += comp.weight;
  }
  for (auto& comp : model.components) comp.weight /= weight_total;
}

GmmModel run_single_em(const Matrix& X, std::size_t C, const EmConfig& cfg, RngStream rng,
                       const Matrix& pooled_cov, double pooled_unit, double min_effective) {
  const std::size_t m = X.cols();
  GmmModel model;
  model.dim = m;
  model.components.resize(C);

  auto seeds = kmeanspp_seed(X, C, rng);
  CholeskyFactor pooled_chol = cholesky(pooled_cov, 0.0);
  for (std::size_t j = 0; j < C; ++j) {
    auto& comp = model.components[j];
    comp.weight = 1.0 / static_cast<double>(C);
    comp.mean = X.row_vec(seeds[j]);
    comp.covariance = pooled_cov;
    comp.cached_cholesky = pooled_chol;
  }

  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    EStepResult e = e_step(model, X);
    model.loglik_trace.push_back(e.loglik);
    model.n_iterations = it + 1;
    if (it > 0 && std::fabs(e.loglik - prev) < cfg.rel_tolerance * (1.0 + std::fabs(e.loglik))) {
      model.log_likelihood = e.loglik;
      return model;
    }
    prev = e.loglik;
    m_step(model, X, e.resp, min_effective, pooled_unit);
  }
  // Iteration budget exhausted: sync the reported likelihood with the final
  // parameters.
  EStepResult e = e_step(model, X);
  model.loglik_trace.push_back(e.loglik);
  model.log_likelihood = e.loglik;
  return model;
}

}  // namespace

std::vector<std::size_t> default_c_range(std::size_t n, std::size_t m) {
  std::size_t cap = n / (m + 2);
  cap = std::min<std::size_t>(9, cap);
  cap = std::max<std::size_t>(1, cap);
  cap = std::min(cap, n);
  std::vector<std::size_t> range;
  for (std::size_t c = 1; c <= cap; ++c) range.push_back(c);
  return range;
}

GmmModel em_fit(const Matrix& X, std::size_t C, const EmConfig& cfg, RngStream& rng) {
  require(X.rows() >= 1, Errc::empty_data, "em_fit on empty data");
  require(C >= 1, Errc::invalid_argument, "em_fit requires C >= 1");
  require(C <= X.rows(), Errc::too_many_components, "more components than instances");

  const std::size_t m = X.cols();
  Matrix pooled = covariance_mle(X);
  double tr = 0.0;
  for (std::size_t a = 0; a < m; ++a) tr += pooled(a, a);
  double pooled_unit = tr > 0.0 ? tr / static_cast<double>(m) : 1.0;
  double min_effective =
      cfg.min_effective_count > 0.0 ? cfg.min_effective_count : static_cast<double>(m + 1);

  GmmModel best;
  bool have_best = false;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, cfg.n_restarts); ++r) {
    RngStream sub = rng.derive("restart=" + std::to_string(r));
    GmmModel candidate =
        run_single_em(X, C, cfg, std::move(sub), pooled, pooled_unit, min_effective);
    if (!have_best || candidate.log_likelihood > best.log_likelihood) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  best.n_fit = X.rows();
  bic(best, X.rows());
  return best;
}

double gmm_loglik(const GmmModel& model, const Matrix& X) {
  require(X.cols() == model.dim, Errc::dimension_mismatch, "gmm_loglik dimension mismatch");
  double total = 0.0;
  Vector logw(model.n_components());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    for (std::size_t j = 0; j < model.n_components(); ++j) {
      const auto& comp = model.components[j];
      logw[j] = std::log(comp.weight) + mvn_logpdf(X.row(i), comp.mean, comp.cached_cholesky);
    }
    total += log_sum_exp(logw);
  }
  return total;
}

double bic(GmmModel& model, std::size_t n) {
  require(n >= 1, Errc::invalid_argument, "bic requires n >= 1");
  const std::size_t c = model.n_components(), m = model.dim;
  model.param_count = (c - 1) + c * m + c * m * (m + 1) / 2;
  model.bic = -2.0 * model.log_likelihood +
              static_cast<double>(model.param_count) * std::log(static_cast<double>(n));
  return model.bic;
}

GmmModel select_by_bic(const Matrix& X, const std::vector<std::size_t>& c_range,
                       const EmConfig& cfg, RngStream& rng) {
  require(!c_range.empty(), Errc::invalid_argument, "select_by_bic needs a non-empty range");
  GmmModel best;
  bool have_best = false;
  std::vector<std::size_t> sorted(c_range);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t c : sorted) {
    RngStream sub = rng.derive("C=" + std::to_string(c));
    GmmModel candidate = em_fit(X, c, cfg, sub);
    if (!have_best || candidate.bic < best.bic) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  return best;
}

Matrix gmm_sample(const GmmModel& model, std::size_t n, RngStream& rng) {
  Matrix out(0, model.dim);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.uniform();
    double acc = 0.0;
    std::size_t pick = model.n_components() - 1;
    for (std::size_t j = 0; j < model.n_components(); ++j) {
      acc += model.components[j].weight;
      if (u < acc) {
        pick = j;
        break;
      }
    }
    const auto& comp = model.components[pick];
    Vector x = mvn_sample(comp.mean, comp.cached_cholesky, rng);
    out.push_row(x);
  }
  return out;
}

}  // namespace gmotelab
