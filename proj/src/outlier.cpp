#include "gmotelab/outlier.hpp"

#include <algorithm>
#include <cmath>

namespace gmotelab {

namespace {

double aggregate_tail(std::span<const double> per_comp, TailAggregate mode) {
  if (mode == TailAggregate::max_over_components)
    return *std::max_element(per_comp.begin(), per_comp.end());
  return *std::min_element(per_comp.begin(), per_comp.end());
}

// Effective per-component sample size for the Hotelling branch, based on the
// size of the sample the model was estimated from.
std::size_t hotelling_effective_n(const GaussianComponent& comp, const GmmModel& model) {
  return static_cast<std::size_t>(std::llround(comp.weight * static_cast<double>(model.n_fit)));
}

}  // namespace

double component_tail_prob(std::span<const double> x, const GaussianComponent& comp,
                           TailStatistic statistic, std::size_t effective_n) {
  const std::size_t m = comp.cached_cholesky.dim();
  double d2 = mahalanobis_sq(x, comp.mean, comp.cached_cholesky);
  if (statistic == TailStatistic::chi_square) return chi_sq_sf(d2, m);

  require(effective_n > m + 1, Errc::insufficient_sample_size,
          "hotelling_f needs effective_n > M+1");
  double n = static_cast<double>(effective_n);
  double md = static_cast<double>(m);
  double f_stat = d2 * (n - md) / (md * (n - 1.0));
  return f_sf(f_stat, m, effective_n - m);
}

TailProbabilityReport detect_outliers(const Matrix& X, const GmmModel& model,
                                      const OutlierPolicy& policy) {
  require(policy.alpha >= 0.0 && policy.alpha < 1.0, Errc::invalid_argument,
          "alpha must lie in [0, 1)");
  require(X.cols() == model.dim, Errc::dimension_mismatch, "detect_outliers dimension mismatch");
  const std::size_t n = X.rows(), c = model.n_components();

  TailProbabilityReport report;
  report.policy = policy;
  report.per_component = Matrix(n, c);
  report.aggregate.resize(n);
  report.flags.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const auto& comp = model.components[j];
      std::size_t eff = policy.statistic == TailStatistic::hotelling_f
                            ? hotelling_effective_n(comp, model)
                            : n;
      report.per_component(i, j) = component_tail_prob(X.row(i), comp, policy.statistic, eff);
    }
    report.aggregate[i] = aggregate_tail(report.per_component.row(i), policy.aggregate);
    report.flags[i] = report.aggregate[i] < policy.alpha;
  }
  return report;
}

bool is_inlier(std::span<const double> x, const GmmModel& model, const OutlierPolicy& policy) {
  require(policy.alpha >= 0.0 && policy.alpha < 1.0, Errc::invalid_argument,
          "alpha must lie in [0, 1)");
  require(x.size() == model.dim, Errc::dimension_mismatch, "is_inlier dimension mismatch");
  double best = 0.0;
  bool first = true;
  for (std::size_t j = 0; j < model.n_components(); ++j) {
    const auto& comp = model.components[j];
    std::size_t eff = policy.statistic == TailStatistic::hotelling_f
                          ? hotelling_effective_n(comp, model)
                          : 1;
    double p = component_tail_prob(x, comp, policy.statistic, eff);
    if (first) {
      best = p;
      first = false;
    } else if (policy.aggregate == TailAggregate::max_over_components) {
      best = std::max(best, p);
    } else {
      best = std::min(best, p);
    }
  }
  return !(best < policy.alpha);
}

}  // namespace gmotelab
