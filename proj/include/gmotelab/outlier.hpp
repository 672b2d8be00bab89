#pragma once

#include <vector>

#include "gmotelab/gmm.hpp"

namespace gmotelab {

enum class TailAggregate { max_over_components, min_over_components };
enum class TailStatistic { chi_square, hotelling_f };

struct OutlierPolicy {
  double alpha = 0.05;
  TailAggregate aggregate = TailAggregate::max_over_components;
  TailStatistic statistic = TailStatistic::chi_square;
};

struct TailProbabilityReport {
  Matrix per_component;        // N x C tail probabilities
  Vector aggregate;            // per instance
  std::vector<bool> flags;     // true = local outlier
  OutlierPolicy policy;

  std::size_t flagged_count() const {
    std::size_t n = 0;
    for (bool f : flags) n += f;
    return n;
  }
};

// Tail probability of x under one component: chi-square branch uses
// P(chi^2_M > d^2); the Hotelling branch rescales d^2 by (n-M)/(M(n-1)) and
// uses the F_{M,n-M} upper tail. hotelling_f requires effective_n > M+1.
double component_tail_prob(std::span<const double> x, const GaussianComponent& comp,
                           TailStatistic statistic, std::size_t effective_n);

// Flags instance i when its aggregate tail probability falls below alpha.
// Hotelling effective counts are round(weight * N) per component.
TailProbabilityReport detect_outliers(const Matrix& X, const GmmModel& model,
                                      const OutlierPolicy& policy);

bool is_inlier(std::span<const double> x, const GmmModel& model, const OutlierPolicy& policy);

}  // namespace gmotelab
