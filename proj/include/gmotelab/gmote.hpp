#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gmotelab/gmm.hpp"
#include "gmotelab/outlier.hpp"

namespace gmotelab {

struct GmoteConfig {
  double alpha = 0.05;
  double gamma = 1.0;  // sampling ratio: |synthetic| = ceil(gamma * |P|)
  EmConfig em;
  std::vector<std::size_t> c_range;  // empty = default range for the fitted set
  // alpha above takes precedence over policy.alpha.
  OutlierPolicy policy;
  std::size_t max_attempts_factor = 1000;
  std::uint64_t seed = 0;

  OutlierPolicy effective_policy() const {
    OutlierPolicy p = policy;
    p.alpha = alpha;
    return p;
  }
};

struct GmoteModel {
  GmmModel initial_gmm;
  TailProbabilityReport outlier_report;
  GmmModel cleaned_gmm;
  std::size_t retained_count = 0;
  // Set when every instance was flagged and the refit fell back to all of P.
  bool all_flagged_fallback = false;
};

struct SyntheticSet {
  Matrix instances;
  std::string method;
  std::uint64_t seed = 0;
  std::size_t attempts = 0;  // total candidates drawn
  std::size_t rejected = 0;
};

// Fit the initial mixture on the minority set, strip local outliers at
// cfg.alpha, and refit (component count re-selected by BIC) on the retained
// rows. When everything is flagged, the refit keeps all of P and the model
// carries a warning flag.
GmoteModel gmote_fit(const Matrix& P, const GmoteConfig& cfg);

// Rejection-sample ceil(gamma * minority_count) rows from the cleaned mixture,
// keeping only inliers at cfg.alpha. Throws AcceptanceStarvation when the
// total number of draws exceeds max_attempts_factor * target.
SyntheticSet gmote_generate(const GmoteModel& model, std::size_t minority_count,
                            const GmoteConfig& cfg);

// fit followed by generate with minority_count = |P|.
SyntheticSet gmote_oversample(const Matrix& P, const GmoteConfig& cfg);

}  // namespace gmotelab
