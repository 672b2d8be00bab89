#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gmotelab/matrix.hpp"

namespace gmotelab {

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

// Positive class = label 1 (the minority). Precision and F1 are absent when
// nothing was predicted positive; AUC is absent until filled from scores.
struct MetricSet {
  double accuracy = 0.0;
  double recall = 0.0;
  double gmean = 0.0;
  std::optional<double> precision;
  std::optional<double> f1;
  std::optional<double> auc;
};

ConfusionCounts confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred);
MetricSet metrics_from_counts(const ConfusionCounts& c);

// Probability that a random positive outranks a random negative; ties count 1/2.
double auc(const Vector& scores, const std::vector<int>& labels);

// Per-feature (x - min) / (max - min) fitted on training rows; constant
// features map to 0.5; values outside the training range are not clipped.
struct Scaler01 {
  Vector minimum;
  Vector range;  // 0 marks a constant feature
};

Scaler01 normalize_01(const Matrix& train);
Matrix apply(const Scaler01& scaler, const Matrix& X);

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> assignments;  // fold id per instance
  std::uint64_t seed = 0;
};

// Stratified assignment: per-class fold counts differ by at most one, and the
// class remainders are rotated across folds so total fold sizes stay balanced.
FoldPlan stratified_kfold(const std::vector<int>& labels, std::size_t k, std::uint64_t seed);

enum class Alternative { greater, less };
enum class TestMethod { exact, normal_approx };

struct WilcoxonResult {
  double statistic = 0.0;  // sum of positive-difference ranks
  std::size_t n_effective = 0;
  double p_one_sided = 1.0;
  Alternative alternative = Alternative::greater;
  TestMethod method = TestMethod::exact;
};

// Paired signed-rank test on x - y; zero differences are dropped; exact null
// distribution up to n_effective = 25, normal approximation with tie-corrected
// variance and continuity correction beyond.
WilcoxonResult wilcoxon_signed_rank(const Vector& x, const Vector& y, Alternative alternative);

// Higher score gets the lower (better) rank; ties share the average rank;
// absent scores rank last, tied among themselves. Ranks sum to n(n+1)/2.
std::vector<double> rank_methods(const std::vector<std::optional<double>>& scores);

}  // namespace gmotelab
