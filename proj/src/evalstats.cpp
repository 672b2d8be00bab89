#include "gmotelab/evalstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "gmotelab/numcore.hpp"
#include "gmotelab/rng.hpp"

namespace gmotelab {

ConfusionCounts confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  require(y_true.size() == y_pred.size(), Errc::length_mismatch,
          "confusion needs equal-length label vectors");
  ConfusionCounts c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    require((y_true[i] == 0 || y_true[i] == 1) && (y_pred[i] == 0 || y_pred[i] == 1),
            Errc::invalid_argument, "confusion labels must be 0/1");
    if (y_true[i] == 1)
      ++(y_pred[i] == 1 ? c.tp : c.fn);
    else
      ++(y_pred[i] == 1 ? c.fp : c.tn);
  }
  return c;
}

MetricSet metrics_from_counts(const ConfusionCounts& c) {
  const std::size_t n = c.total();
  require(n >= 1, Errc::empty_counts, "metrics need at least one instance");
  require(c.tp + c.fn >= 1, Errc::invalid_argument, "metrics need at least one positive");
  require(c.fp + c.tn >= 1, Errc::invalid_argument, "metrics need at least one negative");

  MetricSet m;
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(n);
  m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  double specificity = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
  m.gmean = std::sqrt(m.recall * specificity);
  if (c.tp + c.fp >= 1) {
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    m.f1 = 2.0 * static_cast<double>(c.tp) /
           static_cast<double>(2 * c.tp + c.fp + c.fn);
  }
  return m;
}

namespace {

// Average ranks (1-based) of v, ties sharing the mean of their positions.
Vector average_ranks(const Vector& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  Vector ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double auc(const Vector& scores, const std::vector<int>& labels) {
  require(scores.size() == labels.size(), Errc::length_mismatch,
          "auc needs equal-length scores and labels");
  std::size_t n_pos = 0;
  for (int v : labels) {
    require(v == 0 || v == 1, Errc::invalid_argument, "auc labels must be 0/1");
    n_pos += static_cast<std::size_t>(v == 1);
  }
  std::size_t n_neg = labels.size() - n_pos;
  require(n_pos >= 1 && n_neg >= 1, Errc::single_class, "auc needs both classes");

  Vector ranks = average_ranks(scores);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == 1) rank_sum += ranks[i];
  double u = rank_sum - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

Scaler01 normalize_01(const Matrix& train) {
  require(!train.empty(), Errc::empty_data, "normalize_01 needs training rows");
  Scaler01 s;
  s.minimum.resize(train.cols());
  s.range.resize(train.cols());
  for (std::size_t j = 0; j < train.cols(); ++j) {
    double lo = train(0, j), hi = train(0, j);
    for (std::size_t i = 1; i < train.rows(); ++i) {
      lo = std::min(lo, train(i, j));
      hi = std::max(hi, train(i, j));
    }
    s.minimum[j] = lo;
    s.range[j] = hi - lo;
  }
  return s;
}

Matrix apply(const Scaler01& scaler, const Matrix& X) {
  require(X.cols() == scaler.minimum.size(), Errc::dimension_mismatch,
          "scaler dimension mismatch");
  Matrix out(X.rows(), X.cols());
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = 0; j < X.cols(); ++j)
      out(i, j) = scaler.range[j] > 0.0
                      ? (X(i, j) - scaler.minimum[j]) / scaler.range[j]
                      : 0.5;
  return out;
}

FoldPlan stratified_kfold(const std::vector<int>& labels, std::size_t k, std::uint64_t seed) {
  require(k >= 2, Errc::invalid_argument, "stratified_kfold needs k >= 2");
  std::vector<int> classes(labels);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(labels.size(), 0);

  RngStream rng(seed, "stratified-kfold");
  std::size_t offset = 0;
  for (int cls : classes) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) idx.push_back(i);
    require(idx.size() >= k, Errc::class_too_small,
            "stratified_kfold: a class has fewer members than folds");
    for (std::size_t i = idx.size() - 1; i > 0; --i) {
      std::size_t j = rng.uniform_int(i + 1);
      std::swap(idx[i], idx[j]);
    }
    for (std::size_t j = 0; j < idx.size(); ++j) plan.assignments[idx[j]] = (offset + j) % k;
    offset = (offset + idx.size()) % k;
  }
  return plan;
}

WilcoxonResult wilcoxon_signed_rank(const Vector& x, const Vector& y, Alternative alternative) {
  require(x.size() == y.size(), Errc::length_mismatch,
          "wilcoxon_signed_rank needs equal-length samples");
  Vector diff, absd;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - y[i];
    if (d != 0.0) {
      diff.push_back(d);
      absd.push_back(std::abs(d));
    }
  }

  WilcoxonResult res;
  res.alternative = alternative;
  res.n_effective = diff.size();
  if (diff.empty()) {  // all pairs equal: nothing to test
    res.method = TestMethod::exact;
    res.p_one_sided = 1.0;
    return res;
  }

  Vector ranks = average_ranks(absd);
  double w = 0.0;
  for (std::size_t i = 0; i < diff.size(); ++i)
    if (diff[i] > 0.0) w += ranks[i];
  res.statistic = w;

  const std::size_t n = diff.size();
  if (n <= 25) {
    res.method = TestMethod::exact;
    // Null distribution over all 2^n sign assignments, tabulated on doubled
    // ranks so tie-averaged half-ranks stay integral.
    std::vector<std::uint64_t> doubled(n);
    std::size_t max_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      doubled[i] = static_cast<std::uint64_t>(std::llround(2.0 * ranks[i]));
      max_sum += doubled[i];
    }
    std::vector<std::uint64_t> count(max_sum + 1, 0);
    count[0] = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t s = max_sum + 1; s-- > doubled[i];)
        count[s] += count[s - doubled[i]];
    double total = std::ldexp(1.0, static_cast<int>(n));
    std::uint64_t w2 = static_cast<std::uint64_t>(std::llround(2.0 * w));
    double tail = 0.0;
    if (alternative == Alternative::greater) {
      for (std::size_t s = w2; s <= max_sum; ++s) tail += static_cast<double>(count[s]);
    } else {
      for (std::size_t s = 0; s <= std::min<std::size_t>(w2, max_sum); ++s)
        tail += static_cast<double>(count[s]);
    }
    res.p_one_sided = tail / total;
  } else {
    res.method = TestMethod::normal_approx;
    double nn = static_cast<double>(n);
    double mean = nn * (nn + 1.0) / 4.0;
    double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
    // tie correction over groups of equal |d|
    Vector sorted = absd;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      double t = static_cast<double>(j - i + 1);
      var -= (t * t * t - t) / 48.0;
      i = j + 1;
    }
    double sd = std::sqrt(var);
    if (alternative == Alternative::greater)
      res.p_one_sided = normal_sf((w - mean - 0.5) / sd);
    else
      res.p_one_sided = normal_sf((mean - w - 0.5) / sd);
  }
  res.p_one_sided = std::clamp(res.p_one_sided, 0.0, 1.0);
  return res;
}

std::vector<double> rank_methods(const std::vector<std::optional<double>>& scores) {
  require(scores.size() >= 2, Errc::invalid_argument, "rank_methods needs at least two methods");
  // Key: higher score first; absent scores after every present one.
  auto key = [&](std::size_t i) {
    return scores[i].has_value() ? -scores[i].value() : std::numeric_limits<double>::infinity();
  };
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  std::vector<double> ranks(scores.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && key(order[j + 1]) == key(order[i])) ++j;
    double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace gmotelab
