#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gmotelab/learners.hpp"

namespace gmotelab {

namespace {

double gini(std::size_t pos, std::size_t neg) {
  double n = static_cast<double>(pos + neg);
  if (n == 0.0) return 0.0;
  double pp = static_cast<double>(pos) / n, pn = static_cast<double>(neg) / n;
  return 1.0 - pp * pp - pn * pn;
}

struct SplitChoice {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double decrease = 0.0;  // impurity mass removed: n*g - (nL*gL + nR*gR)
};

struct Builder {
  const Matrix& X;
  const std::vector<int>& y;
  const CartConfig& cfg;
  double root_mass;  // N * gini(root), the scale for the complexity rule
  std::vector<CartNode> nodes;

  SplitChoice best_split(const std::vector<std::size_t>& rows, std::size_t pos,
                         std::size_t neg) const {
    SplitChoice best;
    const std::size_t n = rows.size();
    const double node_mass = static_cast<double>(n) * gini(pos, neg);
    std::vector<std::pair<double, int>> vals(n);
    for (std::size_t f = 0; f < X.cols(); ++f) {
      for (std::size_t r = 0; r < n; ++r) vals[r] = {X(rows[r], f), y[rows[r]]};
      std::sort(vals.begin(), vals.end());
      std::size_t lp = 0, ln = 0;
      for (std::size_t r = 0; r + 1 < n; ++r) {
        if (vals[r].second == 1)
          ++lp;
        else
          ++ln;
        if (vals[r].first == vals[r + 1].first) continue;  // not a boundary
        std::size_t nl = r + 1, nr = n - nl;
        if (nl < cfg.min_bucket || nr < cfg.min_bucket) continue;
        double child_mass = static_cast<double>(nl) * gini(lp, ln) +
                            static_cast<double>(nr) * gini(pos - lp, neg - ln);
        double dec = node_mass - child_mass;
        if (dec > best.decrease) {  // ties keep the lowest feature, then threshold
          best.found = true;
          best.feature = f;
          best.threshold = vals[r].first;
          best.decrease = dec;
        }
      }
    }
    return best;
  }

  int build(const std::vector<std::size_t>& rows, std::size_t depth) {
    std::size_t pos = 0;
    for (std::size_t r : rows) pos += static_cast<std::size_t>(y[r] == 1);
    std::size_t neg = rows.size() - pos;

    CartNode node;
    node.n_pos = pos;
    node.n_neg = neg;
    node.positive_fraction = static_cast<double>(pos) / static_cast<double>(rows.size());
    int id = static_cast<int>(nodes.size());
    nodes.push_back(node);

    if (rows.size() < cfg.min_split || depth >= cfg.max_depth || pos == 0 || neg == 0)
      return id;
    auto split = best_split(rows, pos, neg);
    if (!split.found || split.decrease <= 0.0) return id;
    if (root_mass <= 0.0 || split.decrease / root_mass < cfg.complexity) return id;

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows)
      (X(r, split.feature) <= split.threshold ? left_rows : right_rows).push_back(r);

    nodes[id].leaf = false;
    nodes[id].split_feature = split.feature;
    nodes[id].split_threshold = split.threshold;
    int l = build(left_rows, depth + 1);
    nodes[id].left = l;
    int r = build(right_rows, depth + 1);
    nodes[id].right = r;
    return id;
  }
};

}  // namespace

CartModel cart_fit(const Matrix& X, const std::vector<int>& y, const CartConfig& cfg) {
  require(X.rows() >= 1, Errc::empty_data, "cart_fit needs at least one row");
  require(X.rows() == y.size(), Errc::length_mismatch, "cart_fit label count mismatch");
  for (int v : y)
    require(v == 0 || v == 1, Errc::invalid_argument, "cart_fit labels must be 0/1");
  require(cfg.min_bucket >= 1 && cfg.min_split >= 1, Errc::invalid_argument,
          "cart_fit needs positive size limits");

  std::size_t pos = 0;
  for (int v : y) pos += static_cast<std::size_t>(v == 1);
  Builder b{X, y, cfg, static_cast<double>(X.rows()) * gini(pos, y.size() - pos), {}};
  std::vector<std::size_t> rows(X.rows());
  std::iota(rows.begin(), rows.end(), 0);
  b.build(rows, 0);

  CartModel model;
  model.nodes = std::move(b.nodes);
  model.dim = X.cols();
  return model;
}

double cart_score(const CartModel& model, std::span<const double> x) {
  require(x.size() == model.dim, Errc::dimension_mismatch, "cart_score dimension mismatch");
  int id = 0;
  while (!model.nodes[id].leaf) {
    const auto& n = model.nodes[id];
    id = (x[n.split_feature] <= n.split_threshold) ? n.left : n.right;
  }
  return model.nodes[id].positive_fraction;
}

}  // namespace gmotelab
