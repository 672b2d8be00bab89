#include "gmotelab/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace gmotelab {

NeighborIndex knn_index(const Matrix& query, const Matrix& reference, std::size_t k,
                        bool exclude_same_index) {
  require(query.cols() == reference.cols(), Errc::dimension_mismatch,
          "knn_index dimension mismatch");
  require(k >= 1, Errc::invalid_argument, "knn_index requires k >= 1");

  NeighborIndex out;
  out.k = k;
  out.indices.resize(query.rows());
  out.distances.resize(query.rows());

  std::vector<std::pair<double, std::size_t>> cand;
  for (std::size_t i = 0; i < query.rows(); ++i) {
    cand.clear();
    for (std::size_t j = 0; j < reference.rows(); ++j) {
      if (exclude_same_index && j == i) continue;
      cand.emplace_back(squared_distance(query.row(i), reference.row(j)), j);
    }
    std::size_t kk = std::min(k, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + kk, cand.end());
    out.indices[i].reserve(kk);
    out.distances[i].reserve(kk);
    for (std::size_t j = 0; j < kk; ++j) {
      out.indices[i].push_back(cand[j].second);
      out.distances[i].push_back(std::sqrt(cand[j].first));
    }
  }
  return out;
}

ClusterAssignment kmeans(const Matrix& X, std::size_t k, RngStream& rng) {
  const std::size_t n = X.rows(), m = X.cols();
  require(k >= 1, Errc::invalid_argument, "kmeans requires k >= 1");
  require(k <= n, Errc::invalid_argument, "kmeans requires k <= N");

  // k-means++ seeding
  std::vector<std::size_t> seeds;
  std::vector<bool> used(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t first = rng.uniform_int(n);
  seeds.push_back(first);
  used[first] = true;
  while (seeds.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(X.row(i), X.row(seeds.back())));
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
    if (pick == n)
      for (std::size_t i = 0; i < n; ++i)
        if (!used[i]) {
          pick = i;
          break;
        }
    seeds.push_back(pick);
    used[pick] = true;
  }

  ClusterAssignment out;
  out.centers = X.select_rows(seeds);
  out.labels.assign(n, 0);

  for (int iter = 0; iter < 10; ++iter) {
    // assignment
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_j = 0;
      for (std::size_t j = 0; j < k; ++j) {
        double d = squared_distance(X.row(i), out.centers.row(j));
        if (d < best) {
          best = d;
          best_j = static_cast<int>(j);
        }
      }
      out.labels[i] = best_j;
    }
    // update
    Matrix next(k, m);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto r = X.row(i);
      for (std::size_t a = 0; a < m; ++a) next(out.labels[i], a) += r[a];
      ++counts[out.labels[i]];
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) {
        // empty cluster: reseat on the point farthest from its center
        double worst = -1.0;
        std::size_t worst_i = 0;
        for (std::size_t i = 0; i < n; ++i) {
          double d = squared_distance(X.row(i), out.centers.row(out.labels[i]));
          if (d > worst) {
            worst = d;
            worst_i = i;
          }
        }
        for (std::size_t a = 0; a < m; ++a) next(j, a) = X(worst_i, a);
        continue;
      }
      for (std::size_t a = 0; a < m; ++a) next(j, a) /= static_cast<double>(counts[j]);
    }
    double movement = 0.0;
    for (std::size_t j = 0; j < k; ++j)
      movement = std::max(movement, squared_distance(next.row(j), out.centers.row(j)));
    out.centers = std::move(next);
    if (movement < 1e-8 * 1e-8) break;
  }
  // final assignment against the last centers
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_j = 0;
    for (std::size_t j = 0; j < k; ++j) {
      double d = squared_distance(X.row(i), out.centers.row(j));
      if (d < best) {
        best = d;
        best_j = static_cast<int>(j);
      }
    }
    out.labels[i] = best_j;
  }
  return out;
}

ClusterAssignment dbscan(const Matrix& X, double eps, std::size_t min_pts) {
  require(eps > 0.0, Errc::invalid_argument, "dbscan requires eps > 0");
  const std::size_t n = X.rows();
  const double eps2 = eps * eps;

  auto neighbors_of = [&](std::size_t i) {
    std::vector<std::size_t> nb;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && squared_distance(X.row(i), X.row(j)) <= eps2) nb.push_back(j);
    return nb;
  };

  constexpr int kUndefined = -2, kNoise = -1;
  ClusterAssignment out;
  out.labels.assign(n, kUndefined);
  int cluster = 0;

  for (std::size_t i = 0; i < n; ++i) {
    if (out.labels[i] != kUndefined) continue;
    auto nb = neighbors_of(i);
    if (nb.size() + 1 < min_pts) {  // the point itself counts
      out.labels[i] = kNoise;
      continue;
    }
    out.labels[i] = cluster;
    std::deque<std::size_t> frontier(nb.begin(), nb.end());
    while (!frontier.empty()) {
      std::size_t j = frontier.front();
      frontier.pop_front();
      if (out.labels[j] == kNoise) out.labels[j] = cluster;
      if (out.labels[j] != kUndefined) continue;
      out.labels[j] = cluster;
      auto nb2 = neighbors_of(j);
      if (nb2.size() + 1 >= min_pts)
        frontier.insert(frontier.end(), nb2.begin(), nb2.end());
    }
    ++cluster;
  }
  return out;
}

}  // namespace gmotelab
