#pragma once

#include <vector>

#include "gmotelab/matrix.hpp"
#include "gmotelab/rng.hpp"

namespace gmotelab {

struct NeighborIndex {
  std::size_t k = 0;
  // indices(i, j) = j-th nearest reference row for query row i; distances
  // non-decreasing per row.
  std::vector<std::vector<std::size_t>> indices;
  std::vector<std::vector<double>> distances;
};

// Brute-force Euclidean k nearest neighbors. When exclude_same_index is set,
// query row i skips reference row i (use when the query rows are the leading
// rows of the reference set, or the same set).
NeighborIndex knn_index(const Matrix& query, const Matrix& reference, std::size_t k,
                        bool exclude_same_index = false);

struct ClusterAssignment {
  std::vector<int> labels;  // -1 = noise (DBSCAN); cluster ids contiguous from 0
  Matrix centers;           // k-means only
};

// Lloyd iterations with k-means++ seeding; at most 10 iterations or centroid
// movement below 1e-8.
ClusterAssignment kmeans(const Matrix& X, std::size_t k, RngStream& rng);

// Classical density-reachability DBSCAN with Euclidean distance (<= eps).
ClusterAssignment dbscan(const Matrix& X, double eps, std::size_t min_pts);

}  // namespace gmotelab
