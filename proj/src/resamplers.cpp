#include "gmotelab/resamplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <utility>

namespace gmotelab {

namespace {

Vector interpolate(std::span<const double> a, std::span<const double> b, double u) {
  Vector out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + u * (b[j] - a[j]);
  return out;
}

std::string canonical_tag(std::string s) {
  std::string out;
  for (char ch : s)
    if (ch != '-' && ch != '_' && ch != ' ') out.push_back(static_cast<char>(std::toupper(ch)));
  return out;
}

struct NeighborhoodCensus {
  std::vector<std::size_t> majority_counts;  // per minority row
  std::size_t c_eff = 0;
};

// For each minority row, how many of its c nearest neighbors in the combined
// minority+majority set (self excluded) are majority points.
NeighborhoodCensus census(const Matrix& X_min, const Matrix& X_maj, std::size_t C) {
  Matrix combined = X_min;
  combined.append_rows(X_maj);
  NeighborhoodCensus out;
  out.majority_counts.assign(X_min.rows(), 0);
  out.c_eff = std::min(C, combined.rows() - 1);
  if (out.c_eff == 0) return out;
  auto nn = knn_index(X_min, combined, out.c_eff, true);
  for (std::size_t i = 0; i < X_min.rows(); ++i)
    for (std::size_t j : nn.indices[i])
      if (j >= X_min.rows()) ++out.majority_counts[i];
  return out;
}

double quantile_type7(Vector v, double q) {
  require(!v.empty(), Errc::empty_data, "quantile of empty sample");
  std::sort(v.begin(), v.end());
  double h = (static_cast<double>(v.size()) - 1.0) * q;
  std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

// Quotas proportional to sizes that sum exactly to total (largest remainder,
// ties broken toward the lower index).
std::vector<std::size_t> apportion(const std::vector<std::size_t>& sizes, std::size_t total) {
  double denom = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}));
  std::vector<std::size_t> quota(sizes.size(), 0);
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t assigned = 0;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    double exact = static_cast<double>(total) * static_cast<double>(sizes[j]) / denom;
    quota[j] = static_cast<std::size_t>(exact);
    assigned += quota[j];
    rem.emplace_back(exact - static_cast<double>(quota[j]), j);
  }
  std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t t = 0; t < total - assigned; ++t) ++quota[rem[t].second];
  return quota;
}

void smote_rows(const Matrix& X_min, const NeighborIndex& nn, std::size_t k_eff,
                std::size_t n_rows, RngStream& rng, ResampleOutput& out,
                const std::vector<std::size_t>* seed_pool = nullptr) {
  for (std::size_t t = 0; t < n_rows; ++t) {
    std::size_t i = seed_pool ? (*seed_pool)[rng.uniform_int(seed_pool->size())]
                              : rng.uniform_int(X_min.rows());
    std::size_t j = nn.indices[i][rng.uniform_int(std::min(k_eff, nn.indices[i].size()))];
    double u = rng.uniform();
    Vector row = interpolate(X_min.row(i), X_min.row(j), u);
    out.synthetic.push_row(row);
    out.provenance.push_back({i, static_cast<std::ptrdiff_t>(j), u, 0.0, 0.0});
  }
}

}  // namespace

ResamplerParams default_params(const std::string& method) {
  ResamplerParams p;
  p.method = method;
  if (canonical_tag(method) == "SLSMOTE" || canonical_tag(method) == "SAFELEVELSMOTE") p.k = 5;
  return p;
}

ResampleOutput ros(const Matrix& X_min, std::size_t n_synth, RngStream& rng) {
  require(X_min.rows() >= 1, Errc::too_few_minority, "ROS needs at least one minority row");
  ResampleOutput out;
  out.synthetic = Matrix(0, X_min.cols());
  for (std::size_t t = 0; t < n_synth; ++t) {
    std::size_t i = rng.uniform_int(X_min.rows());
    out.synthetic.push_row(X_min.row(i));
    out.provenance.push_back({i, -1, 0.0, 0.0, 0.0});
  }
  return out;
}

ResampleOutput smote(const Matrix& X_min, std::size_t K, std::size_t n_synth, RngStream& rng) {
  require(X_min.rows() >= 2, Errc::too_few_minority, "SMOTE needs at least two minority rows");
  require(K >= 1, Errc::invalid_argument, "SMOTE needs K >= 1");
  ResampleOutput out;
  out.synthetic = Matrix(0, X_min.cols());
  if (n_synth == 0) return out;
  std::size_t k_eff = std::min(K, X_min.rows() - 1);
  auto nn = knn_index(X_min, X_min, k_eff, true);
  smote_rows(X_min, nn, k_eff, n_synth, rng, out);
  return out;
}

ResampleOutput borderline_smote(const Matrix& X_min, const Matrix& X_maj, std::size_t K,
                                std::size_t C, std::size_t n_synth, RngStream& rng) {
  require(X_min.rows() >= 2, Errc::too_few_minority,
          "Borderline-SMOTE needs at least two minority rows");
  require(K >= 1 && C >= 1, Errc::invalid_argument, "Borderline-SMOTE needs K, C >= 1");
  ResampleOutput out;
  out.synthetic = Matrix(0, X_min.cols());

  auto cen = census(X_min, X_maj, C);
  out.border_labels.resize(X_min.rows());
  std::vector<std::size_t> danger;
  for (std::size_t i = 0; i < X_min.rows(); ++i) {
    std::size_t m = cen.majority_counts[i];
    if (m == cen.c_eff && cen.c_eff > 0)
      out.border_labels[i] = BorderLabel::noise;
    else if (2 * m >= cen.c_eff && m < cen.c_eff) {
      out.border_labels[i] = BorderLabel::danger;
      danger.push_back(i);
    } else
      out.border_labels[i] = BorderLabel::safe;
  }

  if (n_synth == 0) return out;
  std::size_t k_eff = std::min(K, X_min.rows() - 1);
  auto nn = knn_index(X_min, X_min, k_eff, true);
  if (danger.empty()) {
    out.used_fallback = true;
    out.fallback_note = "NoDangerPoints: fell back to plain SMOTE";
    smote_rows(X_min, nn, k_eff, n_synth, rng, out);
    return out;
  }
  smote_rows(X_min, nn, k_eff, n_synth, rng, out, &danger);
  return out;
}

ResampleOutput safe_level_smote(const Matrix& X_min, const Matrix& X_maj, std::size_t K,
                                std::size_t C, std::size_t n_synth, RngStream& rng) {
  require(X_min.rows() >= 2, Errc::too_few_minority,
          "Safe-level SMOTE needs at least two minority rows");
  require(K >= 1 && C >= 1, Errc::invalid_argument, "Safe-level SMOTE needs K, C >= 1");
  ResampleOutput out;
  out.synthetic = Matrix(0, X_min.cols());
  if (n_synth == 0) return out;

  auto cen = census(X_min, X_maj, C);
  std::vector<std::size_t> safe_level(X_min.rows());
  for (std::size_t i = 0; i < X_min.rows(); ++i)
    safe_level[i] = cen.c_eff - cen.majority_counts[i];

  std::size_t k_eff = std::min(K, X_min.rows() - 1);
  auto nn = knn_index(X_min, X_min, k_eff, true);

  constexpr std::size_t kMaxPairAttempts = 1000;
  while (out.synthetic.rows() < n_synth) {
    bool emitted = false;
    for (std::size_t attempt = 0; attempt < kMaxPairAttempts; ++attempt) {
      std::size_t i = rng.uniform_int(X_min.rows());
      std::size_t j = nn.indices[i][rng.uniform_int(nn.indices[i].size())];
      std::size_t slp = safe_level[i], sln = safe_level[j];
      if (slp == 0 && sln == 0) continue;  // both unsafe: draw a new pair
      double gap;
      if (sln == 0) {
        gap = 0.0;  // seed is the safe side: duplicate it
      } else {
        double ratio = static_cast<double>(slp) / static_cast<double>(sln);
        double u = rng.uniform();
        if (ratio == 1.0)
          gap = u;
        else if (ratio > 1.0)
          gap = u / ratio;
        else
          gap = (1.0 - ratio) + u * ratio;
      }
      Vector row = interpolate(X_min.row(i), X_min.row(j), gap);
      out.synthetic.push_row(row);
      out.provenance.push_back({i, static_cast<std::ptrdiff_t>(j), gap, 0.0, 0.0});
      emitted = true;
      break;
    }
    if (!emitted) {
      // Every drawn pair was unsafe on both ends; the data offers no safe
      // direction, so finish with plain interpolation and say so.
      out.used_fallback = true;
      out.fallback_note = "AllSafeLevelsZero: fell back to plain SMOTE";
      smote_rows(X_min, nn, k_eff, n_synth - out.synthetic.rows(), rng, out);
      break;
    }
  }
  return out;
}

ResampleOutput dbsmote(const Matrix& X_min, std::size_t min_pts, std::size_t n_synth,
                       RngStream& rng) {
  require(min_pts >= 1, Errc::invalid_argument, "DBSMOTE needs min_pts >= 1");
  require(X_min.rows() >= min_pts && X_min.rows() >= 2, Errc::too_few_minority,
          "DBSMOTE needs at least min_pts minority rows");
  ResampleOutput out;
  out.synthetic = Matrix(0, X_min.cols());
  if (n_synth == 0) return out;

  const std::size_t n = X_min.rows();
  std::size_t k5 = std::min<std::size_t>(5, n - 1);
  auto nn5 = knn_index(X_min, X_min, k5, true);
  Vector fifth(n);
  for (std::size_t i = 0; i < n; ++i) fifth[i] = nn5.distances[i].back();
  double eps = quantile_type7(fifth, 0.75);

  auto run_fallback = [&](const char* note) {
    out.used_fallback = true;
    out.fallback_note = note;
    std::size_t k_eff = std::min<std::size_t>(3, n - 1);
    auto nn = knn_index(X_min, X_min, k_eff, true);
    smote_rows(X_min, nn, k_eff, n_synth, rng, out);
  };

  if (!(eps > 0.0)) {  // all neighbor distances zero: no density structure
    run_fallback("NoClusters: fell back to plain SMOTE");
    return out;
  }

  auto clus = dbscan(X_min, eps, min_pts);
  std::vector<std::size_t> keep;
  int n_clusters = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (clus.labels[i] >= 0) {
      keep.push_back(i);
      n_clusters = std::max(n_clusters, clus.labels[i] + 1);
    }
  }
  if (keep.empty()) {
    run_fallback("NoClusters: fell back to plain SMOTE");
    return out;
  }

  // Per cluster: pseudo-centroid (member nearest the mean), then shortest
  // paths from it over the eps-neighborhood graph.
  struct ClusterPaths {
    std::vector<std::size_t> members;                                   // global indices
    std::size_t centroid_local = 0;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> path;  // per member, global edge list
  };
  std::vector<ClusterPaths> cps(n_clusters);
  for (std::size_t i : keep) cps[clus.labels[i]].members.push_back(i);
  std::vector<std::size_t> local_of(n, 0);
  for (auto& cp : cps)
    for (std::size_t l = 0; l < cp.members.size(); ++l) local_of[cp.members[l]] = l;

  const double inf = std::numeric_limits<double>::infinity();
  for (auto& cp : cps) {
    const std::size_t sz = cp.members.size();
    Vector mean(X_min.cols(), 0.0);
    for (std::size_t g : cp.members)
      for (std::size_t a = 0; a < X_min.cols(); ++a) mean[a] += X_min(g, a);
    for (double& v : mean) v /= static_cast<double>(sz);
    double best = inf;
    for (std::size_t l = 0; l < sz; ++l) {
      double d = squared_distance(X_min.row(cp.members[l]), mean);
      if (d < best) {
        best = d;
        cp.centroid_local = l;
      }
    }

    std::vector<std::vector<std::pair<std::size_t, double>>> adj(sz);
    for (std::size_t a = 0; a < sz; ++a)
      for (std::size_t b = a + 1; b < sz; ++b) {
        double d = euclidean_distance(X_min.row(cp.members[a]), X_min.row(cp.members[b]));
        if (d <= eps) {
          adj[a].emplace_back(b, d);
          adj[b].emplace_back(a, d);
        }
      }

    Vector dist(sz, inf);
    std::vector<std::size_t> pred(sz, sz);
    using QItem = std::pair<double, std::size_t>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
    dist[cp.centroid_local] = 0.0;
    pq.emplace(0.0, cp.centroid_local);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (auto [v, w] : adj[u])
        if (d + w < dist[v]) {
          dist[v] = d + w;
          pred[v] = u;
          pq.emplace(dist[v], v);
        }
    }

    cp.path.resize(sz);
    for (std::size_t l = 0; l < sz; ++l) {
      if (l == cp.centroid_local) continue;
      if (dist[l] == inf) {  // defensive: DBSCAN clusters are eps-connected
        cp.path[l] = {{cp.members[cp.centroid_local], cp.members[l]}};
        continue;
      }
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      for (std::size_t cur = l; cur != cp.centroid_local; cur = pred[cur])
        edges.emplace_back(cp.members[pred[cur]], cp.members[cur]);
      std::reverse(edges.begin(), edges.end());
      cp.path[l] = std::move(edges);
    }
  }

  for (std::size_t t = 0; t < n_synth; ++t) {
    std::size_t g = keep[rng.uniform_int(keep.size())];
    const auto& cp = cps[clus.labels[g]];
    const auto& edges = cp.path[local_of[g]];
    if (edges.empty()) {  // the member is the pseudo-centroid itself
      out.synthetic.push_row(X_min.row(g));
      out.provenance.push_back({g, static_cast<std::ptrdiff_t>(g), 0.0, 0.0, 0.0});
      continue;
    }
    auto [a, b] = edges[rng.uniform_int(edges.size())];
    double u = rng.uniform();
    Vector row = interpolate(X_min.row(a), X_min.row(b), u);
    out.synthetic.push_row(row);
    out.provenance.push_back({a, static_cast<std::ptrdiff_t>(b), u, 0.0, 0.0});
  }
  return out;
}

ResampleOutput cluster_smote(const Matrix& X_min, std::size_t clusters, std::size_t K,
                             std::size_t n_synth, RngStream& rng) {
  require(X_min.rows() >= 2, Errc::too_few_minority,
          "Cluster-SMOTE needs at least two minority rows");
  require(clusters >= 1 && K >= 1, Errc::invalid_argument, "Cluster-SMOTE needs clusters, K >= 1");
  ResampleOutput out;
  out.synthetic = Matrix(0, X_min.cols());
  if (n_synth == 0) return out;

  std::size_t k_clusters = std::min(clusters, X_min.rows());
  auto assign = kmeans(X_min, k_clusters, rng);
  std::vector<std::vector<std::size_t>> members(k_clusters);
  for (std::size_t i = 0; i < X_min.rows(); ++i) members[assign.labels[i]].push_back(i);

  std::vector<std::size_t> sizes(k_clusters);
  for (std::size_t j = 0; j < k_clusters; ++j) sizes[j] = members[j].size();
  auto quota = apportion(sizes, n_synth);

  for (std::size_t j = 0; j < k_clusters; ++j) {
    if (quota[j] == 0) continue;
    const auto& mem = members[j];
    if (mem.size() == 1) {
      for (std::size_t t = 0; t < quota[j]; ++t) {
        out.synthetic.push_row(X_min.row(mem[0]));
        out.provenance.push_back({mem[0], -1, 0.0, 0.0, 0.0});
      }
      continue;
    }
    Matrix sub = X_min.select_rows(mem);
    std::size_t k_eff = std::min(K, sub.rows() - 1);
    auto nn = knn_index(sub, sub, k_eff, true);
    for (std::size_t t = 0; t < quota[j]; ++t) {
      std::size_t li = rng.uniform_int(sub.rows());
      std::size_t lj = nn.indices[li][rng.uniform_int(nn.indices[li].size())];
      double u = rng.uniform();
      Vector row = interpolate(sub.row(li), sub.row(lj), u);
      out.synthetic.push_row(row);
      out.provenance.push_back({mem[li], static_cast<std::ptrdiff_t>(mem[lj]), u, 0.0, 0.0});
    }
  }
  return out;
}

ResampleOutput rbo(const Matrix& X_min, const Matrix& X_maj, double gamma,
                   std::size_t iterations, double step, std::size_t n_synth, RngStream& rng) {
  require(X_min.rows() >= 1, Errc::too_few_minority, "RBO needs at least one minority row");
  require(gamma > 0.0 && step > 0.0, Errc::invalid_argument, "RBO needs gamma, step > 0");
  ResampleOutput out;
  out.synthetic = Matrix(0, X_min.cols());
  if (n_synth == 0) return out;

  const double g2 = gamma * gamma;
  auto potential = [&](const Matrix& S, const Vector& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < S.rows(); ++i)
      acc += std::exp(-g2 * squared_distance(S.row(i), std::span<const double>(x)));
    return acc;
  };
  auto mutual = [&](const Vector& x) { return potential(X_maj, x) - potential(X_min, x); };

  const std::size_t m = X_min.cols();
  for (std::size_t t = 0; t < n_synth; ++t) {
    std::size_t seed = rng.uniform_int(X_min.rows());
    Vector x = X_min.row_vec(seed);
    double value = mutual(x);
    const double start_value = value;
    Vector proposal(m);
    for (std::size_t it = 0; it < iterations; ++it) {
      double norm2 = 0.0;
      do {
        norm2 = 0.0;
        for (std::size_t a = 0; a < m; ++a) {
          proposal[a] = rng.normal();
          norm2 += proposal[a] * proposal[a];
        }
      } while (norm2 == 0.0);
      double inv = step / std::sqrt(norm2);
      for (std::size_t a = 0; a < m; ++a) proposal[a] = x[a] + proposal[a] * inv;
      double candidate = mutual(proposal);
      if (candidate < value) {
        x = proposal;
        value = candidate;
      }
    }
    out.synthetic.push_row(x);
    out.provenance.push_back({seed, -1, 0.0, start_value, value});
  }
  return out;
}

ResampleOutput oversample(const ResamplerParams& params, const Matrix& X_min,
                          const Matrix& X_maj, std::size_t n_synth, RngStream& rng) {
  std::string tag = canonical_tag(params.method);
  if (tag == "ROS") return ros(X_min, n_synth, rng);
  if (tag == "SMOTE") return smote(X_min, params.k, n_synth, rng);
  if (tag == "BLSMOTE" || tag == "BORDERLINESMOTE")
    return borderline_smote(X_min, X_maj, params.k, params.c, n_synth, rng);
  if (tag == "SLSMOTE" || tag == "SAFELEVELSMOTE")
    return safe_level_smote(X_min, X_maj, params.k, params.c, n_synth, rng);
  if (tag == "DBSMOTE") return dbsmote(X_min, params.min_pts, n_synth, rng);
  if (tag == "CSMOTE" || tag == "CLUSTERSMOTE")
    return cluster_smote(X_min, params.clusters, params.k, n_synth, rng);
  if (tag == "RBO")
    return rbo(X_min, X_maj, params.gamma, params.iterations, params.step, n_synth, rng);
  raise(Errc::invalid_argument, "unknown oversampling method: " + params.method);
}

}  // namespace gmotelab
