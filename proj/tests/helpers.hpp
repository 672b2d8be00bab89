// Shared test utilities: quadrature, brute-force oracles, data generators.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "gmotelab/matrix.hpp"
#include "gmotelab/rng.hpp"

namespace testutil {

using gmotelab::Matrix;
using gmotelab::RngStream;
using gmotelab::Vector;

// Composite Simpson integration of f over [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// log Gamma via Lanczos (g=7), independent of the library under test.
inline double lgamma_ref(double x) {
  static const double c[9] = {0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059, 12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6,
                              1.5056327351493116e-7};
  if (x < 0.5) return std::log(M_PI / std::sin(M_PI * x)) - lgamma_ref(1.0 - x);
  x -= 1.0;
  double a = c[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += c[i] / (x + i);
  return 0.5 * std::log(2.0 * M_PI) + (x + 0.5) * std::log(t) - t + std::log(a);
}

// Standard normal upper tail by quadrature over the (smooth) density.
inline double normal_sf_ref(double z) {
  auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
  if (z < 0.0) return 1.0 - normal_sf_ref(-z);
  if (z > 12.0) return 0.0;
  return 0.5 - simpson(pdf, 0.0, z, 20000);
}

// Chi-square upper tail via the parts-integration recurrence
//   P(chi^2_{k+2} > x) = P(chi^2_k > x) + (x/2)^{k/2} e^{-x/2} / Gamma(k/2+1)
// anchored at the k=1 (normal tail) and k=2 (exponential) closed forms.
inline double chi_sq_sf_ref(double x, int k) {
  if (x <= 0.0) return 1.0;
  double sf;
  int base;
  if (k % 2) {
    sf = 2.0 * normal_sf_ref(std::sqrt(x));
    base = 1;
  } else {
    sf = std::exp(-0.5 * x);
    base = 2;
  }
  for (int j = base; j < k; j += 2)
    sf += std::exp(0.5 * j * std::log(0.5 * x) - 0.5 * x - lgamma_ref(0.5 * j + 1.0));
  return std::min(sf, 1.0);
}

// F distribution upper tail by quadrature; the substitution t = s^2 removes
// the endpoint singularity when d1 = 1.
inline double f_sf_ref(double x, int d1, int d2) {
  if (x <= 0.0) return 1.0;
  double a = 0.5 * d1, b = 0.5 * d2;
  double lc = a * std::log(static_cast<double>(d1) / d2) + lgamma_ref(a + b) - lgamma_ref(a) -
              lgamma_ref(b);
  auto integrand = [=](double s) {
    if (s <= 0.0) return d1 == 1 ? 2.0 * std::exp(lc) : 0.0;
    return 2.0 * std::exp(lc + (2.0 * a - 1.0) * std::log(s) -
                          (a + b) * std::log1p(s * s * d1 / d2));
  };
  return 1.0 - simpson(integrand, 0.0, std::sqrt(x), 20000);
}

// Random matrix with entries ~ N(0, 1) * scale + shift.
inline Matrix random_matrix(std::size_t n, std::size_t m, RngStream& rng, double scale = 1.0,
                            double shift = 0.0) {
  Matrix X(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) X(i, j) = rng.normal() * scale + shift;
  return X;
}

// Gaussian blob centered at `center` with isotropic sd.
inline Matrix gaussian_blob(const Vector& center, double sd, std::size_t n, RngStream& rng) {
  Matrix X(n, center.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < center.size(); ++j) X(i, j) = center[j] + sd * rng.normal();
  return X;
}

inline Matrix vstack(const Matrix& A, const Matrix& B) {
  Matrix out = A;
  out.append_rows(B);
  return out;
}

// Brute-force k nearest neighbors of row i within X (self excluded), by
// squared distance then index.
inline std::vector<std::size_t> brute_knn(const Matrix& X, std::size_t i, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t j = 0; j < X.rows(); ++j) {
    if (j == i) continue;
    d.emplace_back(gmotelab::squared_distance(X.row(i), X.row(j)), j);
  }
  std::sort(d.begin(), d.end());
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < std::min(k, d.size()); ++j) out.push_back(d[j].second);
  return out;
}

// Exact one-sided (greater) Wilcoxon signed-rank p-value by enumerating all
// 2^n sign assignments over the average ranks of |d|, zeros dropped first.
inline double wilcoxon_enum_ref(const std::vector<double>& diffs) {
  std::vector<double> mag;
  for (double d : diffs)
    if (d != 0.0) mag.push_back(std::fabs(d));
  const std::size_t n = mag.size();
  if (n == 0) return 1.0;

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return mag[a] < mag[b]; });
  std::vector<double> rank(n);
  std::size_t s = 0;
  while (s < n) {
    std::size_t e = s;
    while (e + 1 < n && mag[idx[e + 1]] == mag[idx[s]]) ++e;
    double avg = 0.5 * (s + e) + 1.0;
    for (std::size_t t = s; t <= e; ++t) rank[idx[t]] = avg;
    s = e + 1;
  }

  double w_obs = 0.0;
  {
    std::size_t j = 0;
    for (double d : diffs) {
      if (d == 0.0) continue;
      if (d > 0.0) w_obs += rank[j];
      ++j;
    }
  }

  std::size_t hits = 0;
  const std::uint64_t total = 1ull << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double w = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (mask & (1ull << j)) w += rank[j];
    if (w >= w_obs - 1e-12) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace testutil
