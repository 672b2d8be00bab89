#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gmotelab/matrix.hpp"
#include "gmotelab/neighbors.hpp"
#include "gmotelab/rng.hpp"

namespace gmotelab {

// Parameters for every oversampling method behind one tag-dispatched bundle.
// Call default_params(method) to get the per-method defaults.
struct ResamplerParams {
  std::string method = "SMOTE";  // ROS, SMOTE, BLSMOTE, SLSMOTE, DBSMOTE, C-SMOTE, RBO
  std::size_t k = 3;             // interpolation neighbors (SLSMOTE default 5)
  std::size_t c = 5;             // classification neighborhood (BLSMOTE, SLSMOTE)
  std::size_t min_pts = 4;       // DBSMOTE density threshold
  std::size_t clusters = 3;      // C-SMOTE k-means clusters
  double gamma = 1.0;            // RBO potential width
  std::size_t iterations = 50;   // RBO walk length
  double step = 0.05;            // RBO step size
  double p = 0.05;               // RBO: accepted and stored; the walk does not use it
};

ResamplerParams default_params(const std::string& method);

// How each synthetic row was produced: the minority seed row, the partner row
// (-1 when the method copies a single point), and the interpolation coefficient,
// so each output row can be re-derived as seed + gap * (partner - seed).
struct RowProvenance {
  std::size_t seed_index = 0;
  std::ptrdiff_t neighbor_index = -1;
  double gap = 0.0;
  double potential_start = 0.0;  // RBO: mutual potential at the walk start
  double potential_end = 0.0;    // RBO: mutual potential at the walk endpoint
};

enum class BorderLabel { safe, danger, noise };

struct ResampleOutput {
  Matrix synthetic;
  std::vector<RowProvenance> provenance;
  bool used_fallback = false;
  std::string fallback_note;
  std::vector<BorderLabel> border_labels;  // per minority row; BLSMOTE only
};

ResampleOutput ros(const Matrix& X_min, std::size_t n_synth, RngStream& rng);
ResampleOutput smote(const Matrix& X_min, std::size_t K, std::size_t n_synth, RngStream& rng);
ResampleOutput borderline_smote(const Matrix& X_min, const Matrix& X_maj, std::size_t K,
                                std::size_t C, std::size_t n_synth, RngStream& rng);
ResampleOutput safe_level_smote(const Matrix& X_min, const Matrix& X_maj, std::size_t K,
                                std::size_t C, std::size_t n_synth, RngStream& rng);
ResampleOutput dbsmote(const Matrix& X_min, std::size_t min_pts, std::size_t n_synth,
                       RngStream& rng);
ResampleOutput cluster_smote(const Matrix& X_min, std::size_t clusters, std::size_t K,
                             std::size_t n_synth, RngStream& rng);
ResampleOutput rbo(const Matrix& X_min, const Matrix& X_maj, double gamma,
                   std::size_t iterations, double step, std::size_t n_synth, RngStream& rng);

// Tag dispatch over the methods above. Unknown tags raise InvalidArgument.
ResampleOutput oversample(const ResamplerParams& params, const Matrix& X_min,
                          const Matrix& X_maj, std::size_t n_synth, RngStream& rng);

}  // namespace gmotelab
