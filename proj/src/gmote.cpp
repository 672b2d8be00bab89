#include "gmotelab/gmote.hpp"

#include <algorithm>
#include <cmath>

namespace gmotelab {

GmoteModel gmote_fit(const Matrix& P, const GmoteConfig& cfg) {
  require(P.rows() >= 2, Errc::too_few_instances, "gmote_fit needs at least 2 minority rows");
  OutlierPolicy policy = cfg.effective_policy();
  RngStream rng(cfg.seed, "gmote");

  GmoteModel model;
  {
    RngStream sub = rng.derive("init");
    auto range = cfg.c_range.empty() ? default_c_range(P.rows(), P.cols()) : cfg.c_range;
    model.initial_gmm = select_by_bic(P, range, cfg.em, sub);
  }
  model.outlier_report = detect_outliers(P, model.initial_gmm, policy);

  std::vector<std::size_t> retained;
  for (std::size_t i = 0; i < P.rows(); ++i)
    if (!model.outlier_report.flags[i]) retained.push_back(i);

  if (retained.empty()) {
    model.all_flagged_fallback = true;
    retained.resize(P.rows());
    for (std::size_t i = 0; i < P.rows(); ++i) retained[i] = i;
  }

  Matrix cleaned = P.select_rows(retained);
  model.retained_count = retained.size();
  {
    RngStream sub = rng.derive("refit");
    auto range =
        cfg.c_range.empty() ? default_c_range(cleaned.rows(), cleaned.cols()) : cfg.c_range;
    model.cleaned_gmm = select_by_bic(cleaned, range, cfg.em, sub);
  }
  return model;
}

SyntheticSet gmote_generate(const GmoteModel& model, std::size_t minority_count,
                            const GmoteConfig& cfg) {
  require(cfg.gamma >= 0.0, Errc::invalid_argument, "sampling ratio must be >= 0");
  OutlierPolicy policy = cfg.effective_policy();
  SyntheticSet out;
  out.method = "GMOTE";
  out.seed = cfg.seed;
  out.instances = Matrix(0, model.cleaned_gmm.dim);

  const std::size_t target =
      static_cast<std::size_t>(std::ceil(cfg.gamma * static_cast<double>(minority_count)));
  if (target == 0) return out;

  RngStream rng = RngStream(cfg.seed, "gmote").derive("generate");
  const std::size_t max_attempts = cfg.max_attempts_factor * target;

  while (out.instances.rows() < target) {
    std::size_t remaining = target - out.instances.rows();
    std::size_t batch = std::max<std::size_t>(64, remaining);
    if (out.attempts + batch > max_attempts) batch = max_attempts - out.attempts;
    require(batch > 0, Errc::acceptance_starvation,
            "rejection sampling exceeded max_attempts_factor * target");

    Matrix candidates = gmm_sample(model.cleaned_gmm, batch, rng);
    out.attempts += batch;
    for (std::size_t i = 0; i < candidates.rows() && out.instances.rows() < target; ++i) {
      if (is_inlier(candidates.row(i), model.cleaned_gmm, policy))
        out.instances.push_row(candidates.row(i));
      else
        ++out.rejected;
    }
  }
  return out;
}

SyntheticSet gmote_oversample(const Matrix& P, const GmoteConfig& cfg) {
  GmoteModel model = gmote_fit(P, cfg);
  return gmote_generate(model, P.rows(), cfg);
}

}  // namespace gmotelab
