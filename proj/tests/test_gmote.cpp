#include <cmath>

#include "doctest.h"
#include "gmotelab/gmote.hpp"
#include "helpers.hpp"

using namespace gmotelab;
using namespace testutil;

namespace {

Matrix two_blob_minority(std::size_t n, std::uint64_t seed) {
  RngStream rng(seed, "gmote-data");
  return vstack(gaussian_blob({0.0, 0.0}, 0.6, n / 2, rng),
                gaussian_blob({6.0, 2.0}, 0.9, n - n / 2, rng));
}

}  // namespace

TEST_SUITE("gmote") {

TEST_CASE("fit separates outliers and refits on the retained rows") {
  // one unit blob plus three planted points at radius 4 (squared Mahalanobis
  // distance ~13 even after they inflate the fitted covariance, far beyond
  // the 5.99 cutoff at alpha=0.05); points this moderate cannot claim a
  // component of their own once the count is pinned to one
  RngStream rng(11, "gmote-data");
  Matrix P = gaussian_blob({0.0, 0.0}, 1.0, 80, rng);
  Matrix spikes(3, 2);
  spikes(0, 0) = 4.0;
  spikes(1, 0) = -2.0;
  spikes(1, 1) = 3.4641;
  spikes(2, 0) = -2.0;
  spikes(2, 1) = -3.4641;
  P.append_rows(spikes);

  GmoteConfig cfg;
  cfg.seed = 5;
  cfg.c_range = {1};
  GmoteModel model = gmote_fit(P, cfg);

  CHECK(model.outlier_report.flags.size() == 83);
  CHECK(model.outlier_report.flags[80]);
  CHECK(model.outlier_report.flags[81]);
  CHECK(model.outlier_report.flags[82]);
  CHECK(model.retained_count == 83 - model.outlier_report.flagged_count());
  CHECK(model.retained_count <= 80);
  CHECK_FALSE(model.all_flagged_fallback);
  CHECK(model.cleaned_gmm.n_fit == model.retained_count);
}

TEST_CASE("generated count is exactly ceil(gamma * minority)") {
  Matrix P = two_blob_minority(60, 21);
  for (double gamma : {0.5, 1.0, 1.7, 2.0}) {
    GmoteConfig cfg;
    cfg.gamma = gamma;
    cfg.seed = 9;
    GmoteModel model = gmote_fit(P, cfg);
    SyntheticSet out = gmote_generate(model, P.rows(), cfg);
    CHECK(out.instances.rows() ==
          static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(P.rows()))));
    CHECK(out.instances.cols() == 2);
    CHECK(out.method == "GMOTE");
  }
}

TEST_CASE("every generated row passes an independent inlier re-check") {
  Matrix P = two_blob_minority(70, 33);
  GmoteConfig cfg;
  cfg.gamma = 2.0;
  cfg.seed = 17;
  GmoteModel model = gmote_fit(P, cfg);
  SyntheticSet out = gmote_generate(model, P.rows(), cfg);
  OutlierPolicy policy = cfg.effective_policy();
  for (std::size_t i = 0; i < out.instances.rows(); ++i)
    CHECK(is_inlier(out.instances.row(i), model.cleaned_gmm, policy));
  // candidates are drawn in batches, so a few may be left unused at the end
  CHECK(out.attempts >= out.instances.rows() + out.rejected);
}

TEST_CASE("oversample is deterministic in the seed") {
  Matrix P = two_blob_minority(50, 44);
  GmoteConfig cfg;
  cfg.seed = 123;
  SyntheticSet a = gmote_oversample(P, cfg);
  SyntheticSet b = gmote_oversample(P, cfg);
  CHECK(a.instances == b.instances);
  cfg.seed = 124;
  SyntheticSet c = gmote_oversample(P, cfg);
  CHECK_FALSE(a.instances == c.instances);
}

TEST_CASE("all-flagged fit falls back to the full minority set") {
  Matrix P = two_blob_minority(40, 55);
  GmoteConfig cfg;
  cfg.alpha = 0.999999;  // flags everything that is not exactly at the mean
  cfg.c_range = {1};     // one broad component: no point sits at its center
  cfg.seed = 3;
  GmoteModel model = gmote_fit(P, cfg);
  CHECK(model.all_flagged_fallback);
  CHECK(model.retained_count == P.rows());
}

TEST_CASE("rejection sampling starves under an impossible budget") {
  Matrix P = two_blob_minority(40, 66);
  GmoteConfig cfg;
  cfg.alpha = 0.999999;  // nearly every candidate is rejected
  cfg.max_attempts_factor = 2;
  cfg.seed = 8;
  GmoteModel model = gmote_fit(P, cfg);
  CHECK_THROWS_AS(gmote_generate(model, P.rows(), cfg), Error);
}

TEST_CASE("hotelling policy variant runs end to end") {
  Matrix P = two_blob_minority(64, 77);
  GmoteConfig cfg;
  cfg.policy.statistic = TailStatistic::hotelling_f;
  cfg.policy.aggregate = TailAggregate::max_over_components;
  cfg.c_range = {2};  // keep both components large enough for the F statistic
  cfg.seed = 10;
  SyntheticSet out = gmote_oversample(P, cfg);
  CHECK(out.instances.rows() == 64);
}

TEST_CASE("minority set must be large enough to fit") {
  Matrix tiny(1, 2);
  tiny(0, 0) = 1.0;
  GmoteConfig cfg;
  CHECK_THROWS_AS(gmote_fit(tiny, cfg), Error);
}

TEST_CASE("alpha zero flags nothing and accepts everything") {
  Matrix P = two_blob_minority(30, 88);
  GmoteConfig cfg;
  cfg.alpha = 0.0;
  cfg.seed = 4;
  GmoteModel model = gmote_fit(P, cfg);
  CHECK(model.outlier_report.flagged_count() == 0);
  CHECK(model.retained_count == P.rows());
  CHECK_FALSE(model.all_flagged_fallback);
  SyntheticSet out = gmote_generate(model, P.rows(), cfg);
  CHECK(out.instances.rows() == 30);
  CHECK(out.rejected == 0);
}

TEST_CASE("parameters outside their domains are rejected") {
  Matrix P = two_blob_minority(30, 89);
  GmoteConfig cfg;
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(gmote_fit(P, cfg), Error);
  cfg.alpha = 0.05;
  cfg.gamma = -0.5;
  CHECK_THROWS_AS(gmote_oversample(P, cfg), Error);
  cfg.gamma = 0.0;  // valid: empty synthetic set
  SyntheticSet out = gmote_oversample(P, cfg);
  CHECK(out.instances.rows() == 0);
}

}  // TEST_SUITE
