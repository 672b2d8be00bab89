#include "gmotelab/gmotelab.h"

#include <cctype>
#include <cstdlib>
#include <cstring>
#include <string>

#include "gmotelab/dataset.hpp"
#include "gmotelab/gmote.hpp"
#include "gmotelab/harness.hpp"
#include "gmotelab/resamplers.hpp"

namespace {

thread_local std::string g_last_error;

gml_status status_of(gmotelab::Errc code) {
  using gmotelab::Errc;
  switch (code) {
    case Errc::invalid_argument: return GML_ERR_INVALID_ARGUMENT;
    case Errc::dimension_mismatch:
    case Errc::length_mismatch: return GML_ERR_DIMENSION_MISMATCH;
    case Errc::not_positive_definite: return GML_ERR_NOT_POSITIVE_DEFINITE;
    case Errc::empty_data:
    case Errc::empty_counts: return GML_ERR_EMPTY_DATA;
    case Errc::too_many_components: return GML_ERR_TOO_MANY_COMPONENTS;
    case Errc::too_few_instances:
    case Errc::class_too_small: return GML_ERR_TOO_FEW_INSTANCES;
    case Errc::too_few_minority: return GML_ERR_TOO_FEW_MINORITY;
    case Errc::no_danger_points:
    case Errc::no_clusters: return GML_ERR_TOO_FEW_MINORITY;
    case Errc::insufficient_sample_size: return GML_ERR_INSUFFICIENT_SAMPLE_SIZE;
    case Errc::acceptance_starvation: return GML_ERR_ACCEPTANCE_STARVATION;
    case Errc::single_class: return GML_ERR_SINGLE_CLASS;
    case Errc::io_error: return GML_ERR_IO;
    case Errc::missing_column:
    case Errc::malformed_header:
    case Errc::non_numeric_feature:
    case Errc::parse_error: return GML_ERR_PARSE;
    case Errc::unknown: return GML_ERR_OTHER;
  }
  return GML_ERR_OTHER;
}

template <typename Fn>
gml_status guarded(Fn&& fn) {
  try {
    fn();
    return GML_OK;
  } catch (const gmotelab::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GML_ERR_OTHER;
  } catch (...) {
    g_last_error = "unknown failure";
    return GML_ERR_OTHER;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

double* dup_matrix(const gmotelab::Matrix& m) {
  double* out = static_cast<double*>(std::malloc(sizeof(double) * m.rows() * m.cols()));
  if (out && !m.data().empty())
    std::memcpy(out, m.data().data(), sizeof(double) * m.rows() * m.cols());
  return out;
}

gmotelab::Matrix matrix_from(const double* data, size_t rows, size_t cols) {
  gmotelab::require(rows == 0 || data != nullptr, gmotelab::Errc::invalid_argument,
                    "null data pointer");
  gmotelab::Matrix m(rows, cols);
  if (rows > 0) std::memcpy(m.data().data(), data, sizeof(double) * rows * cols);
  return m;
}

void require_arg(bool ok, const char* what) {
  gmotelab::require(ok, gmotelab::Errc::invalid_argument, what);
}

}  // namespace

struct gml_dataset {
  gmotelab::DatasetRecord record;
};

struct gml_gmote {
  gmotelab::GmoteModel model;
  gmotelab::GmoteConfig config;
};

extern "C" {

const char* gml_version(void) { return "0.1.0"; }

const char* gml_last_error(void) { return g_last_error.c_str(); }

gml_status gml_dataset_load_keel(const char* path, gml_dataset** out) {
  return guarded([&] {
    require_arg(path && out, "path and out must be non-null");
    *out = new gml_dataset{gmotelab::load_keel(path)};
  });
}

gml_status gml_dataset_load_csv(const char* path, const char* label_column,
                                const char* positive_label, gml_dataset** out) {
  return guarded([&] {
    require_arg(path && label_column && out, "path, label_column, out must be non-null");
    *out = new gml_dataset{
        gmotelab::load_csv(path, label_column, positive_label ? positive_label : "")};
  });
}

gml_status gml_dataset_toy(int which, uint64_t seed, gml_dataset** out) {
  return guarded([&] {
    require_arg(out != nullptr, "out must be non-null");
    require_arg(which == 1 || which == 2, "which must be 1 or 2");
    *out = new gml_dataset{which == 1 ? gmotelab::toy_example1(seed)
                                      : gmotelab::toy_example2(seed)};
  });
}

gml_status gml_dataset_write_csv(const gml_dataset* d, const char* path) {
  return guarded([&] {
    require_arg(d && path, "dataset and path must be non-null");
    gmotelab::write_csv(d->record, path);
  });
}

size_t gml_dataset_rows(const gml_dataset* d) { return d ? d->record.X.rows() : 0; }
size_t gml_dataset_cols(const gml_dataset* d) { return d ? d->record.X.cols() : 0; }
double gml_dataset_imbalance_ratio(const gml_dataset* d) {
  return d ? d->record.imbalance_ratio : 0.0;
}
const char* gml_dataset_name(const gml_dataset* d) { return d ? d->record.name.c_str() : ""; }

gml_status gml_dataset_features(const gml_dataset* d, double* buffer) {
  return guarded([&] {
    require_arg(d && buffer, "dataset and buffer must be non-null");
    std::memcpy(buffer, d->record.X.data().data(),
                sizeof(double) * d->record.X.rows() * d->record.X.cols());
  });
}

gml_status gml_dataset_labels(const gml_dataset* d, int32_t* buffer) {
  return guarded([&] {
    require_arg(d && buffer, "dataset and buffer must be non-null");
    for (size_t i = 0; i < d->record.y.size(); ++i)
      buffer[i] = static_cast<int32_t>(d->record.y[i]);
  });
}

void gml_dataset_free(gml_dataset* d) { delete d; }

gml_status gml_gmote_fit(const double* minority, size_t rows, size_t cols,
                         const char* options_json, uint64_t seed, gml_gmote** out) {
  return guarded([&] {
    require_arg(out != nullptr, "out must be non-null");
    gmotelab::GmoteConfig cfg =
        gmotelab::parse_gmote_options_json(options_json ? options_json : "");
    cfg.seed = seed;
    gmotelab::Matrix P = matrix_from(minority, rows, cols);
    *out = new gml_gmote{gmotelab::gmote_fit(P, cfg), cfg};
  });
}

gml_status gml_gmote_generate(const gml_gmote* g, size_t minority_count, double** rows_out,
                              size_t* n_rows_out) {
  return guarded([&] {
    require_arg(g && rows_out && n_rows_out, "handle and outputs must be non-null");
    gmotelab::SyntheticSet synth =
        gmotelab::gmote_generate(g->model, minority_count, g->config);
    *rows_out = dup_matrix(synth.instances);
    *n_rows_out = synth.instances.rows();
  });
}

size_t gml_gmote_components(const gml_gmote* g) {
  return g ? g->model.cleaned_gmm.components.size() : 0;
}
size_t gml_gmote_flagged(const gml_gmote* g) {
  return g ? g->model.outlier_report.flagged_count() : 0;
}
size_t gml_gmote_retained(const gml_gmote* g) { return g ? g->model.retained_count : 0; }

void gml_gmote_free(gml_gmote* g) { delete g; }

gml_status gml_oversample(const char* method, const double* minority, size_t n_min,
                          const double* majority, size_t n_maj, size_t cols, size_t n_synth,
                          const char* params_json, uint64_t seed, double** rows_out,
                          size_t* n_rows_out) {
  return guarded([&] {
    require_arg(method && rows_out && n_rows_out, "method and outputs must be non-null");
    gmotelab::Matrix X_min = matrix_from(minority, n_min, cols);
    gmotelab::Matrix X_maj = matrix_from(majority, n_maj, cols);
    std::string tag(method);
    std::string options = params_json ? params_json : "";

    gmotelab::Matrix result;
    std::string upper;
    for (char c : tag)
      if (c != '-' && c != '_') upper.push_back(static_cast<char>(std::toupper(c)));
    if (upper == "GMOTE") {
      gmotelab::GmoteConfig cfg = gmotelab::parse_gmote_options_json(options);
      cfg.seed = seed;
      gmotelab::GmoteModel model = gmotelab::gmote_fit(X_min, cfg);
      // honor the requested count exactly: gamma * |P| with gamma = n/|P|
      cfg.gamma = n_min == 0 ? 1.0 : static_cast<double>(n_synth) / static_cast<double>(n_min);
      gmotelab::SyntheticSet synth = gmotelab::gmote_generate(model, n_min, cfg);
      if (synth.instances.rows() > n_synth) {
        std::vector<size_t> head(n_synth);
        for (size_t i = 0; i < n_synth; ++i) head[i] = i;
        result = synth.instances.select_rows(head);
      } else {
        result = std::move(synth.instances);
      }
    } else {
      gmotelab::ResamplerParams params =
          gmotelab::parse_resampler_options_json(tag, options);
      gmotelab::RngStream rng(seed, "oversample|" + tag);
      result = gmotelab::oversample(params, X_min, X_maj, n_synth, rng).synthetic;
    }
    *rows_out = dup_matrix(result);
    *n_rows_out = result.rows();
  });
}

gml_status gml_experiment_run(const char* config_json, const char* output_override,
                              int64_t seed_override) {
  return guarded([&] {
    require_arg(config_json != nullptr, "config_json must be non-null");
    gmotelab::ExperimentSpec spec = gmotelab::parse_experiment_json(config_json);
    if (output_override) spec.output_path = output_override;
    if (seed_override >= 0) spec.master_seed = static_cast<uint64_t>(seed_override);
    auto results = gmotelab::run_experiment(spec);
    gmotelab::write_results_csv(results, spec.output_path);
  });
}

gml_status gml_report_render(const char* results_csv_path, const char* metric, char** text_out,
                             char** csv_out) {
  return guarded([&] {
    require_arg(results_csv_path && metric, "results path and metric must be non-null");
    auto results = gmotelab::read_results_csv(results_csv_path);
    auto tables = gmotelab::summarize(results, metric);
    if (text_out) *text_out = dup_string(tables.text);
    if (csv_out) *csv_out = dup_string(tables.csv);
  });
}

gml_status gml_compare_render(const char* results_csv_path, const char* baseline,
                              int pair_over_folds, char** text_out, char** csv_out) {
  return guarded([&] {
    require_arg(results_csv_path != nullptr, "results path must be non-null");
    auto results = gmotelab::read_results_csv(results_csv_path);
    auto report = gmotelab::compare(
        results, baseline ? baseline : "GMOTE",
        pair_over_folds ? gmotelab::Pairing::folds : gmotelab::Pairing::dataset_cells);
    if (text_out) *text_out = dup_string(report.text);
    if (csv_out) *csv_out = dup_string(report.csv);
  });
}

gml_status gml_toy_write(int which, uint64_t seed, const char* path) {
  return guarded([&] {
    require_arg(path != nullptr, "path must be non-null");
    require_arg(which == 1 || which == 2, "which must be 1 or 2");
    gmotelab::write_csv(which == 1 ? gmotelab::toy_example1(seed) : gmotelab::toy_example2(seed),
                        path);
  });
}

void gml_buffer_free(double* buffer) { std::free(buffer); }
void gml_string_free(char* text) { std::free(text); }

}  // extern "C"
