/* C interface to the resampling laboratory: datasets, GMOTE and baseline
 * oversamplers, and the cross-validated benchmark harness. All functions
 * return gml_status; on failure gml_last_error() holds a thread-local
 * message. Buffers handed out by the library are released with
 * gml_buffer_free / gml_string_free. */
#ifndef GMOTELAB_H
#define GMOTELAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef GML_API
#if defined(_WIN32)
#define GML_API __declspec(dllexport)
#else
#define GML_API __attribute__((visibility("default")))
#endif
#endif

typedef enum gml_status {
  GML_OK = 0,
  GML_ERR_INVALID_ARGUMENT = 1,
  GML_ERR_DIMENSION_MISMATCH = 2,
  GML_ERR_NOT_POSITIVE_DEFINITE = 3,
  GML_ERR_EMPTY_DATA = 4,
  GML_ERR_TOO_MANY_COMPONENTS = 5,
  GML_ERR_TOO_FEW_INSTANCES = 6,
  GML_ERR_TOO_FEW_MINORITY = 7,
  GML_ERR_INSUFFICIENT_SAMPLE_SIZE = 8,
  GML_ERR_ACCEPTANCE_STARVATION = 9,
  GML_ERR_SINGLE_CLASS = 10,
  GML_ERR_IO = 11,
  GML_ERR_PARSE = 12,
  GML_ERR_OTHER = 13
} gml_status;

GML_API const char* gml_version(void);
GML_API const char* gml_last_error(void);

/* ---------------------------------------------------------- datasets ---- */

typedef struct gml_dataset gml_dataset;

GML_API gml_status gml_dataset_load_keel(const char* path, gml_dataset** out);
GML_API gml_status gml_dataset_load_csv(const char* path, const char* label_column,
                                        const char* positive_label /* NULL = minority */,
                                        gml_dataset** out);
/* which: 1 = two Gaussian blobs in a uniform field, 2 = interlocking arcs */
GML_API gml_status gml_dataset_toy(int which, uint64_t seed, gml_dataset** out);
GML_API gml_status gml_dataset_write_csv(const gml_dataset* d, const char* path);

GML_API size_t gml_dataset_rows(const gml_dataset* d);
GML_API size_t gml_dataset_cols(const gml_dataset* d);
GML_API double gml_dataset_imbalance_ratio(const gml_dataset* d);
GML_API const char* gml_dataset_name(const gml_dataset* d);
/* buffer must hold rows*cols doubles (row-major) / rows int32 labels (1 = positive) */
GML_API gml_status gml_dataset_features(const gml_dataset* d, double* buffer);
GML_API gml_status gml_dataset_labels(const gml_dataset* d, int32_t* buffer);
GML_API void gml_dataset_free(gml_dataset* d);

/* ------------------------------------------------------------- GMOTE ---- */

typedef struct gml_gmote gml_gmote;

/* minority: row-major rows*cols. options_json (may be NULL): {"alpha": 0.05,
 * "gamma": 1.0, "statistic": "chi_square"|"hotelling_f", "aggregate":
 * "max"|"min", "c_min": 1, "c_max": 9, "restarts": 5, "max_iterations": 200,
 * "max_attempts_factor": 1000}. */
GML_API gml_status gml_gmote_fit(const double* minority, size_t rows, size_t cols,
                                 const char* options_json, uint64_t seed, gml_gmote** out);
/* Draws ceil(gamma*minority_count) filtered rows; caller frees *rows_out. */
GML_API gml_status gml_gmote_generate(const gml_gmote* g, size_t minority_count,
                                      double** rows_out, size_t* n_rows_out);
GML_API size_t gml_gmote_components(const gml_gmote* g);  /* in the cleaned fit */
GML_API size_t gml_gmote_flagged(const gml_gmote* g);     /* local outliers found */
GML_API size_t gml_gmote_retained(const gml_gmote* g);    /* rows kept for the refit */
GML_API void gml_gmote_free(gml_gmote* g);

/* One-shot oversampling. method: ROS, SMOTE, BLSMOTE, SLSMOTE, DBSMOTE,
 * C-SMOTE, RBO, or GMOTE. majority may be NULL (n_maj 0) for methods that do
 * not use it. params_json may be NULL for defaults. */
GML_API gml_status gml_oversample(const char* method, const double* minority, size_t n_min,
                                  const double* majority, size_t n_maj, size_t cols,
                                  size_t n_synth, const char* params_json, uint64_t seed,
                                  double** rows_out, size_t* n_rows_out);

/* ------------------------------------------------------- experiments ---- */

/* Runs the benchmark described by the JSON config and writes the results CSV.
 * output_override replaces the config's "output" path when non-NULL;
 * seed_override replaces "seed" when >= 0. */
GML_API gml_status gml_experiment_run(const char* config_json, const char* output_override,
                                      int64_t seed_override);
/* Per-classifier mean tables for one metric (accuracy, precision, recall, f1,
 * gmean, auc). Outputs are malloc'd strings; either out pointer may be NULL. */
GML_API gml_status gml_report_render(const char* results_csv_path, const char* metric,
                                     char** text_out, char** csv_out);
/* Paired signed-rank comparison of every method against the baseline. */
GML_API gml_status gml_compare_render(const char* results_csv_path, const char* baseline,
                                      int pair_over_folds, char** text_out, char** csv_out);
GML_API gml_status gml_toy_write(int which, uint64_t seed, const char* path);

GML_API void gml_buffer_free(double* buffer);
GML_API void gml_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* GMOTELAB_H */
