#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmotelab/dataset.hpp"
#include "gmotelab/evalstats.hpp"
#include "gmotelab/gmote.hpp"
#include "gmotelab/resamplers.hpp"

namespace gmotelab {

struct DatasetSource {
  enum class Kind { keel, csv, toy1, toy2 };
  Kind kind = Kind::keel;
  std::string name;          // display name; defaults to the loaded record's name
  std::string path;          // keel/csv
  std::string label_column;  // csv
  std::string positive_label;
  std::uint64_t seed = 0;  // toy generators
};

struct MethodSpec {
  std::string name = "SMOTE";  // Original, ROS, SMOTE, BLSMOTE, SLSMOTE,
                               // DBSMOTE, C-SMOTE, RBO, GMOTE
  ResamplerParams params;
  GmoteConfig gmote;
  double ratio = 1.0;              // synthetic rows = ceil(ratio * |minority|)
  std::optional<bool> normalize;   // unset = default routing for the method
};

struct ExperimentSpec {
  std::vector<DatasetSource> datasets;
  std::vector<MethodSpec> methods;  // "Original" is prepended when missing
  std::vector<std::string> classifiers = {"cart", "logreg", "svm"};
  std::size_t folds = 5;
  std::size_t repeats = 1;
  std::uint64_t master_seed = 0;
  std::string output_path = "results.csv";
};

// Strict parser: unknown keys anywhere in the document are rejected.
ExperimentSpec parse_experiment_json(const std::string& text);

// Option parsing for single-method use (the C API): the same keys as a method
// entry in the experiment config. Empty text means defaults.
GmoteConfig parse_gmote_options_json(const std::string& text);
ResamplerParams parse_resampler_options_json(const std::string& method, const std::string& text);

struct RunResult {
  std::string dataset;
  std::string method;
  std::string classifier;
  std::size_t repeat = 0;
  std::size_t fold = 0;
  bool failed = false;  // cell aborted; metric fields are absent
  std::optional<double> accuracy, precision, recall, f1, gmean, auc;
  std::size_t n_synth = 0;
  std::size_t n_outliers = 0;
  bool fallback = false;
  std::string note;  // failure diagnostics; not persisted
};

// Whether a method's pipeline applies (0,1) train-range normalization when the
// spec does not override it: the interpolation-based SMOTE family does, while
// ROS, RBO, GMOTE, and the raw baseline run on original coordinates.
bool default_normalization(const std::string& method);

std::vector<RunResult> run_experiment(const ExperimentSpec& spec);

void write_results_csv(const std::vector<RunResult>& results, const std::string& path);
std::vector<RunResult> read_results_csv(const std::string& path);

// Mean-per-(classifier, method, dataset) tables for one metric, one table per
// classifier: methods as rows, datasets as columns, best/worst flagged per
// column. NA cells stay NA; partial cells carry their NA count in the text.
struct ReportTables {
  std::string text;
  std::string csv;
};

ReportTables summarize(const std::vector<RunResult>& results, const std::string& metric);

// Paired one-sided signed-rank tests of the baseline against every other
// method, in both directions, over per-dataset mean scores and ranks.
struct ComparisonCell {
  std::string classifier;
  std::string metric;
  std::string method;
  bool testable = false;
  double p_score_plus = 1.0;   // baseline better on scores
  double p_score_minus = 1.0;  // method better on scores
  double p_rank_plus = 1.0;    // baseline better on ranks
  double p_rank_minus = 1.0;   // method better on ranks
  char direction = ' ';        // '+', '-', or ' ' from the score test
  int stars = 0;               // 1/2/3 at p < 0.05/0.01/0.001
};

enum class Pairing { dataset_cells, folds };

struct ComparisonReport {
  std::vector<ComparisonCell> cells;
  std::string text;
  std::string csv;
};

ComparisonReport compare(const std::vector<RunResult>& results,
                         const std::string& baseline = "GMOTE",
                         Pairing pairing = Pairing::dataset_cells);

}  // namespace gmotelab
