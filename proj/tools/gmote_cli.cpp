#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gmotelab/gmotelab.h"

namespace {

int fail(const char* what) {
  std::cerr << what << ": " << gml_last_error() << "\n";
  return 1;
}

void print_and_free(char* text) {
  if (!text) return;
  std::cout << text;
  gml_string_free(text);
}

int write_file(const std::string& path, char* text) {
  if (!text) return 0;
  std::ofstream out(path, std::ios::binary);
  out << text;
  gml_string_free(text);
  if (!out.good()) {
    std::cerr << "cannot write " << path << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resampling laboratory for imbalanced binary classification"};
  app.set_version_flag("--version", std::string("gmote ") + gml_version());
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a benchmark experiment from a JSON config");
  std::string run_config, run_out;
  std::int64_t run_seed = -1;
  run->add_option("--config", run_config, "Experiment JSON file")->required();
  run->add_option("--seed", run_seed, "Master seed override (>= 0)");
  run->add_option("--out", run_out, "Results CSV path override");

  // report
  auto* report = app.add_subcommand("report", "Mean tables per classifier for one metric");
  std::string rep_results, rep_metric = "f1", rep_csv;
  report->add_option("--results", rep_results, "Results CSV from 'run'")->required();
  report->add_option("--metric", rep_metric,
                     "accuracy, precision, recall, f1, gmean, or auc");
  report->add_option("--csv", rep_csv, "Also write the table as CSV to this path");

  // compare
  auto* compare = app.add_subcommand("compare", "Signed-rank tests against a baseline method");
  std::string cmp_results, cmp_baseline = "GMOTE", cmp_csv;
  bool cmp_folds = false;
  compare->add_option("--results", cmp_results, "Results CSV from 'run'")->required();
  compare->add_option("--baseline", cmp_baseline, "Baseline method (default GMOTE)");
  compare->add_flag("--pair-folds", cmp_folds, "Pair over folds instead of dataset means");
  compare->add_option("--csv", cmp_csv, "Also write the comparison as CSV to this path");

  // toy
  auto* toy = app.add_subcommand("toy", "Write a synthetic 2-D benchmark dataset as CSV");
  int toy_which = 1;
  std::uint64_t toy_seed = 0;
  std::string toy_out;
  toy->add_option("--which", toy_which, "1 = Gaussian blobs in a field, 2 = interlocking arcs")
      ->check(CLI::Range(1, 2))
      ->required();
  toy->add_option("--seed", toy_seed, "Generator seed");
  toy->add_option("--out", toy_out, "Output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    std::ifstream in(run_config);
    if (!in.good()) {
      std::cerr << "cannot open " << run_config << "\n";
      return 1;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    if (gml_experiment_run(text.c_str(), run_out.empty() ? nullptr : run_out.c_str(),
                           run_seed) != GML_OK)
      return fail("run failed");
    std::cout << "results written\n";
    return 0;
  }

  if (report->parsed()) {
    char* text = nullptr;
    char* csv = nullptr;
    if (gml_report_render(rep_results.c_str(), rep_metric.c_str(), &text,
                          rep_csv.empty() ? nullptr : &csv) != GML_OK)
      return fail("report failed");
    print_and_free(text);
    return rep_csv.empty() ? 0 : write_file(rep_csv, csv);
  }

  if (compare->parsed()) {
    char* text = nullptr;
    char* csv = nullptr;
    if (gml_compare_render(cmp_results.c_str(), cmp_baseline.c_str(), cmp_folds ? 1 : 0, &text,
                           cmp_csv.empty() ? nullptr : &csv) != GML_OK)
      return fail("compare failed");
    print_and_free(text);
    return cmp_csv.empty() ? 0 : write_file(cmp_csv, csv);
  }

  if (toy->parsed()) {
    if (gml_toy_write(toy_which, toy_seed, toy_out.c_str()) != GML_OK)
      return fail("toy generation failed");
    std::cout << "dataset written to " << toy_out << "\n";
    return 0;
  }
  return 0;
}
