#include "gmotelab/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "gmotelab/learners.hpp"
#include "json.hpp"

namespace gmotelab {

namespace {

using nlohmann::json;

const std::vector<std::string> kCanonicalMethods = {"ORIGINAL", "ROS",    "SMOTE",
                                                    "BLSMOTE",  "SLSMOTE", "DBSMOTE",
                                                    "CSMOTE",   "RBO",     "GMOTE"};
const std::vector<std::string> kMetrics = {"accuracy", "precision", "recall",
                                           "f1",       "gmean",     "auc"};
const std::vector<std::string> kClassifierOrder = {"cart", "logreg", "svm"};

std::string canon(const std::string& s) {
  std::string out;
  for (char ch : s)
    if (ch != '-' && ch != '_' && ch != ' ')
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  if (out == "BORDERLINESMOTE") return "BLSMOTE";
  if (out == "SAFELEVELSMOTE") return "SLSMOTE";
  if (out == "CLUSTERSMOTE") return "CSMOTE";
  return out;
}

std::size_t method_order_key(const std::string& name) {
  std::string c = canon(name);
  for (std::size_t i = 0; i < kCanonicalMethods.size(); ++i)
    if (kCanonicalMethods[i] == c) return i;
  return kCanonicalMethods.size();
}

std::size_t classifier_order_key(const std::string& name) {
  for (std::size_t i = 0; i < kClassifierOrder.size(); ++i)
    if (kClassifierOrder[i] == name) return i;
  return kClassifierOrder.size();
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& item : obj.items())
    require(allowed.count(item.key()) > 0, Errc::parse_error,
            "unknown key '" + item.key() + "' in " + where);
}

DatasetSource parse_dataset_entry(const json& j) {
  require(j.is_object(), Errc::parse_error, "dataset entries must be objects");
  check_keys(j, {"kind", "name", "path", "label_column", "positive_label", "seed"}, "dataset");
  require(j.contains("kind") && j["kind"].is_string(), Errc::parse_error,
          "dataset entry needs a string 'kind'");
  DatasetSource src;
  std::string kind = j["kind"].get<std::string>();
  if (kind == "keel")
    src.kind = DatasetSource::Kind::keel;
  else if (kind == "csv")
    src.kind = DatasetSource::Kind::csv;
  else if (kind == "toy1")
    src.kind = DatasetSource::Kind::toy1;
  else if (kind == "toy2")
    src.kind = DatasetSource::Kind::toy2;
  else
    raise(Errc::parse_error, "unknown dataset kind: " + kind);

  if (j.contains("name")) src.name = j["name"].get<std::string>();
  if (j.contains("path")) src.path = j["path"].get<std::string>();
  if (j.contains("label_column")) src.label_column = j["label_column"].get<std::string>();
  if (j.contains("positive_label")) src.positive_label = j["positive_label"].get<std::string>();
  if (j.contains("seed")) src.seed = j["seed"].get<std::uint64_t>();

  if (src.kind == DatasetSource::Kind::keel || src.kind == DatasetSource::Kind::csv)
    require(!src.path.empty(), Errc::parse_error, "dataset entry needs a 'path'");
  if (src.kind == DatasetSource::Kind::csv)
    require(!src.label_column.empty(), Errc::parse_error, "csv dataset needs 'label_column'");
  return src;
}

MethodSpec parse_method_entry(const json& j) {
  MethodSpec m;
  if (j.is_string()) {
    m.name = j.get<std::string>();
    require(method_order_key(m.name) < kCanonicalMethods.size(), Errc::parse_error,
            "unknown method: " + m.name);
    m.params = default_params(m.name);
    return m;
  }
  require(j.is_object(), Errc::parse_error, "method entries must be strings or objects");
  require(j.contains("name") && j["name"].is_string(), Errc::parse_error,
          "method entry needs a string 'name'");
  m.name = j["name"].get<std::string>();
  require(method_order_key(m.name) < kCanonicalMethods.size(), Errc::parse_error,
          "unknown method: " + m.name);
  std::string tag = canon(m.name);

  if (tag == "GMOTE") {
    check_keys(j,
               {"name", "ratio", "normalize", "alpha", "gamma", "statistic", "aggregate",
                "c_min", "c_max", "restarts", "max_iterations", "max_attempts_factor"},
               "method " + m.name);
    if (j.contains("alpha")) m.gmote.alpha = j["alpha"].get<double>();
    if (j.contains("gamma")) m.ratio = j["gamma"].get<double>();
    if (j.contains("ratio")) m.ratio = j["ratio"].get<double>();
    if (j.contains("statistic")) {
      std::string s = j["statistic"].get<std::string>();
      if (s == "chi_square")
        m.gmote.policy.statistic = TailStatistic::chi_square;
      else if (s == "hotelling_f" || s == "hotelling")
        m.gmote.policy.statistic = TailStatistic::hotelling_f;
      else
        raise(Errc::parse_error, "unknown statistic: " + s);
    }
    if (j.contains("aggregate")) {
      std::string s = j["aggregate"].get<std::string>();
      if (s == "max")
        m.gmote.policy.aggregate = TailAggregate::max_over_components;
      else if (s == "min")
        m.gmote.policy.aggregate = TailAggregate::min_over_components;
      else
        raise(Errc::parse_error, "unknown aggregate: " + s);
    }
    if (j.contains("c_min") || j.contains("c_max")) {
      std::size_t lo = j.contains("c_min") ? j["c_min"].get<std::size_t>() : 1;
      std::size_t hi = j.contains("c_max") ? j["c_max"].get<std::size_t>() : lo;
      require(lo >= 1 && hi >= lo, Errc::parse_error, "invalid component range");
      m.gmote.c_range.clear();
      for (std::size_t c = lo; c <= hi; ++c) m.gmote.c_range.push_back(c);
    }
    if (j.contains("restarts")) m.gmote.em.n_restarts = j["restarts"].get<std::size_t>();
    if (j.contains("max_iterations"))
      m.gmote.em.max_iterations = j["max_iterations"].get<std::size_t>();
    if (j.contains("max_attempts_factor"))
      m.gmote.max_attempts_factor = j["max_attempts_factor"].get<std::size_t>();
    m.gmote.gamma = m.ratio;
  } else if (tag == "ORIGINAL") {
    check_keys(j, {"name", "normalize"}, "method " + m.name);
  } else {
    check_keys(j,
               {"name", "ratio", "normalize", "k", "c", "min_pts", "clusters", "gamma",
                "iterations", "step", "p"},
               "method " + m.name);
    m.params = default_params(m.name);
    if (j.contains("k")) m.params.k = j["k"].get<std::size_t>();
    if (j.contains("c")) m.params.c = j["c"].get<std::size_t>();
    if (j.contains("min_pts")) m.params.min_pts = j["min_pts"].get<std::size_t>();
    if (j.contains("clusters")) m.params.clusters = j["clusters"].get<std::size_t>();
    if (j.contains("gamma")) m.params.gamma = j["gamma"].get<double>();
    if (j.contains("iterations")) m.params.iterations = j["iterations"].get<std::size_t>();
    if (j.contains("step")) m.params.step = j["step"].get<double>();
    if (j.contains("p")) m.params.p = j["p"].get<double>();
    if (j.contains("ratio")) m.ratio = j["ratio"].get<double>();
  }
  if (j.contains("normalize")) m.normalize = j["normalize"].get<bool>();
  return m;
}

std::optional<double> metric_value(const RunResult& r, const std::string& metric) {
  if (metric == "accuracy") return r.accuracy;
  if (metric == "precision") return r.precision;
  if (metric == "recall") return r.recall;
  if (metric == "f1") return r.f1;
  if (metric == "gmean") return r.gmean;
  if (metric == "auc") return r.auc;
  raise(Errc::invalid_argument, "unknown metric: " + metric);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string format_opt(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("NA");
}

// Orders observed in a result set, deterministic given row order.
struct ResultIndex {
  std::vector<std::string> classifiers, methods, datasets;
};

ResultIndex index_results(const std::vector<RunResult>& results) {
  ResultIndex idx;
  auto add = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (const auto& r : results) {
    add(idx.classifiers, r.classifier);
    add(idx.methods, r.method);
    add(idx.datasets, r.dataset);
  }
  std::stable_sort(idx.classifiers.begin(), idx.classifiers.end(),
                   [](const std::string& a, const std::string& b) {
                     return classifier_order_key(a) < classifier_order_key(b);
                   });
  std::stable_sort(idx.methods.begin(), idx.methods.end(),
                   [](const std::string& a, const std::string& b) {
                     return method_order_key(a) < method_order_key(b);
                   });
  return idx;
}

}  // namespace

bool default_normalization(const std::string& method) {
  std::string c = canon(method);
  return c == "SMOTE" || c == "BLSMOTE" || c == "SLSMOTE" || c == "DBSMOTE" || c == "CSMOTE";
}

ExperimentSpec parse_experiment_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    raise(Errc::parse_error, std::string("config is not valid JSON: ") + e.what());
  }
  require(j.is_object(), Errc::parse_error, "config root must be an object");
  check_keys(j, {"datasets", "methods", "classifiers", "folds", "repeats", "seed", "output"},
             "config root");
  require(j.contains("datasets") && j["datasets"].is_array() && !j["datasets"].empty(),
          Errc::parse_error, "config needs a non-empty 'datasets' array");
  require(j.contains("methods") && j["methods"].is_array() && !j["methods"].empty(),
          Errc::parse_error, "config needs a non-empty 'methods' array");

  ExperimentSpec spec;
  for (const auto& d : j["datasets"]) spec.datasets.push_back(parse_dataset_entry(d));
  for (const auto& m : j["methods"]) spec.methods.push_back(parse_method_entry(m));
  if (j.contains("classifiers")) {
    spec.classifiers.clear();
    for (const auto& c : j["classifiers"]) {
      std::string name = c.get<std::string>();
      require(name == "cart" || name == "logreg" || name == "svm", Errc::parse_error,
              "unknown classifier: " + name);
      spec.classifiers.push_back(name);
    }
    require(!spec.classifiers.empty(), Errc::parse_error, "'classifiers' must be non-empty");
  }
  if (j.contains("folds")) spec.folds = j["folds"].get<std::size_t>();
  require(spec.folds >= 2, Errc::parse_error, "'folds' must be at least 2");
  if (j.contains("repeats")) spec.repeats = j["repeats"].get<std::size_t>();
  require(spec.repeats >= 1, Errc::parse_error, "'repeats' must be at least 1");
  if (j.contains("seed")) spec.master_seed = j["seed"].get<std::uint64_t>();
  if (j.contains("output")) spec.output_path = j["output"].get<std::string>();
  return spec;
}

GmoteConfig parse_gmote_options_json(const std::string& text) {
  json j;
  try {
    j = text.empty() ? json::object() : json::parse(text);
  } catch (const std::exception& e) {
    raise(Errc::parse_error, std::string("options are not valid JSON: ") + e.what());
  }
  require(j.is_object(), Errc::parse_error, "options must be a JSON object");
  j["name"] = "GMOTE";
  MethodSpec m = parse_method_entry(j);
  GmoteConfig cfg = m.gmote;
  cfg.gamma = m.ratio;
  return cfg;
}

ResamplerParams parse_resampler_options_json(const std::string& method, const std::string& text) {
  json j;
  try {
    j = text.empty() ? json::object() : json::parse(text);
  } catch (const std::exception& e) {
    raise(Errc::parse_error, std::string("options are not valid JSON: ") + e.what());
  }
  require(j.is_object(), Errc::parse_error, "options must be a JSON object");
  j["name"] = method;
  MethodSpec m = parse_method_entry(j);
  ResamplerParams params = m.params;
  params.method = method;
  return params;
}

std::vector<RunResult> run_experiment(const ExperimentSpec& spec) {
  require(!spec.datasets.empty() && !spec.methods.empty() && !spec.classifiers.empty(),
          Errc::invalid_argument, "experiment needs datasets, methods, and classifiers");

  std::vector<MethodSpec> methods = spec.methods;
  bool has_original = false;
  for (const auto& m : methods) has_original |= canon(m.name) == "ORIGINAL";
  if (!has_original) {
    MethodSpec original;
    original.name = "Original";
    methods.insert(methods.begin(), original);
  }

  std::vector<DatasetRecord> records;
  std::vector<std::string> names;
  for (const auto& src : spec.datasets) {
    DatasetRecord rec;
    switch (src.kind) {
      case DatasetSource::Kind::keel: rec = load_keel(src.path); break;
      case DatasetSource::Kind::csv: rec = load_csv(src.path, src.label_column, src.positive_label); break;
      case DatasetSource::Kind::toy1: rec = toy_example1(src.seed); break;
      case DatasetSource::Kind::toy2: rec = toy_example2(src.seed); break;
    }
    names.push_back(src.name.empty() ? rec.name : src.name);
    records.push_back(std::move(rec));
  }

  std::vector<RunResult> results;
  for (std::size_t d = 0; d < records.size(); ++d) {
    const DatasetRecord& rec = records[d];
    const std::string& ds_name = names[d];
    for (std::size_t rep = 0; rep < spec.repeats; ++rep) {
      std::uint64_t fold_seed =
          RngStream(spec.master_seed, "folds|" + ds_name + "|" + std::to_string(rep)).next_u64();
      FoldPlan plan = stratified_kfold(rec.y, spec.folds, fold_seed);

      for (std::size_t fold = 0; fold < spec.folds; ++fold) {
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < rec.y.size(); ++i)
          (plan.assignments[i] == fold ? test_idx : train_idx).push_back(i);
        Matrix Xtr = rec.X.select_rows(train_idx);
        Matrix Xte = rec.X.select_rows(test_idx);
        std::vector<int> ytr, yte;
        for (std::size_t i : train_idx) ytr.push_back(rec.y[i]);
        for (std::size_t i : test_idx) yte.push_back(rec.y[i]);

        for (const auto& method : methods) {
          auto cell_label = ds_name + "|" + method.name + "|" + std::to_string(rep) + "|" +
                            std::to_string(fold);
          RunResult base;
          base.dataset = ds_name;
          base.method = method.name;
          base.repeat = rep;
          base.fold = fold;

          Matrix Xtr_use, Xte_use, synthetic;
          std::size_t n_outliers = 0;
          bool fallback = false;
          bool resample_ok = true;
          std::string resample_note;
          try {
            bool norm = method.normalize.value_or(default_normalization(method.name));
            if (norm) {
              Scaler01 scaler = normalize_01(Xtr);
              Xtr_use = apply(scaler, Xtr);
              Xte_use = apply(scaler, Xte);
            } else {
              Xtr_use = Xtr;
              Xte_use = Xte;
            }

            if (canon(method.name) != "ORIGINAL") {
              std::vector<std::size_t> min_idx, maj_idx;
              for (std::size_t i = 0; i < ytr.size(); ++i)
                (ytr[i] == 1 ? min_idx : maj_idx).push_back(i);
              Matrix X_min = Xtr_use.select_rows(min_idx);
              Matrix X_maj = Xtr_use.select_rows(maj_idx);

              if (canon(method.name) == "GMOTE") {
                GmoteConfig cfg = method.gmote;
                cfg.gamma = method.ratio;
                cfg.seed = RngStream(spec.master_seed, cell_label).next_u64();
                GmoteModel model = gmote_fit(X_min, cfg);
                SyntheticSet synth = gmote_generate(model, X_min.rows(), cfg);
                synthetic = std::move(synth.instances);
                n_outliers = model.outlier_report.flagged_count();
                fallback = model.all_flagged_fallback;
              } else {
                std::size_t n_synth = static_cast<std::size_t>(
                    std::ceil(method.ratio * static_cast<double>(X_min.rows())));
                ResamplerParams params = method.params;
                params.method = method.name;
                RngStream stream(spec.master_seed, cell_label);
                ResampleOutput out = oversample(params, X_min, X_maj, n_synth, stream);
                synthetic = std::move(out.synthetic);
                fallback = out.used_fallback;
              }
            }
          } catch (const std::exception& e) {
            resample_ok = false;
            resample_note = e.what();
          }

          Matrix X_aug;
          std::vector<int> y_aug;
          if (resample_ok) {
            X_aug = Xtr_use;
            X_aug.append_rows(synthetic);
            y_aug = ytr;
            y_aug.resize(ytr.size() + synthetic.rows(), 1);
          }

          for (const auto& clf : spec.classifiers) {
            RunResult row = base;
            row.classifier = clf;
            row.n_synth = synthetic.rows();
            row.n_outliers = n_outliers;
            row.fallback = fallback;
            if (!resample_ok) {
              row.failed = true;
              row.note = resample_note;
              results.push_back(row);
              continue;
            }
            try {
              Vector scores(yte.size());
              std::vector<int> preds(yte.size());
              if (clf == "cart") {
                CartModel model = cart_fit(X_aug, y_aug);
                for (std::size_t i = 0; i < yte.size(); ++i) {
                  scores[i] = cart_score(model, Xte_use.row(i));
                  preds[i] = scores[i] >= 0.5 ? 1 : 0;
                }
              } else if (clf == "logreg") {
                LogisticModel model = logreg_fit(X_aug, y_aug);
                for (std::size_t i = 0; i < yte.size(); ++i) {
                  scores[i] = logreg_score(model, Xte_use.row(i));
                  preds[i] = scores[i] >= 0.5 ? 1 : 0;
                }
              } else {
                SvmModel model = svm_fit(X_aug, y_aug);
                for (std::size_t i = 0; i < yte.size(); ++i) {
                  scores[i] = svm_score(model, Xte_use.row(i));
                  preds[i] = scores[i] > 0.0 ? 1 : 0;
                }
              }
              ConfusionCounts counts = confusion(yte, preds);
              MetricSet met = metrics_from_counts(counts);
              row.accuracy = met.accuracy;
              row.recall = met.recall;
              row.gmean = met.gmean;
              row.precision = met.precision;
              row.f1 = met.f1;
              row.auc = auc(scores, yte);
            } catch (const std::exception& e) {
              row.failed = true;
              row.note = e.what();
            }
            results.push_back(row);
          }
        }
      }
    }
  }
  return results;
}

void write_results_csv(const std::vector<RunResult>& results, const std::string& path) {
  std::vector<RunResult> rows = results;
  std::stable_sort(rows.begin(), rows.end(), [](const RunResult& a, const RunResult& b) {
    return std::make_tuple(a.dataset, method_order_key(a.method), a.method,
                           classifier_order_key(a.classifier), a.repeat, a.fold) <
           std::make_tuple(b.dataset, method_order_key(b.method), b.method,
                           classifier_order_key(b.classifier), b.repeat, b.fold);
  });

  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::io_error, "cannot write " + path);
  out << "dataset,method,classifier,repeat,fold,accuracy,precision,recall,f1,gmean,auc,"
         "n_synth,n_outliers,fallback\n";
  for (const auto& r : rows) {
    out << r.dataset << "," << r.method << "," << r.classifier << "," << r.repeat << ","
        << r.fold << "," << format_opt(r.accuracy) << "," << format_opt(r.precision) << ","
        << format_opt(r.recall) << "," << format_opt(r.f1) << "," << format_opt(r.gmean) << ","
        << format_opt(r.auc) << "," << r.n_synth << "," << r.n_outliers << ","
        << (r.fallback ? 1 : 0) << "\n";
  }
  require(out.good(), Errc::io_error, "write failed: " + path);
}

std::vector<RunResult> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io_error, "cannot open " + path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), Errc::malformed_header,
          "empty results file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line ==
              "dataset,method,classifier,repeat,fold,accuracy,precision,recall,f1,gmean,auc,"
              "n_synth,n_outliers,fallback",
          Errc::malformed_header, "unexpected results header in " + path);

  auto parse_opt = [](const std::string& s) -> std::optional<double> {
    if (s == "NA") return std::nullopt;
    return std::stod(s);
  };
  std::vector<RunResult> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else
        cur.push_back(c);
    }
    f.push_back(cur);
    require(f.size() == 14, Errc::parse_error, "bad results row: " + line);
    RunResult r;
    r.dataset = f[0];
    r.method = f[1];
    r.classifier = f[2];
    r.repeat = static_cast<std::size_t>(std::stoull(f[3]));
    r.fold = static_cast<std::size_t>(std::stoull(f[4]));
    r.accuracy = parse_opt(f[5]);
    r.precision = parse_opt(f[6]);
    r.recall = parse_opt(f[7]);
    r.f1 = parse_opt(f[8]);
    r.gmean = parse_opt(f[9]);
    r.auc = parse_opt(f[10]);
    r.n_synth = static_cast<std::size_t>(std::stoull(f[11]));
    r.n_outliers = static_cast<std::size_t>(std::stoull(f[12]));
    r.fallback = f[13] == "1";
    r.failed = !r.accuracy.has_value();
    rows.push_back(std::move(r));
  }
  return rows;
}

ReportTables summarize(const std::vector<RunResult>& results, const std::string& metric) {
  auto idx = index_results(results);

  struct Agg {
    double sum = 0.0;
    std::size_t n = 0;
    std::size_t na = 0;
  };
  std::map<std::tuple<std::string, std::string, std::string>, Agg> cells;
  for (const auto& r : results) {
    Agg& a = cells[{r.classifier, r.method, r.dataset}];
    auto v = metric_value(r, metric);
    if (v) {
      a.sum += *v;
      ++a.n;
    } else {
      ++a.na;
    }
  }

  std::ostringstream text, csv;
  csv << "classifier,method,dataset,mean,n,na\n";
  for (const auto& clf : idx.classifiers) {
    text << "Averages of " << metric << " (" << clf << ")\n";

    std::vector<std::vector<std::string>> grid;  // rows: methods; cols: datasets
    std::vector<std::string> best(idx.datasets.size(), "NA"), worst(idx.datasets.size(), "NA");
    std::vector<double> best_v(idx.datasets.size()), worst_v(idx.datasets.size());
    std::vector<bool> seen(idx.datasets.size(), false);

    for (const auto& method : idx.methods) {
      std::vector<std::string> row;
      for (std::size_t dcol = 0; dcol < idx.datasets.size(); ++dcol) {
        const auto& ds = idx.datasets[dcol];
        auto it = cells.find({clf, method, ds});
        if (it == cells.end() || it->second.n == 0) {
          row.push_back("NA");
          csv << clf << "," << method << "," << ds << ",NA,0,"
              << (it == cells.end() ? 0 : it->second.na) << "\n";
          continue;
        }
        double mean = it->second.sum / static_cast<double>(it->second.n);
        char buf[48];
        if (it->second.na > 0)
          std::snprintf(buf, sizeof buf, "%.4f(%zuNA)", mean, it->second.na);
        else
          std::snprintf(buf, sizeof buf, "%.4f", mean);
        row.push_back(buf);
        csv << clf << "," << method << "," << ds << "," << format_double(mean) << ","
            << it->second.n << "," << it->second.na << "\n";
        if (!seen[dcol] || mean > best_v[dcol]) {
          best_v[dcol] = mean;
          best[dcol] = method;
          if (!seen[dcol]) {
            worst_v[dcol] = mean;
            worst[dcol] = method;
          }
          seen[dcol] = true;
        }
        if (mean < worst_v[dcol]) {
          worst_v[dcol] = mean;
          worst[dcol] = method;
        }
      }
      grid.push_back(std::move(row));
    }

    std::vector<std::size_t> width(idx.datasets.size() + 1, 0);
    width[0] = std::string("method").size();
    for (const auto& m : idx.methods) width[0] = std::max(width[0], m.size());
    width[0] = std::max(width[0], std::string("best").size());
    for (std::size_t c = 0; c < idx.datasets.size(); ++c) {
      width[c + 1] = idx.datasets[c].size();
      for (const auto& row : grid) width[c + 1] = std::max(width[c + 1], row[c].size());
      width[c + 1] = std::max({width[c + 1], best[c].size(), worst[c].size()});
    }
    auto pad = [&](const std::string& s, std::size_t w) {
      return s + std::string(w - s.size() + 2, ' ');
    };
    text << pad("method", width[0]);
    for (std::size_t c = 0; c < idx.datasets.size(); ++c) text << pad(idx.datasets[c], width[c + 1]);
    text << "\n";
    for (std::size_t r = 0; r < idx.methods.size(); ++r) {
      text << pad(idx.methods[r], width[0]);
      for (std::size_t c = 0; c < idx.datasets.size(); ++c) text << pad(grid[r][c], width[c + 1]);
      text << "\n";
    }
    text << pad("best", width[0]);
    for (std::size_t c = 0; c < idx.datasets.size(); ++c) text << pad(best[c], width[c + 1]);
    text << "\n" << pad("worst", width[0]);
    for (std::size_t c = 0; c < idx.datasets.size(); ++c) text << pad(worst[c], width[c + 1]);
    text << "\n\n";
  }

  ReportTables tables;
  tables.text = text.str();
  tables.csv = csv.str();
  return tables;
}

ComparisonReport compare(const std::vector<RunResult>& results, const std::string& baseline,
                         Pairing pairing) {
  auto idx = index_results(results);
  require(std::find(idx.methods.begin(), idx.methods.end(), baseline) != idx.methods.end(),
          Errc::invalid_argument, "baseline method not present in results: " + baseline);

  ComparisonReport report;
  std::ostringstream text, csv;
  csv << "classifier,metric,method,testable,direction,stars,"
         "p_score_plus,p_score_minus,p_rank_plus,p_rank_minus\n";

  for (const auto& clf : idx.classifiers) {
    for (const auto& metric : kMetrics) {
      // Pair units: datasets (cell means) or individual dataset|repeat|fold cells.
      std::vector<std::string> units;
      std::map<std::string, std::map<std::string, std::optional<double>>> values;
      if (pairing == Pairing::dataset_cells) {
        std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> acc;
        for (const auto& r : results) {
          if (r.classifier != clf) continue;
          auto v = metric_value(r, metric);
          if (!v) continue;
          auto& cell = acc[r.dataset][r.method];
          cell.first += *v;
          ++cell.second;
        }
        for (const auto& ds : idx.datasets) {
          units.push_back(ds);
          for (const auto& m : idx.methods) {
            auto it = acc.find(ds);
            if (it != acc.end() && it->second.count(m) && it->second.at(m).second > 0)
              values[ds][m] = it->second.at(m).first /
                              static_cast<double>(it->second.at(m).second);
            else
              values[ds][m] = std::nullopt;
          }
        }
      } else {
        std::set<std::string> unit_set;
        for (const auto& r : results) {
          if (r.classifier != clf) continue;
          std::string unit = r.dataset + "|" + std::to_string(r.repeat) + "|" +
                             std::to_string(r.fold);
          unit_set.insert(unit);
          values[unit][r.method] = metric_value(r, metric);
        }
        units.assign(unit_set.begin(), unit_set.end());
      }

      // Per-unit ranks across every method (absent values rank last).
      std::map<std::string, std::map<std::string, double>> rank_of;
      for (const auto& unit : units) {
        std::vector<std::optional<double>> scores;
        for (const auto& m : idx.methods) {
          auto it = values[unit].find(m);
          scores.push_back(it == values[unit].end() ? std::nullopt : it->second);
        }
        auto ranks = rank_methods(scores);
        for (std::size_t i = 0; i < idx.methods.size(); ++i)
          rank_of[unit][idx.methods[i]] = ranks[i];
      }

      for (const auto& method : idx.methods) {
        if (method == baseline) continue;
        ComparisonCell cell;
        cell.classifier = clf;
        cell.metric = metric;
        cell.method = method;

        Vector xb, xm, rb, rm;
        for (const auto& unit : units) {
          const auto& vb = values[unit][baseline];
          const auto& vm = values[unit][method];
          if (vb && vm) {
            xb.push_back(*vb);
            xm.push_back(*vm);
          }
          rb.push_back(rank_of[unit][baseline]);
          rm.push_back(rank_of[unit][method]);
        }

        if (!xb.empty()) {
          cell.testable = true;
          cell.p_score_plus = wilcoxon_signed_rank(xb, xm, Alternative::greater).p_one_sided;
          cell.p_score_minus = wilcoxon_signed_rank(xb, xm, Alternative::less).p_one_sided;
          cell.p_rank_plus = wilcoxon_signed_rank(rm, rb, Alternative::greater).p_one_sided;
          cell.p_rank_minus = wilcoxon_signed_rank(rm, rb, Alternative::less).p_one_sided;
          auto stars_for = [](double p) { return p < 0.001 ? 3 : p < 0.01 ? 2 : p < 0.05 ? 1 : 0; };
          if (stars_for(cell.p_score_plus) > 0) {
            cell.direction = '+';
            cell.stars = stars_for(cell.p_score_plus);
          } else if (stars_for(cell.p_score_minus) > 0) {
            cell.direction = '-';
            cell.stars = stars_for(cell.p_score_minus);
          }
        }

        csv << clf << "," << metric << "," << method << "," << (cell.testable ? 1 : 0) << ","
            << (cell.direction == ' ' ? std::string() : std::string(1, cell.direction)) << ","
            << cell.stars << "," << format_double(cell.p_score_plus) << ","
            << format_double(cell.p_score_minus) << "," << format_double(cell.p_rank_plus) << ","
            << format_double(cell.p_rank_minus) << "\n";

        text << "[" << clf << " / " << metric << "] " << baseline << " vs " << method << ": ";
        if (!cell.testable) {
          text << "untestable\n";
        } else {
          if (cell.stars > 0)
            text << std::string(static_cast<std::size_t>(cell.stars), cell.direction) << "  ";
          else
            text << "ns  ";
          char buf[160];
          std::snprintf(buf, sizeof buf,
                        "p+(score)=%.4g p-(score)=%.4g p+(rank)=%.4g p-(rank)=%.4g",
                        cell.p_score_plus, cell.p_score_minus, cell.p_rank_plus,
                        cell.p_rank_minus);
          text << buf << "\n";
        }
        report.cells.push_back(cell);
      }
    }
  }

  report.text = text.str();
  report.csv = csv.str();
  return report;
}

}  // namespace gmotelab
