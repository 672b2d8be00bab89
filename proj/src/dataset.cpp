#include "gmotelab/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gmotelab/rng.hpp"

namespace gmotelab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::string file_stem(const std::string& path) {
  std::size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  std::size_t dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

// Finish a record from string labels: minority becomes positive unless a
// positive label is requested explicitly.
void assign_labels(DatasetRecord& rec, const std::vector<std::string>& labels,
                   const std::string& requested_positive) {
  std::map<std::string, std::size_t> counts;
  for (const auto& l : labels) ++counts[l];
  require(counts.size() >= 2, Errc::single_class, "dataset has a single class");
  require(counts.size() == 2, Errc::invalid_argument,
          "dataset has more than two classes");

  auto it = counts.begin();
  auto [label_a, count_a] = *it;
  auto [label_b, count_b] = *std::next(it);
  std::string positive;
  if (!requested_positive.empty()) {
    require(counts.count(requested_positive) == 1, Errc::invalid_argument,
            "positive label not present in the data: " + requested_positive);
    positive = requested_positive;
  } else if (count_a == count_b) {
    positive = label_a;  // tie: the lexicographically first label
  } else {
    positive = count_a < count_b ? label_a : label_b;
  }
  rec.positive_label = positive;
  rec.negative_label = positive == label_a ? label_b : label_a;

  rec.y.resize(labels.size());
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    rec.y[i] = labels[i] == positive ? 1 : 0;
    n_pos += static_cast<std::size_t>(rec.y[i]);
  }
  std::size_t n_neg = labels.size() - n_pos;
  rec.imbalance_ratio = static_cast<double>(std::max(n_pos, n_neg)) /
                        static_cast<double>(std::min(n_pos, n_neg));
}

}  // namespace

DatasetRecord load_keel(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io_error, "cannot open " + path);

  struct Attribute {
    std::string name;
    bool numeric = false;
  };
  std::vector<Attribute> attrs;
  std::vector<std::string> inputs, outputs;
  std::string relation;
  bool in_data = false;

  std::vector<std::vector<std::string>> data_rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '%') continue;
    if (!in_data && line[0] == '@') {
      std::string low = lower(line);
      if (low.rfind("@relation", 0) == 0) {
        relation = trim(line.substr(9));
      } else if (low.rfind("@attribute", 0) == 0) {
        std::string rest = trim(line.substr(10));
        require(!rest.empty(), Errc::malformed_header, "empty @attribute line");
        Attribute a;
        std::size_t brace = rest.find('{');
        if (brace != std::string::npos) {
          a.name = trim(rest.substr(0, brace));
          a.numeric = false;
        } else {
          std::size_t sp = rest.find_first_of(" \t");
          require(sp != std::string::npos, Errc::malformed_header,
                  "attribute without a type: " + rest);
          a.name = trim(rest.substr(0, sp));
          std::string type = lower(trim(rest.substr(sp)));
          require(type.rfind("real", 0) == 0 || type.rfind("integer", 0) == 0,
                  Errc::malformed_header, "unsupported attribute type: " + rest);
          a.numeric = true;
        }
        require(!a.name.empty(), Errc::malformed_header, "attribute without a name");
        attrs.push_back(a);
      } else if (low.rfind("@inputs", 0) == 0) {
        inputs = split_commas(trim(line.substr(7)));
      } else if (low.rfind("@outputs", 0) == 0 || low.rfind("@output", 0) == 0) {
        std::size_t skip = low.rfind("@outputs", 0) == 0 ? 8 : 7;
        outputs = split_commas(trim(line.substr(skip)));
      } else if (low.rfind("@data", 0) == 0) {
        in_data = true;
      } else {
        raise(Errc::malformed_header, "unknown directive: " + line);
      }
      continue;
    }
    require(in_data, Errc::malformed_header, "data before @data directive");
    data_rows.push_back(split_commas(line));
  }
  require(in_data, Errc::malformed_header, "missing @data directive");
  require(!attrs.empty(), Errc::malformed_header, "no @attribute declarations");

  auto find_attr = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < attrs.size(); ++i)
      if (lower(attrs[i].name) == lower(name)) return i;
    raise(Errc::malformed_header, "unknown attribute name: " + name);
  };

  std::size_t class_idx;
  if (!outputs.empty()) {
    require(outputs.size() == 1, Errc::malformed_header, "exactly one output attribute expected");
    class_idx = find_attr(outputs[0]);
  } else {
    class_idx = attrs.size() - 1;
  }

  std::vector<std::size_t> input_idx;
  if (!inputs.empty()) {
    for (const auto& name : inputs) input_idx.push_back(find_attr(name));
  } else {
    for (std::size_t i = 0; i < attrs.size(); ++i)
      if (i != class_idx) input_idx.push_back(i);
  }
  for (std::size_t i : input_idx)
    require(attrs[i].numeric, Errc::non_numeric_feature,
            "nominal input attribute: " + attrs[i].name);

  DatasetRecord rec;
  rec.name = relation.empty() ? file_stem(path) : relation;
  rec.X = Matrix(data_rows.size(), input_idx.size());
  std::vector<std::string> labels(data_rows.size());
  for (std::size_t r = 0; r < data_rows.size(); ++r) {
    require(data_rows[r].size() == attrs.size(), Errc::parse_error,
            "data row with wrong field count in " + path);
    for (std::size_t c = 0; c < input_idx.size(); ++c) {
      double v;
      require(parse_double(data_rows[r][input_idx[c]], v), Errc::parse_error,
              "non-numeric value: " + data_rows[r][input_idx[c]]);
      rec.X(r, c) = v;
    }
    labels[r] = data_rows[r][class_idx];
  }
  assign_labels(rec, labels, "");
  return rec;
}

DatasetRecord load_csv(const std::string& path, const std::string& label_column,
                       const std::string& positive_label) {
  std::ifstream in(path);
  require(in.good(), Errc::io_error, "cannot open " + path);

  std::string line;
  require(static_cast<bool>(std::getline(in, line)), Errc::malformed_header,
          "empty CSV file: " + path);
  auto header = split_commas(trim(line));
  std::size_t label_idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == label_column) label_idx = i;
  require(label_idx < header.size(), Errc::missing_column,
          "label column not found: " + label_column);

  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    auto fields = split_commas(line);
    require(fields.size() == header.size(), Errc::parse_error,
            "CSV row with wrong field count in " + path);
    rows.push_back(std::move(fields));
  }

  DatasetRecord rec;
  rec.name = file_stem(path);
  rec.X = Matrix(rows.size(), header.size() - 1);
  std::vector<std::string> labels(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i == label_idx) continue;
      double v;
      require(parse_double(rows[r][i], v), Errc::non_numeric_feature,
              "non-numeric feature value: " + rows[r][i]);
      rec.X(r, c++) = v;
    }
    labels[r] = rows[r][label_idx];
  }
  assign_labels(rec, labels, positive_label);
  return rec;
}

void write_csv(const DatasetRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::io_error, "cannot write " + path);
  for (std::size_t j = 0; j < record.X.cols(); ++j) out << "x" << (j + 1) << ",";
  out << "class\n";
  char buf[40];
  for (std::size_t i = 0; i < record.X.rows(); ++i) {
    for (std::size_t j = 0; j < record.X.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", record.X(i, j));
      out << buf << ",";
    }
    out << (record.y[i] == 1 ? record.positive_label : record.negative_label) << "\n";
  }
  require(out.good(), Errc::io_error, "write failed: " + path);
}

DatasetRecord toy_example1(std::uint64_t seed) {
  // Two tight minority blobs inside a broad uniform majority field whose
  // samples are rejected from the blob cores.
  constexpr double cx[2] = {-2.0, 2.0};
  constexpr double blob_sd = 0.4;
  constexpr double core_radius = 1.2;
  constexpr double box_x = 5.0, box_y = 3.5;
  constexpr std::size_t per_blob = 60, n_majority = 400;

  RngStream rng(seed, "toy-two-blobs");
  DatasetRecord rec;
  rec.name = "toy1";
  rec.positive_label = "positive";
  rec.negative_label = "negative";
  rec.X = Matrix(0, 2);

  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t i = 0; i < per_blob; ++i) {
      Vector row = {cx[b] + blob_sd * rng.normal(), blob_sd * rng.normal()};
      rec.X.push_row(row);
      rec.y.push_back(1);
    }
  for (std::size_t i = 0; i < n_majority; ++i) {
    Vector row(2);
    for (;;) {
      row[0] = -box_x + 2.0 * box_x * rng.uniform();
      row[1] = -box_y + 2.0 * box_y * rng.uniform();
      bool in_core = false;
      for (double c : cx) {
        double dx = row[0] - c, dy = row[1];
        if (dx * dx + dy * dy < core_radius * core_radius) in_core = true;
      }
      if (!in_core) break;
    }
    rec.X.push_row(row);
    rec.y.push_back(0);
  }
  rec.imbalance_ratio = static_cast<double>(n_majority) / (2.0 * per_blob);
  return rec;
}

DatasetRecord toy_example2(std::uint64_t seed) {
  // Interlocking noisy arcs: the upper arc is the minority, the lower arc the
  // majority; the noise makes the tips overlap slightly.
  constexpr std::size_t n_minority = 120, n_majority = 400;
  constexpr double noise_sd = 0.25;
  constexpr double pi = 3.14159265358979323846;

  RngStream rng(seed, "toy-two-arcs");
  DatasetRecord rec;
  rec.name = "toy2";
  rec.positive_label = "positive";
  rec.negative_label = "negative";
  rec.X = Matrix(0, 2);

  for (std::size_t i = 0; i < n_minority; ++i) {
    double t = pi * rng.uniform();
    Vector row = {1.0 - std::cos(t) + noise_sd * rng.normal(),
                  0.5 - std::sin(t) + noise_sd * rng.normal()};
    rec.X.push_row(row);
    rec.y.push_back(1);
  }
  for (std::size_t i = 0; i < n_majority; ++i) {
    double t = pi * rng.uniform();
    Vector row = {std::cos(t) + noise_sd * rng.normal(),
                  std::sin(t) + noise_sd * rng.normal()};
    rec.X.push_row(row);
    rec.y.push_back(0);
  }
  rec.imbalance_ratio = static_cast<double>(n_majority) / static_cast<double>(n_minority);
  return rec;
}

}  // namespace gmotelab
