#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gmotelab/matrix.hpp"

namespace gmotelab {

// A binary classification dataset; label 1 is the positive (minority) class.
struct DatasetRecord {
  std::string name;
  Matrix X;
  std::vector<int> y;
  std::string positive_label;
  std::string negative_label;
  double imbalance_ratio = 1.0;  // majority count / minority count, >= 1

  std::size_t minority_count() const {
    std::size_t n = 0;
    for (int v : y) n += static_cast<std::size_t>(v == 1);
    return n;
  }
};

// KEEL .dat reader: @relation, @attribute (real/integer with optional range;
// nominal only for the class), @inputs, @outputs, @data with comma-separated
// rows. The minority class becomes the positive label.
DatasetRecord load_keel(const std::string& path);

// CSV with a header row. positive_label empty means "use the minority class".
DatasetRecord load_csv(const std::string& path, const std::string& label_column,
                       const std::string& positive_label = "");

void write_csv(const DatasetRecord& record, const std::string& path);

// 2-D benchmark shapes: two Gaussian minority blobs inside a uniform majority
// box, and a pair of interlocking noisy arcs with slight overlap.
DatasetRecord toy_example1(std::uint64_t seed);
DatasetRecord toy_example2(std::uint64_t seed);

}  // namespace gmotelab
