#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "gmotelab/dataset.hpp"

using namespace gmotelab;

#ifndef TEST_DATA_DIR
#define TEST_DATA_DIR "tests/data"
#endif

namespace {
std::string fixture(const std::string& name) { return std::string(TEST_DATA_DIR) + "/" + name; }
}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("keel file loads with declared inputs and outputs") {
  DatasetRecord rec = load_keel(fixture("fixture.dat"));
  CHECK(rec.name == "fixture");
  REQUIRE(rec.X.rows() == 12);
  REQUIRE(rec.X.cols() == 2);
  CHECK(rec.X(0, 0) == 1.5);
  CHECK(rec.X(0, 1) == 2.0);
  CHECK(rec.X(11, 0) == 7.0);

  // minority (4 of 12) becomes the positive class
  CHECK(rec.positive_label == "positive");
  CHECK(rec.negative_label == "negative");
  CHECK(rec.minority_count() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(rec.y[i] == 1);
  for (std::size_t i = 4; i < 12; ++i) CHECK(rec.y[i] == 0);
  CHECK(rec.imbalance_ratio == doctest::Approx(2.0));
}

TEST_CASE("keel without outputs uses the last attribute as the class") {
  DatasetRecord rec = load_keel(fixture("no_outputs.dat"));
  CHECK(rec.X.cols() == 2);
  CHECK(rec.X.rows() == 4);
  CHECK(rec.positive_label == "yes");
  CHECK(rec.imbalance_ratio == doctest::Approx(3.0));
}

TEST_CASE("keel parse failures carry specific error codes") {
  CHECK_THROWS_WITH_AS(load_keel(fixture("no_data.dat")), doctest::Contains("@data"), Error);
  CHECK_THROWS_AS(load_keel(fixture("nominal_input.dat")), Error);
  CHECK_THROWS_AS(load_keel(fixture("bad_row.dat")), Error);
  CHECK_THROWS_AS(load_keel(fixture("unknown_directive.dat")), Error);
  CHECK_THROWS_AS(load_keel(fixture("missing_file.dat")), Error);

  try {
    load_keel(fixture("nominal_input.dat"));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::non_numeric_feature);
  }
  try {
    load_keel(fixture("missing_file.dat"));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io_error);
  }
}

TEST_CASE("csv round trip preserves features and labels") {
  DatasetRecord rec = toy_example1(3);
  const std::string path = "roundtrip_tmp.csv";
  write_csv(rec, path);
  DatasetRecord back = load_csv(path, "class");
  REQUIRE(back.X.rows() == rec.X.rows());
  REQUIRE(back.X.cols() == rec.X.cols());
  for (std::size_t i = 0; i < rec.X.rows(); ++i) {
    for (std::size_t j = 0; j < rec.X.cols(); ++j) CHECK(back.X(i, j) == rec.X(i, j));
    CHECK(back.y[i] == rec.y[i]);
  }
  CHECK(back.positive_label == "positive");
  std::remove(path.c_str());
}

TEST_CASE("csv honors an explicit positive label") {
  const std::string path = "label_tmp.csv";
  {
    std::ofstream out(path);
    out << "f,class\n1,a\n2,a\n3,a\n4,b\n5,b\n";
  }
  DatasetRecord by_minority = load_csv(path, "class");
  CHECK(by_minority.positive_label == "b");
  DatasetRecord forced = load_csv(path, "class", "a");
  CHECK(forced.positive_label == "a");
  CHECK(forced.minority_count() == 3);
  CHECK(forced.imbalance_ratio == doctest::Approx(1.5));
  CHECK_THROWS_AS(load_csv(path, "class", "zzz"), Error);
  CHECK_THROWS_AS(load_csv(path, "missing"), Error);
  std::remove(path.c_str());
}

TEST_CASE("equal class counts break the tie lexicographically") {
  const std::string path = "tie_tmp.csv";
  {
    std::ofstream out(path);
    out << "f,class\n1,zebra\n2,zebra\n3,apple\n4,apple\n";
  }
  DatasetRecord rec = load_csv(path, "class");
  CHECK(rec.positive_label == "apple");
  CHECK(rec.imbalance_ratio == 1.0);
  std::remove(path.c_str());
}

TEST_CASE("single-class and multi-class files are rejected") {
  const std::string path = "bad_tmp.csv";
  {
    std::ofstream out(path);
    out << "f,class\n1,a\n2,a\n";
  }
  CHECK_THROWS_AS(load_csv(path, "class"), Error);
  {
    std::ofstream out(path);
    out << "f,class\n1,a\n2,b\n3,c\n";
  }
  CHECK_THROWS_AS(load_csv(path, "class"), Error);
  std::remove(path.c_str());
}

TEST_CASE("toy generators are deterministic with documented shape") {
  DatasetRecord a = toy_example1(7);
  DatasetRecord b = toy_example1(7);
  DatasetRecord c = toy_example1(8);
  CHECK(a.X == b.X);
  CHECK_FALSE(a.X == c.X);
  CHECK(a.X.rows() == 520);
  CHECK(a.X.cols() == 2);
  CHECK(a.minority_count() == 120);
  CHECK(a.imbalance_ratio == doctest::Approx(400.0 / 120.0));

  DatasetRecord d = toy_example2(7);
  CHECK(d.X.rows() == 520);
  CHECK(d.minority_count() == 120);
  CHECK(d.name == "toy2");

  // majority rows of toy1 stay outside the minority cores
  for (std::size_t i = 120; i < 520; ++i) {
    double x = a.X(i, 0), y = a.X(i, 1);
    double d1 = (x + 2.0) * (x + 2.0) + y * y;
    double d2 = (x - 2.0) * (x - 2.0) + y * y;
    CHECK(d1 >= 1.2 * 1.2);
    CHECK(d2 >= 1.2 * 1.2);
  }
}

}  // TEST_SUITE
