#pragma once

#include <stdexcept>
#include <string>

namespace gmotelab {

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  not_positive_definite,
  empty_data,
  too_many_components,
  too_few_instances,
  too_few_minority,
  no_danger_points,
  no_clusters,
  insufficient_sample_size,
  acceptance_starvation,
  single_class,
  length_mismatch,
  empty_counts,
  class_too_small,
  missing_column,
  malformed_header,
  non_numeric_feature,
  io_error,
  parse_error,
  unknown,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool ok, Errc code, const std::string& msg) {
  if (!ok) raise(code, msg);
}

}  // namespace gmotelab
