#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gmotelab {

// Deterministic random stream, reproducible across platforms. Substreams are
// derived by hashing (seed, label); each consumer owns its stream and must not
// share it across threads.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed, std::string_view label = "");

  // Independent substream for a child consumer.
  RngStream derive(std::string_view label) const;

  std::uint64_t next_u64();
  // Uniform double in [0, 1).
  double uniform();
  // Uniform double in (0, 1).
  double uniform_open();
  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n);
  // Standard normal via Box-Muller (second value cached on the stream).
  double normal();

  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }

private:
  std::uint64_t seed_ = 0;
  std::string label_;
  std::uint64_t state_[4] = {0, 0, 0, 0};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace gmotelab
