#pragma once

#include <cstdint>
#include <string_view>

namespace rgcg {

/// Counter-based deterministic random stream. Each draw is a pure function
/// of (key, counter), so streams keyed by (seed, run, purpose) produce the
/// same values regardless of construction or evaluation order. This is what
/// makes experiment batches bitwise reproducible even when runs execute
/// concurrently.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view purpose, std::uint64_t run = 0);

  std::uint64_t next_u64();

  /// Uniform draw in [0, 1).
  double uniform();

  /// Standard normal draw (Box-Muller on two uniform draws; spare cached).
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rgcg
