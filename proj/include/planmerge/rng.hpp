#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace planmerge {

/// Seeded generator with a fixed draw budget per call.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard.
/// The distributions are implemented here instead of using <random>'s, since
/// those are implementation-defined and would break cross-platform
/// reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream derived from a master seed and a label,
  /// e.g. stream(seed, "init") or stream(seed, "node", 3).
  static Rng stream(std::uint64_t master_seed, std::string_view label, std::uint64_t index = 0);

  /// One draw.
  std::uint64_t next_u64() {
    ++draws_;
    return engine_();
  }

  /// Uniform integer in [0, n). One draw; n must be >= 1.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Uniform double in [0, 1). One draw, 53-bit resolution.
  double uniform01();

  /// Standard normal via Box-Muller. Always two draws; the second variate is discarded.
  double standard_normal();

  std::uint64_t draws() const { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

/// splitmix64 finalizer, used to derive stream seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace planmerge
