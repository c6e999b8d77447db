#pragma once

#include <cstdint>

namespace torent {

/// Deterministic counter-based generator (splitmix64 finalizer over a
/// keyed counter). Streams are cheap to derive by hashing a (seed, a, b)
/// path, so every task in a sweep gets its own independent stream and
/// results do not depend on scheduling. Not shareable between threads;
/// derive a child per task instead.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Child stream keyed by (seed, a, b); enlarging a sweep never perturbs
  /// the draws of existing (a, b) cells.
  static RandomStream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double next_double();

  /// Uniform on (0, 1]; safe to pass through log().
  double next_double_pos();

  /// Standard normal via Box-Muller.
  double next_gaussian();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace torent
