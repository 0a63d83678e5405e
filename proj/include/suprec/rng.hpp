#pragma once

#include <cstdint>

namespace suprec {

/// Independent random streams used by one Monte Carlo trial.
enum class Stream : std::uint64_t {
  design = 1,
  signal = 2,
  noise = 3,
  verify = 4,
};

/// Hashes (experiment seed, trial index, stream tag) into a 64-bit stream key.
/// Every draw of a trial is a function of this key and a draw counter only.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t trial_index,
                          Stream tag) noexcept;

/// Counter-based generator: output i is mix64(key + (i + 1) * golden).
///
/// This is SplitMix64 viewed as a keyed counter hash, so any draw can be
/// recomputed from (key, counter) without replaying the stream. Normals use
/// the Box-Muller transform and consume exactly two 64-bit words
/// per pair of variates.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept;

  /// Uniform integer on [0, bound) by rejection; bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;

  double normal() noexcept;

  bool coin() noexcept { return (next_u64() >> 63) != 0; }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace suprec
