#include "suprec/rng.hpp"

#include <cmath>
#include <numbers>

namespace suprec {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t trial_index,
                          Stream tag) noexcept {
  std::uint64_t h = mix64(base_seed + kGolden);
  h = mix64(h ^ (trial_index + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (static_cast<std::uint64_t>(tag) * 0x8cb92ba72f3d8dd7ULL));
  return h;
}

std::uint64_t CounterRng::next_u64() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::uniform_below(std::uint64_t bound) noexcept {
  // Rejection on the top of the range keeps the result exactly uniform.
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
  std::uint64_t r = next_u64();
  while (r >= limit) r = next_u64();
  return r % bound;
}

double CounterRng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace suprec
