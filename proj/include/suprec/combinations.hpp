#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace suprec {

/// Revolving-door enumeration of the t-subsets of {0, ..., n-1}: each step
/// swaps exactly one element out and one element in (Knuth, TAOCP 7.2.1.3,
/// Algorithm R). The current subset is always held in ascending order.
class RevolvingDoor {
 public:
  RevolvingDoor(int n, int t);

  std::span<const int> current() const noexcept { return {c_.data() + 1, static_cast<std::size_t>(t_)}; }

  /// Advances to the next subset, reporting the swapped elements. Returns
  /// false (leaving the state unchanged) once every subset has been visited.
  bool next(int& removed, int& added);

 private:
  bool step();

  int n_;
  int t_;
  bool done_ = false;
  std::vector<int> c_;     // 1-based, c_[t + 1] = n sentinel
  std::vector<int> prev_;
};

/// C(m, k) exactly; -1 when the value exceeds 2^63 - 1.
std::int64_t binomial_exact(int m, int k) noexcept;

/// C(m, k) as a double (may be inexact above 2^53).
double binomial_double(int m, int k) noexcept;

}  // namespace suprec
