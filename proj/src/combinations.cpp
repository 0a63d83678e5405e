#include "suprec/combinations.hpp"

#include <algorithm>
#include <cmath>

#include "suprec/errors.hpp"

namespace suprec {

RevolvingDoor::RevolvingDoor(int n, int t)
    : n_(n), t_(t), c_(static_cast<std::size_t>(t) + 2), prev_(static_cast<std::size_t>(t)) {
  if (t < 1 || t > n) throw DomainError("RevolvingDoor: need 1 <= t <= n");
  for (int j = 1; j <= t; ++j) c_[static_cast<std::size_t>(j)] = j - 1;
  c_[static_cast<std::size_t>(t) + 1] = n;
}

bool RevolvingDoor::step() {
  auto c = [this](int j) -> int& { return c_[static_cast<std::size_t>(j)]; };
  if (t_ == n_) return false;
  if (t_ == 1) {
    if (c(1) + 1 < n_) {
      ++c(1);
      return true;
    }
    return false;
  }
  int j = 2;
  bool increase;  // true: enter at R5, false: enter at R4
  if (t_ % 2 == 1) {
    if (c(1) + 1 < c(2)) {
      ++c(1);
      return true;
    }
    increase = false;
  } else {
    if (c(1) > 0) {
      --c(1);
      return true;
    }
    increase = true;
  }
  while (true) {
    if (!increase) {
      // R4: c_j = c_{j-1} + 1 here; try to decrease c_j.
      if (c(j) >= j) {
        c(j) = c(j - 1);
        c(j - 1) = j - 2;
        return true;
      }
      ++j;
      if (j > t_) return false;
    }
    // R5: c_{j-1} = j - 2 here; try to increase c_j.
    if (c(j) + 1 < c(j + 1)) {
      c(j - 1) = c(j);
      ++c(j);
      return true;
    }
    ++j;
    if (j > t_) return false;
    increase = false;
  }
}

bool RevolvingDoor::next(int& removed, int& added) {
  if (done_) return false;
  std::copy(c_.begin() + 1, c_.begin() + 1 + t_, prev_.begin());
  if (!step()) {
    done_ = true;
    return false;
  }
  // Both sequences are sorted; the symmetric difference has one element each side.
  const auto cur = current();
  std::size_t a = 0;
  std::size_t b = 0;
  removed = -1;
  added = -1;
  while (a < prev_.size() || b < cur.size()) {
    if (b == cur.size() || (a < prev_.size() && prev_[a] < cur[b])) {
      removed = prev_[a++];
    } else if (a == prev_.size() || cur[b] < prev_[a]) {
      added = cur[b++];
    } else {
      ++a;
      ++b;
    }
  }
  return true;
}

std::int64_t binomial_exact(int m, int k) noexcept {
  if (k < 0 || m < 0 || k > m) return 0;
  k = std::min(k, m - k);
  unsigned __int128 acc = 1;
  constexpr unsigned __int128 kMax = static_cast<unsigned __int128>(INT64_MAX);
  for (int i = 1; i <= k; ++i) {
    // acc * (m - k + i) / i stays integral at every step.
    acc = acc * static_cast<unsigned __int128>(m - k + i) / static_cast<unsigned __int128>(i);
    if (acc > kMax) return -1;
  }
  return static_cast<std::int64_t>(acc);
}

double binomial_double(int m, int k) noexcept {
  if (k < 0 || m < 0 || k > m) return 0.0;
  const std::int64_t exact = binomial_exact(m, k);
  if (exact >= 0) return static_cast<double>(exact);
  return std::exp(std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0));
}

}  // namespace suprec
