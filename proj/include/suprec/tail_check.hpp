#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace suprec {

/// One Monte Carlo domination cell: empirical tail of the sampled chi-square
/// against the closed-form bound at the same threshold.
struct TailCell {
  std::string bound;  // central-upper, central-lower, noncentral-upper, noncentral-lower
  int d = 0;
  double nu = 0.0;
  double x = 0.0;
  double threshold = 0.0;
  double prob_bound = 0.0;
  double empirical = 0.0;
  double stderr_mc = 0.0;  // sqrt(b (1 - b) / samples) at the bound b
  bool pass = false;
  bool wide_ci = false;    // 3 stderr exceeds the bound itself
};

struct TailCheckOptions {
  std::int64_t samples = 1000000;
  std::uint64_t seed = 1;
  std::vector<int> degrees{4, 16, 64};
  std::vector<double> nus{0.0, 5.0};
  std::vector<double> xs{0.5, 2.0, 8.0};
  /// Negative control: moves the central upper threshold of the first d and
  /// largest x down to the mean d, which must fail.
  bool break_one = false;
};

/// Runs every cell. Central bounds are checked on nu = 0 draws only; each
/// (d, nu) pair shares one sample set across all x values.
std::vector<TailCell> run_tail_checks(const TailCheckOptions& options);

struct SandwichFailure {
  int m = 0;
  int k = 0;
};

/// Checks (m/k)^k <= C(m, k) <= (m e / k)^k for 1 <= k <= m <= max_m against
/// exact integer binomials; returns the violating pairs.
std::vector<SandwichFailure> check_binomial_sandwich(int max_m);

}  // namespace suprec
