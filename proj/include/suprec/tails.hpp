#pragma once

#include <cstdint>

#include "suprec/rng.hpp"

namespace suprec {

/// A deviation threshold and the log of the probability bound attached to it.
struct TailBound {
  double threshold = 0.0;
  double log_prob_bound = 0.0;

  double prob_bound() const;
};

/// Arguments of a chi-square tail query; validated on construction.
struct TailBoundQuery {
  TailBoundQuery(int d, double nu, double x);

  int d;
  double nu;
  double x;
};

// Laurent-Massart bounds for X ~ chi^2_d, x > 0:
//   P[X >= d + 2 sqrt(d x) + 2x] <= exp(-x)
//   P[X <= d - 2 sqrt(d x)]      <= exp(-x)
TailBound chisq_central_upper(int d, double x);
TailBound chisq_central_lower(int d, double x);

// Birge bounds for a non-central chi^2 with d degrees of freedom and
// non-centrality nu >= 0, x > 0:
//   P[X >= (d + nu) + 2 sqrt((d + 2 nu) x) + 2x] <= exp(-x)
//   P[X <= (d + nu) - 2 sqrt((d + 2 nu) x)]      <= exp(-x)
TailBound chisq_noncentral_upper(int d, double nu, double x);
TailBound chisq_noncentral_lower(int d, double nu, double x);

/// The x at which the non-central lower threshold equals t, for d + nu >= t.
double noncentral_lower_deviation(int d, double nu, double t);

struct BinomialBounds {
  double lower = 0.0;      // (m / k)^k
  double exact_log = 0.0;  // log C(m, k)
  double upper = 0.0;      // (m e / k)^k
};

/// Crude sandwich (m/k)^k <= C(m, k) <= (m e / k)^k for 0 < k <= m.
BinomialBounds binom_bounds(int m, int k);

/// Natural log of C(m, k), 0 <= k <= m. Direct product for small min(k, m - k),
/// log-gamma otherwise.
double log_binom(int m, int k);

/// Draw from the non-central chi-square: d - 1 squared standard normals plus
/// (Z + sqrt(nu))^2.
class NoncentralChiSquareSampler {
 public:
  NoncentralChiSquareSampler(int d, double nu, std::uint64_t seed);

  double operator()();

 private:
  int d_;
  double shift_;
  CounterRng rng_;
};

}  // namespace suprec
