#include "suprec/tails.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "suprec/errors.hpp"

namespace suprec {

namespace {

void check_args(int d, double nu, double x) {
  if (d < 1) throw DomainError("tail bound: degrees of freedom must be >= 1");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw DomainError("tail bound: non-centrality must be >= 0");
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("tail bound: deviation x must be > 0");
}

}  // namespace

double TailBound::prob_bound() const { return std::exp(log_prob_bound); }

TailBoundQuery::TailBoundQuery(int d_in, double nu_in, double x_in) : d(d_in), nu(nu_in), x(x_in) {
  check_args(d, nu, x);
}

TailBound chisq_central_upper(int d, double x) {
  check_args(d, 0.0, x);
  return {d + 2.0 * std::sqrt(d * x) + 2.0 * x, -x};
}

TailBound chisq_central_lower(int d, double x) {
  check_args(d, 0.0, x);
  return {d - 2.0 * std::sqrt(d * x), -x};
}

TailBound chisq_noncentral_upper(int d, double nu, double x) {
  check_args(d, nu, x);
  return {(d + nu) + 2.0 * std::sqrt((d + 2.0 * nu) * x) + 2.0 * x, -x};
}

TailBound chisq_noncentral_lower(int d, double nu, double x) {
  check_args(d, nu, x);
  return {(d + nu) - 2.0 * std::sqrt((d + 2.0 * nu) * x), -x};
}

double noncentral_lower_deviation(int d, double nu, double t) {
  if (d < 1 || !(nu >= 0.0)) throw DomainError("noncentral_lower_deviation: bad (d, nu)");
  const double gap = d + nu - t;
  if (!(gap >= 0.0)) throw DomainError("noncentral_lower_deviation: need d + nu >= t");
  return gap * gap / (4.0 * (d + 2.0 * nu));
}

double log_binom(int m, int k) {
  if (m < 0 || k < 0 || k > m) throw DomainError("log_binom: need 0 <= k <= m");
  const int small = std::min(k, m - k);
  if (small <= 64) {
    double acc = 0.0;
    for (int i = 1; i <= small; ++i) acc += std::log(static_cast<double>(m - small + i) / i);
    return acc;
  }
  return std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
}

BinomialBounds binom_bounds(int m, int k) {
  if (k < 1 || k > m) throw DomainError("binom_bounds: need 0 < k <= m");
  const double ratio = static_cast<double>(m) / k;
  BinomialBounds b;
  b.lower = std::pow(ratio, k);
  b.exact_log = log_binom(m, k);
  b.upper = std::pow(ratio * std::numbers::e, k);
  return b;
}

NoncentralChiSquareSampler::NoncentralChiSquareSampler(int d, double nu, std::uint64_t seed)
    : d_(d), shift_(std::sqrt(nu)), rng_(seed) {
  if (d < 1 || !(nu >= 0.0)) throw DomainError("NoncentralChiSquareSampler: bad (d, nu)");
}

double NoncentralChiSquareSampler::operator()() {
  double acc = 0.0;
  for (int i = 1; i < d_; ++i) {
    const double z = rng_.normal();
    acc += z * z;
  }
  const double shifted = rng_.normal() + shift_;
  return acc + shifted * shifted;
}

}  // namespace suprec
