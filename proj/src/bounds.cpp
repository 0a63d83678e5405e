#include "suprec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "suprec/combinations.hpp"
#include "suprec/errors.hpp"
#include "suprec/tails.hpp"

namespace suprec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(e^a + e^b) without overflow; either argument may be -inf.
double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

void check_sizes(int p, int s) {
  if (s < 1 || p < 1 || s >= p) throw DomainError("bounds: need 1 <= s < p");
}

void check_m2(double m2) {
  if (!(m2 > 0.0) || !std::isfinite(m2)) throw DomainError("bounds: m2 must be positive");
}

/// log(N - 1) for N = C(p, s) >= 3.
double log_hypotheses_minus_one(int p, int s) {
  const double log_n = log_binom(p, s);
  if (!(log_n >= std::log(3.0) - 1e-12)) throw DomainError("bounds: need C(p, s) >= 3");
  return log_n + std::log1p(-std::exp(-log_n));
}

}  // namespace

std::uint64_t overlap_count(int p, int s, int k) {
  if (s < 0 || p < s) throw DomainError("overlap_count: need 0 <= s <= p");
  if (k < 0 || k > s) throw DomainError("overlap_count: need 0 <= k <= s");
  if (k > p - s) return 0;
  const std::int64_t a = binomial_exact(s, k);
  const std::int64_t b = binomial_exact(p - s, k);
  if (a < 0 || b < 0) throw std::overflow_error("overlap_count: value exceeds 64 bits");
  const auto product = static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
  if (product > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max())) {
    throw std::overflow_error("overlap_count: value exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(product);
}

double log_overlap_count(int p, int s, int k) {
  if (s < 0 || p < s) throw DomainError("log_overlap_count: need 0 <= s <= p");
  if (k < 0 || k > s) throw DomainError("log_overlap_count: need 0 <= k <= s");
  if (k > p - s) return kNegInf;
  return log_binom(s, k) + log_binom(p - s, k);
}

PairwiseBound pairwise_error_bound(int n, int s, int k, double beta_norm_sq) {
  if (k < 1 || k > s || s >= n) throw DomainError("pairwise_error_bound: need 1 <= k <= s < n");
  if (!(beta_norm_sq > 0.0) || !std::isfinite(beta_norm_sq)) {
    throw DomainError("pairwise_error_bound: beta_norm_sq must be positive");
  }
  const double dof = n - s;
  const double first = -dof * beta_norm_sq / (12.0 * (beta_norm_sq + 4.0));
  const double bracket = -1.0 + dof * beta_norm_sq / (4.0 * k);
  const double second = std::numbers::ln2 - (k / 4.0) * bracket * bracket;

  PairwiseBound out;
  out.raw_log = log_add(first, second);
  out.bracket_nonnegative = bracket >= 0.0;
  out.log_bound = out.bracket_nonnegative ? std::min(0.0, out.raw_log) : 0.0;
  return out;
}

bool simplified_regime_valid(int n, int s, double m2) { return (n - s) * m2 / 4.0 >= 3.0; }

SimplifiedBound simplified_pairwise_bound(int n, int s, int k, double m2) {
  if (k < 1 || k > s || s >= n) throw DomainError("simplified_pairwise_bound: need 1 <= k <= s < n");
  check_m2(m2);
  const double km2 = k * m2;
  return {std::log(3.0) - (n - s) * km2 / (12.0 * (km2 + 8.0)), simplified_regime_valid(n, s, m2)};
}

UnionForm parse_union_form(const std::string& text) {
  if (text == "exact-lemma2" || text == "exact") return UnionForm::exact;
  if (text == "simplified") return UnionForm::simplified;
  throw DomainError("unknown union form '" + text + "' (expected exact-lemma2 or simplified)");
}

std::string to_string(UnionForm form) {
  return form == UnionForm::exact ? "exact-lemma2" : "simplified";
}

UnionBound union_error_bound(int n, int p, int s, double m2, UnionForm form) {
  check_sizes(p, s);
  check_m2(m2);
  if (s >= n) throw DomainError("union_error_bound: need s < n");

  UnionBound out;
  out.form = form;
  out.regime_valid = simplified_regime_valid(n, s, m2);
  out.log_value = kNegInf;
  out.terms.reserve(static_cast<std::size_t>(s));
  for (int k = 1; k <= s; ++k) {
    UnionTerm term;
    term.k = k;
    const double log_count = log_overlap_count(p, s, k);
    term.count = log_count == kNegInf ? 0.0 : binomial_double(s, k) * binomial_double(p - s, k);
    term.log_pairwise = form == UnionForm::exact
                            ? pairwise_error_bound(n, s, k, k * m2).log_bound
                            : simplified_pairwise_bound(n, s, k, m2).log_bound;
    term.log_term = log_count == kNegInf ? kNegInf : log_count + term.log_pairwise;
    out.log_value = log_add(out.log_value, term.log_term);
    out.terms.push_back(term);
  }
  out.clipped = out.log_value >= 0.0 ? 1.0 : std::exp(out.log_value);
  return out;
}

double sufficient_n(int p, int s, double m2, double c) {
  check_sizes(p, s);
  check_m2(m2);
  if (!(c > 0.0)) throw DomainError("sufficient_n: C must be positive");
  return c * std::max(s * std::log(static_cast<double>(p) / s), std::log(static_cast<double>(p - s)) / m2);
}

double necessary_n(int p, int s, double m2, double c_prime) {
  check_sizes(p, s);
  check_m2(m2);
  if (!(c_prime > 0.0)) throw DomainError("necessary_n: C' must be positive");
  return (c_prime / m2) * std::log(static_cast<double>(p) / s);
}

double gamma_uv(int s, int overlap, double m2) {
  if (s < 1 || overlap < 0 || overlap > s) throw DomainError("gamma_uv: need 0 <= overlap <= s");
  if (!(m2 >= 0.0)) throw DomainError("gamma_uv: m2 must be >= 0");
  return 2.0 * m2 * (s - overlap);
}

double kl_pairwise(const DesignMatrix& x, const SupportSet& u, const SupportSet& v, double magnitude) {
  if (u.size() != v.size()) throw DomainError("kl_pairwise: |U| must equal |V|");
  if (u.dimension() != x.cols() || v.dimension() != x.cols()) {
    throw DomainError("kl_pairwise: subset dimension != design columns");
  }
  // Shared columns cancel; only U \ V and V \ U contribute.
  Vector diff = Vector::Zero(x.rows());
  for (int i : u.indices()) {
    if (!v.contains(i)) diff += x.matrix().col(i);
  }
  for (int j : v.indices()) {
    if (!u.contains(j)) diff -= x.matrix().col(j);
  }
  return 0.5 * magnitude * magnitude * diff.squaredNorm();
}

std::vector<SupportSet> all_subsets(int p, int s) {
  if (s < 1 || s > p) throw DomainError("all_subsets: need 1 <= s <= p");
  std::vector<SupportSet> out;
  std::vector<int> idx(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.emplace_back(idx, p);
    int i = s - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == p - s + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < s; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

namespace {

/// Mean vectors X_U v for every hypothesis, one per column.
Matrix hypothesis_means(const DesignMatrix& x, int s, double magnitude) {
  const double count = binomial_double(x.cols(), s);
  if (count > kMaxKlHypotheses) throw DomainError("kl_matrix: too many hypotheses to tabulate");
  const std::vector<SupportSet> subsets = all_subsets(x.cols(), s);
  Matrix means(x.rows(), static_cast<Eigen::Index>(subsets.size()));
  for (std::size_t h = 0; h < subsets.size(); ++h) {
    Vector mu = Vector::Zero(x.rows());
    for (int i : subsets[h].indices()) mu += x.matrix().col(i);
    means.col(static_cast<Eigen::Index>(h)) = magnitude * mu;
  }
  return means;
}

}  // namespace

Matrix kl_matrix(const DesignMatrix& x, int s, double magnitude) {
  const Matrix means = hypothesis_means(x, s, magnitude);
  const Eigen::Index count = means.cols();
  Matrix kl = Matrix::Zero(count, count);
  for (Eigen::Index i = 0; i < count; ++i) {
    for (Eigen::Index j = i + 1; j < count; ++j) {
      const double d = 0.5 * (means.col(i) - means.col(j)).squaredNorm();
      kl(i, j) = d;
      kl(j, i) = d;
    }
  }
  return kl;
}

double fano_bound_exact(const Matrix& kl) {
  const Eigen::Index count = kl.rows();
  if (kl.cols() != count) throw DomainError("fano_bound_exact: matrix must be square");
  if (count < 3) throw DomainError("fano_bound_exact: need N >= 3 hypotheses");
  double total = 0.0;
  for (Eigen::Index i = 0; i < count; ++i) {
    if (kl(i, i) != 0.0) throw DomainError("fano_bound_exact: diagonal must be zero");
    for (Eigen::Index j = 0; j < count; ++j) {
      if (!(kl(i, j) >= 0.0)) throw DomainError("fano_bound_exact: divergences must be >= 0");
      total += kl(i, j);
    }
  }
  const double n_sq = static_cast<double>(count) * static_cast<double>(count);
  return 1.0 - (total / n_sq + std::numbers::ln2) / std::log(static_cast<double>(count - 1));
}

double fano_bound_ensemble(int n, int p, int s, double m2) {
  if (s < 1 || s > p) throw DomainError("fano_bound_ensemble: need 1 <= s <= p");
  if (n < 0 || !(m2 >= 0.0)) throw DomainError("fano_bound_ensemble: need n >= 0, m2 >= 0");
  return 1.0 - (4.0 * m2 * s * n + std::numbers::ln2) / log_hypotheses_minus_one(p, s);
}

MarkovTail markov_z_tail(int n, int s, double m2) {
  if (n < 1 || s < 1 || !(m2 >= 0.0)) throw DomainError("markov_z_tail: need n, s >= 1 and m2 >= 0");
  return {4.0 * m2 * s * n, 0.5};
}

double z_statistic(const DesignMatrix& x, int s, double magnitude) {
  const Matrix means = hypothesis_means(x, s, magnitude);
  const Eigen::Index count = means.cols();
  double total = 0.0;
  for (Eigen::Index i = 0; i < count; ++i) {
    for (Eigen::Index j = 0; j < count; ++j) {
      if (i != j) total += (means.col(i) - means.col(j)).squaredNorm();
    }
  }
  return total / (static_cast<double>(count) * static_cast<double>(count));
}

BoundReport bound_report(int n, int p, int s, double m2, const BoundOptions& options) {
  if (n < 1 || p < 1 || s < 1 || s > p) throw DomainError("bound_report: need n >= 1 and 1 <= s <= p");
  check_m2(m2);
  BoundReport report;
  report.n = n;
  report.p = p;
  report.s = s;
  report.m2 = m2;
  if (s < p) {
    report.sufficient_n = sufficient_n(p, s, m2, options.c);
    report.necessary_n = necessary_n(p, s, m2, options.c_prime);
    if (s < n) {
      report.union_bound = union_error_bound(n, p, s, m2, options.union_form);
      report.regime_valid = report.union_bound->regime_valid;
    }
  }
  if (log_binom(p, s) >= std::log(3.0) - 1e-12) report.fano_ensemble = fano_bound_ensemble(n, p, s, m2);
  return report;
}

}  // namespace suprec
