#include "suprec/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "suprec/errors.hpp"
#include "suprec/rng.hpp"
#include "suprec/subset_factor.hpp"

namespace suprec {

SupportSet::SupportSet(std::vector<int> indices, int p) : indices_(std::move(indices)), p_(p) {
  if (p < 1) throw DomainError("SupportSet: dimension must be positive");
  if (indices_.empty() || static_cast<int>(indices_.size()) > p) {
    throw DomainError("SupportSet: size must satisfy 1 <= s <= p");
  }
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || indices_[i] >= p) throw DomainError("SupportSet: index out of range");
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw DomainError("SupportSet: indices must be strictly increasing");
    }
  }
}

SupportSet SupportSet::from_unsorted(std::vector<int> indices, int p) {
  std::sort(indices.begin(), indices.end());
  return SupportSet(std::move(indices), p);
}

SupportSet SupportSet::leading(int s, int p) {
  std::vector<int> idx(static_cast<std::size_t>(std::max(s, 0)));
  std::iota(idx.begin(), idx.end(), 0);
  return SupportSet(std::move(idx), p);
}

bool SupportSet::contains(int index) const noexcept {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

int SupportSet::overlap(const SupportSet& other) const noexcept {
  int count = 0;
  auto a = indices_.begin();
  auto b = other.indices_.begin();
  while (a != indices_.end() && b != other.indices_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++count;
      ++a;
      ++b;
    }
  }
  return count;
}

std::string SupportSet::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) out << ',';
    out << indices_[i];
  }
  out << '}';
  return out.str();
}

DesignMatrix::DesignMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw DomainError("DesignMatrix: shape must be at least 1 x 1");
  }
  if (!entries_.allFinite()) throw DomainError("DesignMatrix: entries must be finite");
}

Matrix DesignMatrix::columns(std::span<const int> subset) const {
  Matrix out(entries_.rows(), static_cast<Eigen::Index>(subset.size()));
  for (std::size_t j = 0; j < subset.size(); ++j) {
    if (subset[j] < 0 || subset[j] >= cols()) throw DomainError("DesignMatrix: column out of range");
    out.col(static_cast<Eigen::Index>(j)) = entries_.col(subset[j]);
  }
  return out;
}

DesignMatrix DesignMatrix::top_rows(int n) const {
  if (n < 1 || n > rows()) throw DomainError("DesignMatrix: row count out of range");
  return DesignMatrix(entries_.topRows(n));
}

SignMode parse_sign_mode(const std::string& text) {
  if (text == "all-positive") return SignMode::all_positive;
  if (text == "random-sign") return SignMode::random_sign;
  throw DomainError("unknown sign mode '" + text + "' (expected all-positive or random-sign)");
}

std::string to_string(SignMode mode) {
  return mode == SignMode::all_positive ? "all-positive" : "random-sign";
}

SparseSignal::SparseSignal(SupportSet support, std::vector<double> values)
    : support_(std::move(support)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != support_.size()) {
    throw DomainError("SparseSignal: one value per support index required");
  }
  min_magnitude_ = std::numeric_limits<double>::infinity();
  for (double v : values_) {
    if (!(v != 0.0) || !std::isfinite(v)) {
      throw DomainError("SparseSignal: support values must be finite and nonzero");
    }
    min_magnitude_ = std::min(min_magnitude_, std::abs(v));
  }
}

Vector SparseSignal::dense() const {
  Vector out = Vector::Zero(dimension());
  for (int i = 0; i < sparsity(); ++i) out(support_[i]) = values_[static_cast<std::size_t>(i)];
  return out;
}

DesignMatrix sample_design(int n, int p, std::uint64_t seed) {
  if (n < 1 || p < 1) throw DomainError("sample_design: n and p must be positive");
  CounterRng rng(seed);
  Matrix x(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
  }
  return DesignMatrix(std::move(x));
}

SparseSignal sample_signal(int p, int s, double min_magnitude, SignMode sign_mode,
                           std::uint64_t seed) {
  if (p < 1 || s < 1 || s > p) throw DomainError("sample_signal: need 1 <= s <= p");
  if (!(min_magnitude > 0.0) || !std::isfinite(min_magnitude)) {
    throw DomainError("sample_signal: min_magnitude must be positive");
  }
  CounterRng rng(seed);
  // Partial Fisher-Yates: the first s slots are a uniform s-subset.
  std::vector<int> pool(static_cast<std::size_t>(p));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < s; ++i) {
    const auto j = static_cast<std::size_t>(i) +
                   rng.uniform_below(static_cast<std::uint64_t>(p - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(s));
  std::sort(pool.begin(), pool.end());

  std::vector<double> values(static_cast<std::size_t>(s), min_magnitude);
  if (sign_mode == SignMode::random_sign) {
    for (double& v : values) v = rng.coin() ? -min_magnitude : min_magnitude;
  }
  return SparseSignal(SupportSet(std::move(pool), p), std::move(values));
}

ObservationVector observe(const DesignMatrix& x, const SparseSignal& beta, double sigma,
                          std::uint64_t seed) {
  if (beta.dimension() != x.cols()) throw DomainError("observe: signal dimension != design columns");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("observe: sigma must be >= 0");
  Vector y = Vector::Zero(x.rows());
  for (int i = 0; i < beta.sparsity(); ++i) {
    y += beta.values()[static_cast<std::size_t>(i)] * x.matrix().col(beta.support()[i]);
  }
  CounterRng rng(seed);
  for (int i = 0; i < x.rows(); ++i) {
    const double w = rng.normal();
    if (sigma > 0.0) y(i) += sigma * w;
  }
  return ObservationVector{std::move(y), sigma};
}

double residual_sq(const Matrix& x_u, const Vector& y) {
  if (x_u.rows() != y.size()) throw DomainError("residual_sq: row count != observation length");
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(x_u.cols()));
  for (Eigen::Index j = 0; j < x_u.cols(); ++j) {
    Vector q = x_u.col(j);
    const double original = q.norm();
    if (!(original > 0.0)) continue;
    // Two Gram-Schmidt passes keep the basis orthogonal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& b : basis) q -= b.dot(q) * b;
    }
    const double remaining = q.norm();
    if (remaining <= kRankTolerance * original) continue;
    basis.push_back(q / remaining);
  }
  Vector r = y;
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vector& b : basis) r -= b.dot(r) * b;
  }
  return r.squaredNorm();
}

double residual_sq(const DesignMatrix& x, const SupportSet& subset, const Vector& y) {
  if (subset.dimension() != x.cols()) throw DomainError("residual_sq: subset dimension mismatch");
  return residual_sq(x.columns(subset), y);
}

double GramCache::residual_sq(std::span<const int> subset) const {
  const int p = dimension();
  for (int c : subset) {
    if (c < 0 || c >= p) throw DomainError("GramCache: subset index out of range");
  }
  if (subset.empty()) return yy;
  SubsetFactor factor(*this, static_cast<int>(subset.size()));
  factor.rebuild(subset);
  return factor.residual();
}

GramCache gram_precompute(const DesignMatrix& x, const Vector& y) {
  if (y.size() != x.rows()) throw DomainError("gram_precompute: observation length != design rows");
  GramCache cache;
  cache.gram = x.matrix().transpose() * x.matrix();
  cache.xty = x.matrix().transpose() * y;
  cache.yy = y.squaredNorm();
  cache.n = x.rows();
  return cache;
}

}  // namespace suprec
