#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace suprec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sorted set of distinct column indices in [0, p).
class SupportSet {
 public:
  SupportSet() = default;

  /// Takes indices that are already strictly increasing and in range.
  SupportSet(std::vector<int> indices, int p);

  /// Sorts first; still rejects duplicates and out-of-range entries.
  static SupportSet from_unsorted(std::vector<int> indices, int p);

  /// {0, 1, ..., s-1}.
  static SupportSet leading(int s, int p);

  std::span<const int> indices() const noexcept { return indices_; }
  int size() const noexcept { return static_cast<int>(indices_.size()); }
  int dimension() const noexcept { return p_; }
  int operator[](int i) const { return indices_[static_cast<std::size_t>(i)]; }
  bool contains(int index) const noexcept;

  /// |this ∩ other|.
  int overlap(const SupportSet& other) const noexcept;

  std::string to_string() const;

  friend bool operator==(const SupportSet& a, const SupportSet& b) noexcept {
    return a.indices_ == b.indices_;
  }
  /// Lexicographic order on the sorted index sequence.
  friend std::strong_ordering operator<=>(const SupportSet& a, const SupportSet& b) noexcept {
    return a.indices_ <=> b.indices_;
  }

 private:
  std::vector<int> indices_;
  int p_ = 0;
};

/// n x p measurement matrix; all entries finite.
class DesignMatrix {
 public:
  explicit DesignMatrix(Matrix entries);

  int rows() const noexcept { return static_cast<int>(entries_.rows()); }
  int cols() const noexcept { return static_cast<int>(entries_.cols()); }
  const Matrix& matrix() const noexcept { return entries_; }

  /// Copy of the columns indexed by `subset`, in subset order.
  Matrix columns(std::span<const int> subset) const;
  Matrix columns(const SupportSet& subset) const { return columns(subset.indices()); }

  /// Leading `n` rows (used to share one draw across a sample-size grid).
  DesignMatrix top_rows(int n) const;

 private:
  Matrix entries_;
};

enum class SignMode { all_positive, random_sign };

SignMode parse_sign_mode(const std::string& text);
std::string to_string(SignMode mode);

/// beta* restricted to its support; off-support coordinates are zero.
class SparseSignal {
 public:
  SparseSignal(SupportSet support, std::vector<double> values);

  int dimension() const noexcept { return support_.dimension(); }
  int sparsity() const noexcept { return support_.size(); }
  const SupportSet& support() const noexcept { return support_; }
  std::span<const double> values() const noexcept { return values_; }

  /// min over the support of |beta*_i|.
  double min_magnitude() const noexcept { return min_magnitude_; }

  Vector dense() const;

 private:
  SupportSet support_;
  std::vector<double> values_;
  double min_magnitude_ = 0.0;
};

struct ObservationVector {
  Vector y;
  double sigma = 1.0;
};

/// i.i.d. N(0, 1) entries drawn row-major from one stream, so the first n
/// rows of an (n', p) draw equal the (n, p) draw for n <= n'.
DesignMatrix sample_design(int n, int p, std::uint64_t seed);

/// Support uniform over all C(p, s) subsets; every value has magnitude
/// `min_magnitude`, signs fixed positive or independent fair coins.
SparseSignal sample_signal(int p, int s, double min_magnitude, SignMode sign_mode,
                           std::uint64_t seed);

/// y = X beta* + sigma * W with W i.i.d. N(0, 1). The noise stream is drawn
/// even when sigma = 0, so changing sigma never shifts other draws.
ObservationVector observe(const DesignMatrix& x, const SparseSignal& beta, double sigma,
                          std::uint64_t seed);

/// Relative column-norm threshold below which a column is treated as lying in
/// the span of the columns before it.
inline constexpr double kRankTolerance = 1e-10;

/// min_b ||y - X_U b||^2, computed as ||P_perp y||^2 with re-orthogonalised
/// Gram-Schmidt. Dependent columns are skipped, so the value stays the true
/// minimum when X_U is rank deficient.
double residual_sq(const Matrix& x_u, const Vector& y);
double residual_sq(const DesignMatrix& x, const SupportSet& subset, const Vector& y);

/// X^T X, X^T y and ||y||^2 for one instance; enough to evaluate f(U) for any
/// subset without touching X again.
struct GramCache {
  Matrix gram;
  Vector xty;
  double yy = 0.0;
  int n = 0;

  int dimension() const noexcept { return static_cast<int>(gram.rows()); }

  /// f(U) via a from-scratch Cholesky of X_U^T X_U that skips dependent columns.
  double residual_sq(std::span<const int> subset) const;
  double residual_sq(const SupportSet& subset) const { return residual_sq(subset.indices()); }
};

GramCache gram_precompute(const DesignMatrix& x, const Vector& y);

}  // namespace suprec
