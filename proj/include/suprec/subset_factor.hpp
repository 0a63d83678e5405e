#pragma once

#include <span>
#include <vector>

#include "suprec/ensemble.hpp"

namespace suprec {

/// Upper-triangular factor R of X_U^T X_U (R^T R = X_U^T X_U) together with
/// z = R^{-T} X_U^T y, maintained under column append and column removal.
/// The residual is f(U) = ||y||^2 - ||z||^2. Columns are kept in insertion
/// order, which need not be sorted.
class SubsetFactor {
 public:
  /// Squared pivot, relative to the column's own squared norm, below which an
  /// appended column is rejected as dependent.
  static constexpr double kPivotTolerance = 1e-12;

  SubsetFactor(const GramCache& cache, int capacity);

  void clear() noexcept { size_ = 0; }

  /// Appends `column`. Returns false, leaving the factor unchanged, when the
  /// column is numerically in the span of the held columns.
  bool append(int column);

  /// Removes the column at `position` and restores triangularity with Givens
  /// rotations; O(size^2).
  void remove_at(int position);

  /// Position of `column` among the held columns, or -1.
  int position_of(int column) const noexcept;

  /// Clears and appends every column of `subset`, skipping dependent ones.
  /// Returns true when all columns were kept.
  bool rebuild(std::span<const int> subset);

  int size() const noexcept { return size_; }
  std::span<const int> columns() const noexcept { return {columns_.data(), static_cast<std::size_t>(size_)}; }

  /// ||P_U y||^2.
  double explained() const noexcept;

  /// max(0, ||y||^2 - explained()).
  double residual() const noexcept;

  /// Entry i of z = R^{-T} X_U^T y.
  double z(int i) const noexcept { return z_[static_cast<std::size_t>(i)]; }

  /// Least-squares coefficients for the held columns, in column order.
  void solve_coefficients(std::vector<double>& out) const;

  /// R(row, col), row <= col < size().
  double r(int row, int col) const noexcept { return r_[index(row, col)]; }

 private:
  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(col) * static_cast<std::size_t>(capacity_) +
           static_cast<std::size_t>(row);
  }

  const GramCache* cache_;
  int capacity_;
  int size_ = 0;
  std::vector<double> r_;       // column-major, capacity x capacity
  std::vector<double> z_;
  std::vector<int> columns_;
  std::vector<double> scratch_;
};

}  // namespace suprec
