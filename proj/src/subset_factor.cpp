#include "suprec/subset_factor.hpp"

#include <algorithm>
#include <cmath>

#include "suprec/errors.hpp"

namespace suprec {

SubsetFactor::SubsetFactor(const GramCache& cache, int capacity)
    : cache_(&cache),
      capacity_(capacity),
      r_(static_cast<std::size_t>(capacity) * static_cast<std::size_t>(capacity), 0.0),
      z_(static_cast<std::size_t>(capacity), 0.0),
      columns_(static_cast<std::size_t>(capacity), -1),
      scratch_(static_cast<std::size_t>(capacity), 0.0) {
  if (capacity < 1) throw DomainError("SubsetFactor: capacity must be positive");
}

bool SubsetFactor::append(int column) {
  if (size_ >= capacity_) throw DomainError("SubsetFactor: capacity exceeded");
  const Matrix& g = cache_->gram;
  const double diag = g(column, column);
  if (!(diag > 0.0)) return false;

  // Forward solve R^T r = X_U^T x_c.
  double norm_sq = 0.0;
  double cross = 0.0;
  for (int i = 0; i < size_; ++i) {
    double acc = g(columns_[static_cast<std::size_t>(i)], column);
    for (int l = 0; l < i; ++l) acc -= r_[index(l, i)] * scratch_[static_cast<std::size_t>(l)];
    const double ri = acc / r_[index(i, i)];
    scratch_[static_cast<std::size_t>(i)] = ri;
    norm_sq += ri * ri;
    cross += ri * z_[static_cast<std::size_t>(i)];
  }
  const double pivot_sq = diag - norm_sq;
  if (!(pivot_sq > kPivotTolerance * diag)) return false;

  const double pivot = std::sqrt(pivot_sq);
  for (int i = 0; i < size_; ++i) r_[index(i, size_)] = scratch_[static_cast<std::size_t>(i)];
  r_[index(size_, size_)] = pivot;
  z_[static_cast<std::size_t>(size_)] = (cache_->xty(column) - cross) / pivot;
  columns_[static_cast<std::size_t>(size_)] = column;
  ++size_;
  return true;
}

void SubsetFactor::remove_at(int position) {
  if (position < 0 || position >= size_) throw DomainError("SubsetFactor: bad position");
  // Shift later columns left; R becomes upper Hessenberg from `position` on.
  for (int c = position; c + 1 < size_; ++c) {
    for (int row = 0; row <= c + 1; ++row) r_[index(row, c)] = r_[index(row, c + 1)];
    columns_[static_cast<std::size_t>(c)] = columns_[static_cast<std::size_t>(c + 1)];
  }
  const int cols = size_ - 1;
  for (int k = position; k < cols; ++k) {
    const double a = r_[index(k, k)];
    const double b = r_[index(k + 1, k)];
    const double h = std::hypot(a, b);
    const double c = a / h;
    const double s = b / h;
    r_[index(k, k)] = h;
    r_[index(k + 1, k)] = 0.0;
    for (int j = k + 1; j < cols; ++j) {
      const double top = r_[index(k, j)];
      const double bottom = r_[index(k + 1, j)];
      r_[index(k, j)] = c * top + s * bottom;
      r_[index(k + 1, j)] = -s * top + c * bottom;
    }
    const double zt = z_[static_cast<std::size_t>(k)];
    const double zb = z_[static_cast<std::size_t>(k + 1)];
    z_[static_cast<std::size_t>(k)] = c * zt + s * zb;
    z_[static_cast<std::size_t>(k + 1)] = -s * zt + c * zb;
  }
  size_ = cols;
}

int SubsetFactor::position_of(int column) const noexcept {
  for (int i = 0; i < size_; ++i) {
    if (columns_[static_cast<std::size_t>(i)] == column) return i;
  }
  return -1;
}

bool SubsetFactor::rebuild(std::span<const int> subset) {
  clear();
  bool full = true;
  for (int c : subset) full = append(c) && full;
  return full;
}

void SubsetFactor::solve_coefficients(std::vector<double>& out) const {
  out.assign(static_cast<std::size_t>(size_), 0.0);
  for (int i = size_ - 1; i >= 0; --i) {
    double acc = z_[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < size_; ++j) acc -= r_[index(i, j)] * out[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = acc / r_[index(i, i)];
  }
}

double SubsetFactor::explained() const noexcept {
  double acc = 0.0;
  for (int i = 0; i < size_; ++i) acc += z_[static_cast<std::size_t>(i)] * z_[static_cast<std::size_t>(i)];
  return acc;
}

double SubsetFactor::residual() const noexcept {
  return std::max(0.0, cache_->yy - explained());
}

}  // namespace suprec
