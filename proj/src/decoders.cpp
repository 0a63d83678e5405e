#include "suprec/decoders.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "suprec/combinations.hpp"
#include "suprec/errors.hpp"
#include "suprec/subset_factor.hpp"

namespace suprec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Calls visit(subset, f(subset)) for every s-subset in revolving-door order.
/// The sequence of residuals is a pure function of (cache, s, refresh).
template <typename Visit>
std::uint64_t enumerate_residuals(const GramCache& cache, int s, int refresh, Visit&& visit) {
  RevolvingDoor door(cache.dimension(), s);
  SubsetFactor factor(cache, s);
  bool clean = factor.rebuild(door.current());
  visit(door.current(), factor.residual());
  std::uint64_t visited = 1;
  int removed = 0;
  int added = 0;
  int since_refresh = 0;
  while (door.next(removed, added)) {
    ++since_refresh;
    if (clean && since_refresh < refresh) {
      factor.remove_at(factor.position_of(removed));
      clean = factor.append(added);
      if (!clean) clean = factor.rebuild(door.current());
    } else {
      clean = factor.rebuild(door.current());
      since_refresh = 0;
    }
    visit(door.current(), factor.residual());
    ++visited;
  }
  return visited;
}

bool lexicographically_less(std::span<const int> a, std::span<const int> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

constexpr std::size_t kCandidateCap = 4096;

}  // namespace

DecodeResult decode_exhaustive(const GramCache& cache, int s, const ExhaustiveOptions& options) {
  const int p = cache.dimension();
  if (s < 1 || s > p) throw DomainError("decode_exhaustive: need 1 <= s <= p");
  if (!(options.tolerance >= 0.0)) throw DomainError("decode_exhaustive: tolerance must be >= 0");
  if (options.refresh_interval < 1) throw DomainError("decode_exhaustive: refresh interval must be >= 1");
  const double count = binomial_double(p, s);
  if (count > options.budget) throw BudgetError(count, options.budget);

  const auto start = Clock::now();
  const double window = options.tolerance * cache.yy;
  const auto width = static_cast<std::size_t>(s);

  // Pass 1: running minimum plus every subset still within the tie window.
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> cand_f;
  std::vector<int> cand_sets;
  bool overflow = false;
  const std::uint64_t visited =
      enumerate_residuals(cache, s, options.refresh_interval, [&](std::span<const int> subset, double f) {
        if (f < best) {
          best = f;
          if (!overflow) {
            std::size_t keep = 0;
            for (std::size_t i = 0; i < cand_f.size(); ++i) {
              if (cand_f[i] <= best + window) {
                cand_f[keep] = cand_f[i];
                std::copy_n(cand_sets.begin() + static_cast<std::ptrdiff_t>(i * width), width,
                            cand_sets.begin() + static_cast<std::ptrdiff_t>(keep * width));
                ++keep;
              }
            }
            cand_f.resize(keep);
            cand_sets.resize(keep * width);
          }
        }
        if (!overflow && f <= best + window) {
          if (cand_f.size() == kCandidateCap) {
            overflow = true;
            cand_f.clear();
            cand_sets.clear();
          } else {
            cand_f.push_back(f);
            cand_sets.insert(cand_sets.end(), subset.begin(), subset.end());
          }
        }
      });

  const double threshold = best + window;
  std::vector<int> winner;
  std::uint64_t ties = 0;
  auto consider = [&](std::span<const int> subset, double f) {
    if (f > threshold) return;
    ++ties;
    if (winner.empty() || lexicographically_less(subset, winner)) winner.assign(subset.begin(), subset.end());
  };
  if (!overflow) {
    for (std::size_t i = 0; i < cand_f.size(); ++i) {
      consider({cand_sets.data() + i * width, width}, cand_f[i]);
    }
  } else {
    // Too many near-ties to hold; replay the identical enumeration.
    enumerate_residuals(cache, s, options.refresh_interval, consider);
  }

  DecodeResult result;
  result.estimate = SupportSet(std::move(winner), p);
  result.min_residual = cache.residual_sq(result.estimate);
  result.tie_count = ties;
  result.subsets_evaluated = visited;
  result.elapsed_seconds = seconds_since(start);
  result.underdetermined = s > cache.n;
  return result;
}

PairwiseStatistic delta_statistic(const DesignMatrix& x, const Vector& y, const SparseSignal& beta,
                                  const SupportSet& candidate) {
  if (beta.dimension() != x.cols() || candidate.dimension() != x.cols()) {
    throw DomainError("delta_statistic: dimension mismatch");
  }
  if (y.size() != x.rows()) throw DomainError("delta_statistic: observation length != design rows");
  if (candidate.size() != beta.sparsity()) throw DomainError("delta_statistic: |U| must equal |S|");

  PairwiseStatistic stat;
  stat.subset = candidate;
  const SupportSet& truth = beta.support();
  stat.overlap_complement = truth.size() - truth.overlap(candidate);
  if (stat.overlap_complement == 0) return stat;

  const Vector noise = y - x.matrix() * beta.dense();
  Vector missed = noise;
  for (int i = 0; i < truth.size(); ++i) {
    if (!candidate.contains(truth[i])) {
      missed += beta.values()[static_cast<std::size_t>(i)] * x.matrix().col(truth[i]);
    }
  }
  stat.delta = residual_sq(x.columns(candidate), missed) - residual_sq(x.columns(truth), noise);
  return stat;
}

DecodeResult decode_omp(const GramCache& cache, int s) {
  const int p = cache.dimension();
  if (s < 1 || s > p) throw DomainError("decode_omp: need 1 <= s <= p");
  const auto start = Clock::now();

  SubsetFactor factor(cache, s);
  std::vector<int> active;
  std::vector<char> taken(static_cast<std::size_t>(p), 0);
  std::vector<double> coef;
  for (int step = 0; step < s; ++step) {
    factor.solve_coefficients(coef);
    const auto held = factor.columns();
    int choice = -1;
    double best = -1.0;
    for (int j = 0; j < p; ++j) {
      if (taken[static_cast<std::size_t>(j)]) continue;
      double corr = cache.xty(j);
      for (std::size_t i = 0; i < held.size(); ++i) corr -= cache.gram(j, held[i]) * coef[i];
      const double score = std::abs(corr);
      if (score > best) {
        best = score;
        choice = j;
      }
    }
    taken[static_cast<std::size_t>(choice)] = 1;
    active.push_back(choice);
    // A dependent column adds nothing to the fit; it is still part of the estimate.
    factor.append(choice);
  }

  DecodeResult result;
  result.estimate = SupportSet::from_unsorted(std::move(active), p);
  result.min_residual = cache.residual_sq(result.estimate);
  result.subsets_evaluated = static_cast<std::uint64_t>(s);
  result.elapsed_seconds = seconds_since(start);
  result.underdetermined = s > cache.n;
  return result;
}

std::vector<double> default_lambda_grid(const DesignMatrix& x, const Vector& y, int count, double ratio) {
  if (count < 1) throw DomainError("default_lambda_grid: count must be positive");
  if (!(ratio > 0.0 && ratio <= 1.0)) throw DomainError("default_lambda_grid: ratio must lie in (0, 1]");
  if (y.size() != x.rows()) throw DomainError("default_lambda_grid: observation length != design rows");
  double top = (x.matrix().transpose() * y).cwiseAbs().maxCoeff();
  if (!(top > 0.0)) top = 1.0;
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double frac = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    grid[static_cast<std::size_t>(i)] = top * std::pow(ratio, frac);
  }
  return grid;
}

LassoSolution lasso_coordinate_descent(const DesignMatrix& x, const Vector& y, double lambda,
                                       const Vector& start, int max_sweeps, double tolerance) {
  const Matrix& a = x.matrix();
  if (y.size() != a.rows() || start.size() != a.cols()) {
    throw DomainError("lasso_coordinate_descent: dimension mismatch");
  }
  if (!(lambda >= 0.0)) throw DomainError("lasso_coordinate_descent: lambda must be >= 0");

  LassoSolution sol;
  sol.beta = start;
  Vector residual = y - a * sol.beta;
  const Vector norms = a.colwise().squaredNorm().transpose();
  sol.converged = false;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double norm = norms(j);
      if (!(norm > 0.0)) continue;
      const double old = sol.beta(j);
      const double rho = a.col(j).dot(residual) + norm * old;
      const double shrunk = std::copysign(std::max(std::abs(rho) - lambda, 0.0), rho);
      const double updated = shrunk / norm;
      const double change = updated - old;
      if (change != 0.0) {
        residual -= change * a.col(j);
        sol.beta(j) = updated;
        max_change = std::max(max_change, std::abs(change));
      }
    }
    sol.sweeps = sweep;
    if (max_change < tolerance) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

DecodeResult decode_lasso(const DesignMatrix& x, const Vector& y, int s, const LassoOptions& options) {
  const int p = x.cols();
  if (s < 1 || s > p) throw DomainError("decode_lasso: need 1 <= s <= p");
  if (y.size() != x.rows()) throw DomainError("decode_lasso: observation length != design rows");
  const std::vector<double> grid =
      options.lambda_grid.empty() ? default_lambda_grid(x, y) : options.lambda_grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw DomainError("decode_lasso: lambda grid must be positive");
    if (i > 0 && !(grid[i] < grid[i - 1])) throw DomainError("decode_lasso: lambda grid must be decreasing");
  }
  const auto start = Clock::now();

  DecodeResult result;
  result.converged = true;
  Vector beta = Vector::Zero(p);
  std::vector<int> chosen;
  for (double lambda : grid) {
    LassoSolution sol = lasso_coordinate_descent(x, y, lambda, beta, options.max_sweeps, options.tolerance);
    result.converged = result.converged && sol.converged;
    beta = std::move(sol.beta);
    ++result.subsets_evaluated;
    std::vector<int> nonzero;
    for (int j = 0; j < p; ++j) {
      if (std::abs(beta(j)) > options.nonzero_threshold) nonzero.push_back(j);
    }
    if (static_cast<int>(nonzero.size()) == s) {
      chosen = std::move(nonzero);
      break;
    }
  }
  if (chosen.empty()) {
    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(beta(a)) > std::abs(beta(b)); });
    chosen.assign(order.begin(), order.begin() + s);
  }

  result.estimate = SupportSet::from_unsorted(std::move(chosen), p);
  result.min_residual = residual_sq(x, result.estimate, y);
  result.elapsed_seconds = seconds_since(start);
  result.underdetermined = s > x.rows();
  return result;
}

DecoderKind parse_decoder(const std::string& text) {
  if (text == "exhaustive") return DecoderKind::exhaustive;
  if (text == "omp") return DecoderKind::omp;
  if (text == "lasso") return DecoderKind::lasso;
  throw DomainError("unknown decoder '" + text + "' (expected exhaustive, omp or lasso)");
}

std::string to_string(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::exhaustive: return "exhaustive";
    case DecoderKind::omp: return "omp";
    case DecoderKind::lasso: return "lasso";
  }
  return "unknown";
}

}  // namespace suprec
