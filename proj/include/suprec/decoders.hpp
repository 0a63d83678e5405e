#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "suprec/ensemble.hpp"

namespace suprec {

struct DecodeResult {
  SupportSet estimate;
  double min_residual = 0.0;     // f(estimate)
  std::uint64_t tie_count = 1;   // subsets within tolerance of the minimum
  std::uint64_t subsets_evaluated = 0;
  double elapsed_seconds = 0.0;
  bool converged = true;         // false only for a Lasso run that hit its sweep cap
  bool underdetermined = false;  // s > n: f vanishes on many subsets
};

struct ExhaustiveOptions {
  /// Two residuals tie when they differ by at most tolerance * ||y||^2.
  double tolerance = 1e-9;
  /// Largest C(p, s) the decoder agrees to enumerate.
  double budget = 1e8;
  /// Swaps between from-scratch refactorisations of the running factor.
  int refresh_interval = 1024;
};

/// Optimal decoder: argmin of f(U) over every size-s subset, read off the Gram
/// cache. Subsets are visited in revolving-door order so each step is one
/// column removal and one column append on a Cholesky factor. Among subsets
/// whose residual is within tolerance of the minimum, the lexicographically
/// smallest wins.
///
/// Throws BudgetError when C(p, s) exceeds options.budget.
DecodeResult decode_exhaustive(const GramCache& cache, int s, const ExhaustiveOptions& options = {});

struct PairwiseStatistic {
  double delta = 0.0;
  SupportSet subset;
  int overlap_complement = 0;  // |S \ U|
};

/// Delta(U) = ||P_perp_U (X_{S\U} beta*_{S\U} + W)||^2 - ||P_perp_S W||^2 with
/// W = y - X beta*. The decoder prefers U over S exactly when this is negative.
PairwiseStatistic delta_statistic(const DesignMatrix& x, const Vector& y, const SparseSignal& beta,
                                  const SupportSet& candidate);

/// Orthogonal matching pursuit: s greedy steps, each adding the column with the
/// largest |correlation| with the current least-squares residual (smallest
/// index on ties).
DecodeResult decode_omp(const GramCache& cache, int s);

struct LassoOptions {
  /// Strictly decreasing positive penalties; empty means default_lambda_grid.
  std::vector<double> lambda_grid;
  int max_sweeps = 100000;
  double tolerance = 1e-10;       // max coordinate change that ends a solve
  double nonzero_threshold = 1e-8;
};

/// 50 log-spaced values from ||X^T y||_inf down to 1e-3 * ||X^T y||_inf.
std::vector<double> default_lambda_grid(const DesignMatrix& x, const Vector& y, int count = 50,
                                        double ratio = 1e-3);

struct LassoSolution {
  Vector beta;
  int sweeps = 0;
  bool converged = true;
};

/// Cyclic coordinate descent on 1/2 ||y - X b||^2 + lambda ||b||_1 from `start`.
LassoSolution lasso_coordinate_descent(const DesignMatrix& x, const Vector& y, double lambda,
                                       const Vector& start, int max_sweeps, double tolerance);

/// Walks the penalty grid downward with warm starts and stops at the first
/// (largest) penalty whose solution has exactly s nonzeros. Without one, the s
/// largest magnitudes at the last penalty are taken (smallest index on ties).
DecodeResult decode_lasso(const DesignMatrix& x, const Vector& y, int s,
                          const LassoOptions& options = {});

enum class DecoderKind { exhaustive, omp, lasso };

DecoderKind parse_decoder(const std::string& text);
std::string to_string(DecoderKind kind);

}  // namespace suprec
