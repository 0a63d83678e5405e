#include "suprec/tail_check.hpp"

#include <algorithm>
#include <cmath>

#include "suprec/combinations.hpp"
#include "suprec/errors.hpp"
#include "suprec/rng.hpp"
#include "suprec/tails.hpp"

namespace suprec {

namespace {

TailCell make_cell(const std::string& name, int d, double nu, double x, const TailBound& bound,
                   const std::vector<double>& draws, bool upper) {
  TailCell cell;
  cell.bound = name;
  cell.d = d;
  cell.nu = nu;
  cell.x = x;
  cell.threshold = bound.threshold;
  cell.prob_bound = bound.prob_bound();
  std::int64_t hits = 0;
  for (double v : draws) hits += upper ? (v >= bound.threshold) : (v <= bound.threshold);
  const double count = static_cast<double>(draws.size());
  cell.empirical = hits / count;
  const double b = std::clamp(cell.prob_bound, 0.0, 1.0);
  cell.stderr_mc = std::sqrt(b * (1.0 - b) / count);
  cell.pass = cell.empirical <= cell.prob_bound + 3.0 * cell.stderr_mc;
  cell.wide_ci = 3.0 * cell.stderr_mc > cell.prob_bound;
  return cell;
}

}  // namespace

std::vector<TailCell> run_tail_checks(const TailCheckOptions& options) {
  if (options.samples < 1) throw DomainError("run_tail_checks: samples must be positive");
  std::vector<TailCell> cells;
  std::uint64_t stream = 0;
  for (int d : options.degrees) {
    for (double nu : options.nus) {
      NoncentralChiSquareSampler sampler(d, nu, derive_seed(options.seed, stream++, Stream::verify));
      std::vector<double> draws(static_cast<std::size_t>(options.samples));
      for (double& v : draws) v = sampler();
      for (double x : options.xs) {
        if (nu == 0.0) {
          TailBound up = chisq_central_upper(d, x);
          if (options.break_one && d == options.degrees.front() && x == options.xs.back()) {
            up.threshold = d;
          }
          cells.push_back(make_cell("central-upper", d, nu, x, up, draws, true));
          cells.push_back(make_cell("central-lower", d, nu, x, chisq_central_lower(d, x), draws, false));
        }
        cells.push_back(make_cell("noncentral-upper", d, nu, x, chisq_noncentral_upper(d, nu, x), draws, true));
        cells.push_back(make_cell("noncentral-lower", d, nu, x, chisq_noncentral_lower(d, nu, x), draws, false));
      }
    }
  }
  return cells;
}

std::vector<SandwichFailure> check_binomial_sandwich(int max_m) {
  std::vector<SandwichFailure> failures;
  // Compared in the log domain with a relative slack for the equality cases
  // k = 1 (lower = C) and k = m (lower = C = 1).
  constexpr double kSlack = 1e-12;
  for (int m = 1; m <= max_m; ++m) {
    for (int k = 1; k <= m; ++k) {
      const std::int64_t exact = binomial_exact(m, k);
      if (exact < 0) throw DomainError("check_binomial_sandwich: exact binomial overflows");
      const BinomialBounds b = binom_bounds(m, k);
      const double log_exact = std::log(static_cast<double>(exact));
      const double slack = kSlack * std::max(1.0, log_exact);
      if (std::log(b.lower) > log_exact + slack || log_exact > std::log(b.upper) + slack ||
          std::abs(b.exact_log - log_exact) > slack) {
        failures.push_back({m, k});
      }
    }
  }
  return failures;
}

}  // namespace suprec
