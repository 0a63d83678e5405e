#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "suprec/decoders.hpp"
#include "suprec/errors.hpp"
#include "suprec/rng.hpp"
#include "suprec/subset_factor.hpp"

using namespace suprec;

namespace {

struct Instance {
  DesignMatrix x;
  SparseSignal beta;
  Vector y;
};

Instance make(int n, int p, int s, double sigma, std::uint64_t seed, double magnitude = 1.0) {
  DesignMatrix x = sample_design(n, p, derive_seed(seed, 0, Stream::design));
  SparseSignal beta = sample_signal(p, s, magnitude, SignMode::random_sign, derive_seed(seed, 0, Stream::signal));
  Vector y = observe(x, beta, sigma, derive_seed(seed, 0, Stream::noise)).y;
  return {std::move(x), std::move(beta), std::move(y)};
}

}  // namespace

TEST_CASE("SubsetFactor tracks the residual under appends and removals") {
  const Instance inst = make(12, 8, 3, 1.0, 4);
  const GramCache cache = gram_precompute(inst.x, inst.y);
  SubsetFactor f(cache, 4);
  REQUIRE(f.rebuild(std::vector<int>{5, 1, 7}));
  CHECK(f.residual() == doctest::Approx(oracle::residual(inst.x.matrix(), {5, 1, 7}, inst.y)).epsilon(1e-10));
  f.remove_at(f.position_of(1));
  REQUIRE(f.append(3));
  CHECK(f.residual() == doctest::Approx(oracle::residual(inst.x.matrix(), {5, 7, 3}, inst.y)).epsilon(1e-10));
  std::vector<double> coef;
  f.solve_coefficients(coef);
  Vector fit = Vector::Zero(12);
  for (int i = 0; i < 3; ++i) fit += coef[static_cast<std::size_t>(i)] * inst.x.matrix().col(f.columns()[i]);
  CHECK((inst.y - fit).squaredNorm() == doctest::Approx(f.residual()).epsilon(1e-9));
}

TEST_CASE("exhaustive decoder equals dense brute force (property)") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    CounterRng shape(seed);
    const int p = 4 + static_cast<int>(shape.uniform_below(7));
    const int s = 1 + static_cast<int>(shape.uniform_below(3));
    const int n = s + 1 + static_cast<int>(shape.uniform_below(8));
    const double sigma = shape.coin() ? 1.0 : 0.0;
    CAPTURE(seed);
    const Instance inst = make(n, p, s, sigma, seed);
    const DecodeResult got = decode_exhaustive(gram_precompute(inst.x, inst.y), s);
    const oracle::BruteForce want = oracle::exhaustive(inst.x.matrix(), inst.y, s);
    CHECK(std::vector<int>(got.estimate.indices().begin(), got.estimate.indices().end()) == want.best);
    CHECK(got.min_residual == doctest::Approx(want.min_residual).epsilon(1e-8).scale(inst.y.squaredNorm()));
    CHECK(got.subsets_evaluated == oracle::binomial(p, s));
  }
}

TEST_CASE("frequent refreshes do not change the answer") {
  const Instance inst = make(10, 10, 3, 1.0, 77);
  const GramCache cache = gram_precompute(inst.x, inst.y);
  ExhaustiveOptions every;
  every.refresh_interval = 1;
  CHECK(decode_exhaustive(cache, 3, every).estimate == decode_exhaustive(cache, 3).estimate);
}

TEST_CASE("noiseless exhaustive decoding recovers the support") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = make(8, 16, 3, 0.0, seed);
    CHECK(decode_exhaustive(gram_precompute(inst.x, inst.y), 3).estimate == inst.beta.support());
  }
}

TEST_CASE("exact ties go to the lexicographically smallest subset") {
  Matrix m(3, 4);
  m << 1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0;  // columns 2, 3 duplicate 0, 1
  Vector y(3);
  y << 0, 1, 0;
  const DecodeResult r = decode_exhaustive(gram_precompute(DesignMatrix(m), y), 1);
  CHECK(r.estimate == SupportSet({1}, 4));
  CHECK(r.tie_count == 2);
  // y = 0: every subset ties.
  const DecodeResult zero = decode_exhaustive(gram_precompute(DesignMatrix(m), Vector::Zero(3)), 2);
  CHECK(zero.estimate == SupportSet({0, 1}, 4));
  CHECK(zero.tie_count == 6);
}

TEST_CASE("underdetermined problems are flagged and still deterministic") {
  const Instance inst = make(2, 6, 3, 1.0, 5);
  const DecodeResult r = decode_exhaustive(gram_precompute(inst.x, inst.y), 3);
  CHECK(r.underdetermined);
  CHECK(r.estimate == SupportSet({0, 1, 2}, 6));
  CHECK(r.min_residual == doctest::Approx(0.0).scale(inst.y.squaredNorm()));
}

TEST_CASE("budget refusal reports the subset count") {
  const Instance inst = make(20, 40, 12, 1.0, 1);
  try {
    decode_exhaustive(gram_precompute(inst.x, inst.y), 12);
    FAIL("expected BudgetError");
  } catch (const BudgetError& e) {
    CHECK(e.subset_count() == doctest::Approx(5586853480.0));
    CHECK(e.budget() == 1e8);
  }
}

TEST_CASE("delta statistic equals the residual difference (property)") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const double sigma = seed % 2 ? 1.0 : 0.0;
    const Instance inst = make(10, 7, 3, sigma, seed);
    const double f_s = oracle::residual(inst.x.matrix(),
                                        {inst.beta.support().indices().begin(), inst.beta.support().indices().end()},
                                        inst.y);
    oracle::for_each_subset(7, 3, [&](const std::vector<int>& u) {
      const PairwiseStatistic st = delta_statistic(inst.x, inst.y, inst.beta, SupportSet(u, 7));
      const double want = oracle::residual(inst.x.matrix(), u, inst.y) - f_s;
      CHECK(std::abs(st.delta - want) <= 1e-8 * std::max(1.0, f_s));
      CHECK(st.overlap_complement == 3 - inst.beta.support().overlap(SupportSet(u, 7)));
    });
  }
}

TEST_CASE("OMP recovers the support of an orthogonal design") {
  const Matrix m = Matrix::Identity(6, 6);
  Vector y(6);
  y << 0, 3, 0, -2, 0, 0.5;
  const DecodeResult r = decode_omp(gram_precompute(DesignMatrix(m), y), 2);
  CHECK(r.estimate == SupportSet({1, 3}, 6));
  CHECK(r.min_residual == doctest::Approx(0.25));
}

TEST_CASE("OMP breaks correlation ties toward the smaller index") {
  const Matrix m = Matrix::Identity(3, 3);
  Vector y(3);
  y << 1, 1, 1;
  CHECK(decode_omp(gram_precompute(DesignMatrix(m), y), 2).estimate == SupportSet({0, 1}, 3));
}

TEST_CASE("lasso coordinate descent satisfies the KKT conditions") {
  const Instance inst = make(20, 10, 3, 0.5, 8, 2.0);
  const double lambda = 2.0;
  const LassoSolution sol = lasso_coordinate_descent(inst.x, inst.y, lambda, Vector::Zero(10), 100000, 1e-12);
  REQUIRE(sol.converged);
  const Vector grad = inst.x.matrix().transpose() * (inst.y - inst.x.matrix() * sol.beta);
  for (int j = 0; j < 10; ++j) {
    if (sol.beta(j) != 0.0) {
      CHECK(grad(j) == doctest::Approx(lambda * (sol.beta(j) > 0 ? 1.0 : -1.0)).epsilon(1e-6));
    } else {
      CHECK(std::abs(grad(j)) <= lambda + 1e-6);
    }
  }
}

TEST_CASE("lasso decoder returns s indices and recovers an easy support") {
  const Instance inst = make(40, 12, 3, 0.0, 21, 3.0);
  const DecodeResult r = decode_lasso(inst.x, inst.y, 3);
  CHECK(r.estimate.size() == 3);
  CHECK(r.estimate == inst.beta.support());
  const std::vector<double> grid = default_lambda_grid(inst.x, inst.y);
  CHECK(grid.size() == 50);
  CHECK(grid.back() == doctest::Approx(grid.front() * 1e-3));
  CHECK_THROWS_AS(decode_lasso(inst.x, inst.y, 13), DomainError);
}

TEST_CASE("decoder names round-trip") {
  for (DecoderKind k : {DecoderKind::exhaustive, DecoderKind::omp, DecoderKind::lasso}) {
    CHECK(parse_decoder(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_decoder("greedy"), DomainError);
}
