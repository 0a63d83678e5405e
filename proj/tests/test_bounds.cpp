#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "suprec/bounds.hpp"
#include "suprec/errors.hpp"
#include "suprec/rng.hpp"
#include "suprec/tails.hpp"

using namespace suprec;

TEST_CASE("overlap_count examples") {
  CHECK(overlap_count(8, 2, 1) == 12);
  CHECK(overlap_count(8, 2, 0) == 1);
  CHECK(overlap_count(5, 3, 3) == 0);  // k > p - s
  CHECK_THROWS_AS(overlap_count(8, 2, 3), DomainError);
  CHECK(log_overlap_count(5, 3, 3) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("counting identity holds exactly for p <= 20") {
  for (int p = 2; p <= 20; ++p) {
    for (int s = 1; s < p; ++s) {
      std::uint64_t total = 0;
      for (int k = 0; k <= s; ++k) total += overlap_count(p, s, k);
      CHECK(total == oracle::binomial(p, s));
    }
  }
}

TEST_CASE("overlap_count matches enumeration against a fixed support") {
  for (int p = 2; p <= 10; ++p) {
    for (int s = 1; s < p; ++s) {
      std::vector<std::uint64_t> hist(static_cast<std::size_t>(s) + 1, 0);
      oracle::for_each_subset(p, s, [&](const std::vector<int>& u) {
        int missed = 0;
        for (int i = 0; i < s; ++i) missed += std::find(u.begin(), u.end(), i) == u.end();
        ++hist[static_cast<std::size_t>(missed)];
      });
      for (int k = 0; k <= s; ++k) CHECK(hist[static_cast<std::size_t>(k)] == overlap_count(p, s, k));
    }
  }
}

TEST_CASE("pairwise bound matches the two-term expression when the bracket is nonnegative") {
  const int n = 200;
  const int s = 4;
  for (int k = 1; k <= s; ++k) {
    const double b = 0.5 * k;
    const PairwiseBound pb = pairwise_error_bound(n, s, k, b);
    const double bracket = -1.0 + (n - s) * b / (4.0 * k);
    REQUIRE(bracket >= 0.0);
    const double expect = std::exp(-(n - s) * b / (12 * (b + 4))) + 2 * std::exp(-(k / 4.0) * bracket * bracket);
    CHECK(pb.raw_log == doctest::Approx(std::log(expect)));
    CHECK(pb.log_bound == doctest::Approx(std::min(0.0, std::log(expect))));
    CHECK(pb.bracket_nonnegative);
  }
  const PairwiseBound weak = pairwise_error_bound(6, 4, 3, 0.1);
  CHECK_FALSE(weak.bracket_nonnegative);
  CHECK(weak.log_bound == 0.0);
  CHECK_THROWS_AS(pairwise_error_bound(4, 4, 1, 1.0), DomainError);
}

TEST_CASE("union bound is strictly decreasing in n and m2 for both forms") {
  // Strict once every bracket is nonnegative, (n - s) m2 >= 4; below that the
  // exact form is flat at sum_k N(k).
  double flat = std::numeric_limits<double>::infinity();
  for (int n = 5; n <= 20; ++n) {
    const UnionBound u = union_error_bound(n, 64, 4, 0.25);
    CHECK(u.log_value <= flat);
    flat = u.log_value;
  }
  for (UnionForm form : {UnionForm::exact, UnionForm::simplified}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 32; n <= 4096; n *= 2) {
      const UnionBound u = union_error_bound(n, 64, 4, 0.25, form);
      CHECK(u.log_value < prev);
      prev = u.log_value;
    }
    prev = std::numeric_limits<double>::infinity();
    for (double m2 = 0.0625; m2 <= 16; m2 *= 2) {
      const UnionBound u = union_error_bound(128, 64, 4, m2, form);
      CHECK(u.log_value < prev);
      prev = u.log_value;
    }
  }
}

TEST_CASE("union bound terms sum to the total and zero counts vanish") {
  const UnionBound u = union_error_bound(40, 5, 3, 1.0);
  REQUIRE(u.terms.size() == 3);
  double total = 0.0;
  for (const UnionTerm& t : u.terms) total += std::exp(t.log_term);
  CHECK(std::log(total) == doctest::Approx(u.log_value));
  CHECK(u.terms[2].count == 0.0);
  CHECK(u.terms[2].log_term == -std::numeric_limits<double>::infinity());
  CHECK(u.clipped == doctest::Approx(std::min(1.0, std::exp(u.log_value))));
}

TEST_CASE("simplified regime flag") {
  CHECK(simplified_regime_valid(52, 4, 0.25));
  CHECK_FALSE(simplified_regime_valid(51, 4, 0.25));
  CHECK(simplified_pairwise_bound(100, 4, 2, 0.5).log_bound ==
        doctest::Approx(std::log(3.0) - 96 * 1.0 / (12 * (1.0 + 8))));
}

TEST_CASE("sample-size thresholds") {
  CHECK(sufficient_n(128, 8, 0.125, 1.0) == doctest::Approx(38.30).epsilon(1e-3));
  CHECK(necessary_n(128, 8, 0.125, 1.0) == doctest::Approx(22.18).epsilon(1e-3));
  CHECK(sufficient_n(128, 8, 0.125, 24.0) == doctest::Approx(24 * sufficient_n(128, 8, 0.125, 1.0)));
}

TEST_CASE("Fano bounds") {
  CHECK(fano_bound_exact(Matrix::Zero(16, 16)) == doctest::Approx(1 - std::log(2.0) / std::log(15.0)));
  CHECK(fano_bound_exact(Matrix::Zero(16, 16)) == doctest::Approx(0.7441).epsilon(1e-4));
  Matrix big = Matrix::Constant(16, 16, 1e6);
  big.diagonal().setZero();
  CHECK(fano_bound_exact(big) < -1000);
  CHECK_THROWS_AS(fano_bound_exact(Matrix::Zero(2, 2)), DomainError);
  // log C(128, 8) = 27.988 exactly, so the bound is 1 - 20.693 / 27.988.
  CHECK(fano_bound_ensemble(5, 128, 8, 0.125) == doctest::Approx(0.26066).epsilon(1e-4));
  const double n0 = fano_bound_ensemble(1, 20, 3, 1e-12);
  CHECK(n0 == doctest::Approx(1 - std::log(2.0) / std::log(1139.0)).epsilon(1e-9));
}

TEST_CASE("KL matrix is symmetric with a zero diagonal and matches z_statistic") {
  const DesignMatrix x = sample_design(7, 6, 3);
  const Matrix kl = kl_matrix(x, 2, 0.8);
  REQUIRE(kl.rows() == 15);
  CHECK((kl - kl.transpose()).norm() < 1e-12);
  CHECK(kl.diagonal().norm() == 0.0);
  CHECK(z_statistic(x, 2, 0.8) == doctest::Approx(2.0 * kl.sum() / (15.0 * 15.0)));
  const std::vector<SupportSet> subsets = all_subsets(6, 2);
  CHECK(subsets.front() == SupportSet({0, 1}, 6));
  CHECK(subsets.back() == SupportSet({4, 5}, 6));
  CHECK(kl(0, 14) == doctest::Approx(kl_pairwise(x, subsets[0], subsets[14], 0.8)));
}

TEST_CASE("KL divergence has ensemble mean gamma n / 2") {
  const int n = 5;
  const double m2 = 0.5;
  const SupportSet u({0, 1, 2}, 6);
  const SupportSet v({0, 3, 4}, 6);  // overlap 1, k = 2
  const int draws = 20000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double d = kl_pairwise(sample_design(n, 6, derive_seed(9, static_cast<std::uint64_t>(i), Stream::design)), u,
                                 v, std::sqrt(m2));
    sum += d;
    sq += d * d;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - 0.5 * gamma_uv(3, 1, m2) * n) < 3 * se);
}

TEST_CASE("Markov threshold") {
  const MarkovTail t = markov_z_tail(10, 2, 0.25);
  CHECK(t.threshold == doctest::Approx(20.0));
  CHECK(t.prob_bound == 0.5);
}

TEST_CASE("bound_report fills what its preconditions allow") {
  const BoundReport r = bound_report(5, 128, 8, 0.125);
  CHECK_FALSE(r.union_bound.has_value());  // needs s < n
  CHECK(r.fano_ensemble.has_value());
  CHECK(r.sufficient_n.has_value());
  const BoundReport ok = bound_report(100, 64, 4, 0.25);
  REQUIRE(ok.union_bound.has_value());
  CHECK(ok.union_bound->terms.size() == 4);
  CHECK(ok.regime_valid == simplified_regime_valid(100, 4, 0.25));
  CHECK_THROWS_AS(bound_report(10, 8, 9, 1.0), DomainError);
  CHECK(parse_union_form(to_string(UnionForm::simplified)) == UnionForm::simplified);
}
