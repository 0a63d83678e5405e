#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "suprec/ensemble.hpp"

namespace suprec {

/// Number of size-s subsets U with |S \ U| = k for a fixed size-s S:
/// C(s, k) * C(p - s, k). Throws std::overflow_error past 2^63 - 1.
std::uint64_t overlap_count(int p, int s, int k);

/// log overlap_count(p, s, k); -inf when the count is zero.
double log_overlap_count(int p, int s, int k);

struct PairwiseBound {
  double log_bound = 0.0;  // min(0, raw_log), or 0 when the bracket is negative
  double raw_log = 0.0;    // log of the two-term expression as written
  bool bracket_nonnegative = true;
};

/// Upper bound on P[Delta(U) < 0] for |S \ U| = k:
///   exp{-(n-s) b / (12 (b + 4))} + 2 exp{-(k/4) [-1 + (n-s) b / (4k)]^2},
/// with b = ||beta*_{S\U}||^2. The second term comes from a chi-square upper
/// tail that is only valid for a nonnegative bracket; a negative bracket makes
/// the bound vacuous (log_bound = 0).
PairwiseBound pairwise_error_bound(int n, int s, int k, double beta_norm_sq);

struct SimplifiedBound {
  double log_bound = 0.0;  // log 3 - (n-s) k m2 / (12 (k m2 + 8))
  bool regime_valid = false;
};

/// Weakened per-k bound 3 exp{-(n-s) k M^2 / (12 (k M^2 + 8))}. It follows
/// from the two-term bound once (n - s) M^2 / 4 >= 3; regime_valid reports
/// that condition.
SimplifiedBound simplified_pairwise_bound(int n, int s, int k, double m2);

/// (n - s) m2 / 4 >= 3.
bool simplified_regime_valid(int n, int s, double m2);

enum class UnionForm { exact, simplified };

UnionForm parse_union_form(const std::string& text);
std::string to_string(UnionForm form);

struct UnionTerm {
  int k = 0;
  double count = 0.0;          // N(k), as a double
  double log_pairwise = 0.0;
  double log_term = 0.0;       // log N(k) + log_pairwise; -inf when N(k) = 0
};

struct UnionBound {
  UnionForm form = UnionForm::exact;
  double log_value = 0.0;      // log sum_k N(k) bound(k)
  double clipped = 1.0;        // min(1, exp(log_value))
  bool regime_valid = false;
  std::vector<UnionTerm> terms;  // k = 1..s
};

/// sum_{k=1..s} N(k) bound(k) in log-sum-exp arithmetic; bound(k) is the
/// two-term bound at ||beta||^2 = k m2 or the simplified form.
UnionBound union_error_bound(int n, int p, int s, double m2, UnionForm form = UnionForm::exact);

/// C max{ s log(p/s), log(p - s) / m2 }.
double sufficient_n(int p, int s, double m2, double c);

/// (C' / m2) log(p / s).
double necessary_n(int p, int s, double m2, double c_prime);

/// 2 m2 (s - |U ∩ V|): the scale of Z_{U,V} ~ gamma chi^2_n.
double gamma_uv(int s, int overlap, double m2);

/// 1/2 ||X_U v - X_V v||^2 with v = M * ones(s): KL divergence between the
/// observation laws under supports U and V in the restricted ensemble.
double kl_pairwise(const DesignMatrix& x, const SupportSet& u, const SupportSet& v, double magnitude);

/// All size-s subsets of {0..p-1} in lexicographic order.
std::vector<SupportSet> all_subsets(int p, int s);

/// Largest hypothesis count kl_matrix agrees to build (N^2 entries).
inline constexpr int kMaxKlHypotheses = 3000;

/// N x N matrix of kl_pairwise over all_subsets(p, s), N = C(p, s).
Matrix kl_matrix(const DesignMatrix& x, int s, double magnitude);

/// 1 - [(1/N^2) sum_ij D_ij + log 2] / log(N - 1). Summation runs in fixed
/// row-major order. Requires N >= 3, nonnegative entries and a zero diagonal.
double fano_bound_exact(const Matrix& kl);

/// 1 - (4 m2 s n + log 2) / log(C(p, s) - 1). Holds for at least half of the
/// design realisations, not for every one.
double fano_bound_ensemble(int n, int p, int s, double m2);

struct MarkovTail {
  double threshold = 0.0;   // 4 m2 s n
  double prob_bound = 0.5;
};

/// P[Z >= 4 m2 s n] <= 1/2 for Z = (1/N^2) sum_{U != V} Z_{U,V} (Markov).
MarkovTail markov_z_tail(int n, int s, double m2);

/// Z = (1/N^2) sum_{U != V} ||X_U v - X_V v||^2 for one realised design.
double z_statistic(const DesignMatrix& x, int s, double magnitude);

struct BoundOptions {
  double c = 24.0;          // sufficient-n constant
  double c_prime = 0.25;    // necessary-n constant
  UnionForm union_form = UnionForm::exact;
};

/// Every theoretical quantity for one (n, p, s, m2) point. Quantities whose
/// preconditions fail at that point are left empty.
struct BoundReport {
  int n = 0;
  int p = 0;
  int s = 0;
  double m2 = 0.0;
  std::optional<UnionBound> union_bound;
  std::optional<double> sufficient_n;
  std::optional<double> necessary_n;
  std::optional<double> fano_exact;
  std::optional<double> fano_ensemble;
  bool regime_valid = false;
};

BoundReport bound_report(int n, int p, int s, double m2, const BoundOptions& options = {});

}  // namespace suprec
