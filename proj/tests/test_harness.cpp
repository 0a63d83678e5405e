#include <doctest.h>

#include <cmath>
#include <sstream>
#include <streambuf>

#include "suprec/errors.hpp"
#include "suprec/harness.hpp"

using namespace suprec;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.p = 8;
  c.s = 2;
  c.n_grid = {4, 8};
  c.m2 = 1.0;
  c.trials = 20;
  c.base_seed = 5;
  c.threads = 1;
  return c;
}

std::string error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_config(in);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

/// Accepts `limit` characters, refuses the next one, then accepts again.
class FailingBuf : public std::streambuf {
 public:
  explicit FailingBuf(std::size_t limit) : limit_(limit) {}
  std::string text;

 protected:
  int_type overflow(int_type ch) override {
    if (text.size() == limit_ && !refused_) {
      refused_ = true;  // refuse once, then recover after clear()
      return traits_type::eof();
    }
    text.push_back(static_cast<char>(ch));
    return ch;
  }

 private:
  std::size_t limit_;
  bool refused_ = false;
};

}  // namespace

TEST_CASE("config files parse and validation names the key") {
  std::istringstream in(
      "# comment\np = 16\ns = 3\nn_grid = 8, 12\nsigma = 0.5\nm2 = 0.25 # trailing\nsign_mode = all-positive\n"
      "decoder = exhaustive,omp\nensemble = restricted\ntrials = 7\nbase_seed = 99\nbound_C = 2\n"
      "bound_Cprime = 3\nunion_form = simplified\nout = run.csv\n");
  const ExperimentConfig c = parse_config(in);
  CHECK(c.p == 16);
  CHECK(c.n_grid == std::vector<int>{8, 12});
  CHECK(c.sigma == 0.5);
  CHECK(c.sign_mode == SignMode::all_positive);
  CHECK(c.decoders == std::vector<DecoderKind>{DecoderKind::exhaustive, DecoderKind::omp});
  CHECK(c.ensemble == Ensemble::restricted);
  CHECK(c.base_seed == 99);
  CHECK(c.bounds.union_form == UnionForm::simplified);
  CHECK(c.out == "run.csv");

  CHECK(error_of("p = 8\ns = 2\nn = 4\nm2 = 1\nfoo = 3\n").find("'foo'") != std::string::npos);
  CHECK(error_of("p = x\ns = 2\nn = 4\nm2 = 1\n").find("'p'") != std::string::npos);
  CHECK(error_of("p = 8\ns = 2\nn = 4\n").find("'m2'") != std::string::npos);
  CHECK(error_of("p = 8\np = 9\ns = 2\nn = 4\nm2 = 1\n").find("'p'") != std::string::npos);
  CHECK(error_of("p = 8\ns = 2\nn_grid = 8,4\nm2 = 1\n").find("'n_grid'") != std::string::npos);
  CHECK(error_of("p = 8\ns = 2\nn = 4\nm2 = 1\ndecoder = magic\n").find("'decoder'") != std::string::npos);
  CHECK(error_of("p = 8\ns = 8\nn = 4\nm2 = 1\n").find("'s'") != std::string::npos);
  CHECK(error_of("p = 8\ns = 2\nn = 4\nm2 = 1\ntrials = 0\n").find("'trials'") != std::string::npos);
}

TEST_CASE("render_config round-trips") {
  ExperimentConfig c = small_config();
  c.sigma = 0.1;
  c.m2 = 1.0 / 3.0;
  c.decoders = {DecoderKind::lasso, DecoderKind::omp};
  c.out = "x.csv";
  std::istringstream in(render_config(c));
  const ExperimentConfig back = parse_config(in);
  CHECK(render_config(back) == render_config(c));
  CHECK(back.m2 == c.m2);
  CHECK(experiment_id(back) == experiment_id(c));
  ExperimentConfig other = c;
  other.base_seed = 6;
  CHECK(experiment_id(other) != experiment_id(c));
}

TEST_CASE("Wilson interval") {
  const WilsonInterval half = wilson_interval(50, 100);
  CHECK(half.lo == doctest::Approx(0.404).epsilon(1e-3));
  CHECK(half.hi == doctest::Approx(0.596).epsilon(1e-3));
  const WilsonInterval none = wilson_interval(0, 100);
  CHECK(none.lo == 0.0);
  CHECK(none.hi > 0.0);
  const WilsonInterval all = wilson_interval(100, 100);
  CHECK(all.hi == 1.0);
  CHECK(all.lo < 1.0);
  const double w1 = wilson_interval(300, 1000).hi - wilson_interval(300, 1000).lo;
  const double w2 = wilson_interval(600, 2000).hi - wilson_interval(600, 2000).lo;
  CHECK(w2 / w1 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.01));
  for (int t : {1, 2, 7, 50}) {
    for (int e = 0; e <= t; ++e) {
      const WilsonInterval ci = wilson_interval(e, t);
      const double p = static_cast<double>(e) / t;
      CHECK(0.0 <= ci.lo);
      CHECK(ci.lo <= p);
      CHECK(p <= ci.hi);
      CHECK(ci.hi <= 1.0);
    }
  }
}

TEST_CASE("trials are deterministic and noiseless trials succeed") {
  ExperimentConfig c = small_config();
  c.sigma = 0.0;
  for (std::uint64_t t = 0; t < 10; ++t) {
    const TrialOutcome a = run_trial(c, 6, t, DecoderKind::exhaustive);
    const TrialOutcome b = run_trial(c, 6, t, DecoderKind::exhaustive);
    CHECK(a.status == TrialStatus::success);
    CHECK(a.truth == b.truth);
    CHECK(a.noise_seed == b.noise_seed);
  }
}

TEST_CASE("a decoder that always fails gives perr_hat = 1") {
  const ExperimentConfig c = small_config();
  const DecodeFn wrong = [](const TrialInstance& inst, int s) {
    DecodeResult r;
    std::vector<int> idx;
    for (int j = 0; j < inst.x.cols() && static_cast<int>(idx.size()) < s; ++j) {
      if (!inst.beta.support().contains(j)) idx.push_back(j);
    }
    r.estimate = SupportSet(idx, inst.x.cols());
    return r;
  };
  const TrialBatchResult b = estimate_error(c, 8, "rigged", wrong);
  CHECK(b.errors == c.trials);
  CHECK(b.perr_hat == 1.0);
  CHECK(b.ci_hi == 1.0);
  CHECK(b.ci_lo < 1.0);
}

TEST_CASE("budget refusals are counted as aborted, not as errors") {
  ExperimentConfig c = small_config();
  c.budget = 5;
  const TrialBatchResult b = estimate_error(c, 8, DecoderKind::exhaustive);
  CHECK(b.aborted == c.trials);
  CHECK(b.errors == 0);
  std::string row = csv_row(c, b);
  CHECK(row.find(",20,0,20,,,,") != std::string::npos);
}

TEST_CASE("with n = s every subset fits and the tie-break decides") {
  // Regression value: success only when the truth is {0, 1}, which has
  // probability 1 / C(8, 2).
  ExperimentConfig c = small_config();
  c.trials = 280;
  int expected = 0;
  for (int t = 0; t < c.trials; ++t) {
    expected += !(make_instance(c, 2, static_cast<std::uint64_t>(t)).beta.support() == SupportSet({0, 1}, 8));
  }
  const TrialBatchResult b = estimate_error(c, 2, DecoderKind::exhaustive);
  CHECK(b.errors == expected);
  CHECK(b.perr_hat > 0.9);
}

TEST_CASE("threading does not change the aggregate") {
  ExperimentConfig c = small_config();
  c.trials = 30;
  const TrialBatchResult one = estimate_error(c, 6, DecoderKind::exhaustive);
  c.threads = 4;
  const TrialBatchResult four = estimate_error(c, 6, DecoderKind::exhaustive);
  CHECK(one.errors == four.errors);
  CHECK(one.seeds.size() == four.seeds.size());
  for (std::size_t i = 0; i < one.seeds.size(); ++i) CHECK(one.seeds[i].noise == four.seeds[i].noise);
}

TEST_CASE("instances depend only on the seed, so decoders see identical data") {
  const ExperimentConfig c = small_config();
  ExperimentConfig other = c;
  other.decoders = {DecoderKind::lasso};
  const TrialInstance a = make_instance(c, 8, 3);
  const TrialInstance b = make_instance(other, 8, 3);
  CHECK(a.x.matrix() == b.x.matrix());
  CHECK(a.y.y == b.y.y);
  CHECK(a.beta.support() == b.beta.support());
}

TEST_CASE("restricted ensemble fixes the design and uses positive values") {
  ExperimentConfig c = small_config();
  c.ensemble = Ensemble::restricted;
  const TrialInstance a = make_instance(c, 8, 0);
  const TrialInstance b = make_instance(c, 8, 1);
  CHECK(a.x.matrix() == b.x.matrix());
  for (double v : b.beta.values()) CHECK(v > 0.0);
  const TrialBatchResult r = estimate_error(c, 8, DecoderKind::exhaustive);
  CHECK(r.bounds.fano_exact.has_value());
}

TEST_CASE("sweep writes a header and one row per grid point and decoder") {
  ExperimentConfig c = small_config();
  c.decoders = {DecoderKind::exhaustive, DecoderKind::omp};
  std::ostringstream csv;
  const SweepResult r = sweep(c, csv);
  std::istringstream lines(csv.str());
  std::string line;
  std::vector<std::string> all;
  while (std::getline(lines, line)) all.push_back(line);
  REQUIRE(all.size() == 5);
  CHECK(all[0] == csv_header());
  CHECK(all[1].find(",4,") != std::string::npos);
  CHECK(all[1].find(",exhaustive,") != std::string::npos);
  CHECK(all[2].find(",omp,") != std::string::npos);
  CHECK(r.curves.size() == 2);
  CHECK(r.curves[0].rows.size() == 2);
  CHECK(r.curves[0].rows[0].n < r.curves[0].rows[1].n);
  std::ostringstream again;
  sweep(c, again);
  CHECK(again.str() == csv.str());
  CHECK(sweep_summary_json(c, r).find("\"toolkit_version\"") != std::string::npos);
}

TEST_CASE("a failing sink aborts the sweep and leaves an incomplete trailer") {
  ExperimentConfig c = small_config();
  std::ostringstream full;
  sweep(c, full);
  const std::string text = full.str();
  const std::size_t first_block = text.find('\n', text.find('\n') + 1) + 1;
  FailingBuf buf(first_block + 10);
  std::ostream out(&buf);
  CHECK_THROWS_AS(sweep(c, out), SweepWriteError);
  CHECK(buf.text.rfind(text.substr(0, first_block), 0) == 0);
  CHECK(buf.text.find("#INCOMPLETE,CSV write failed") != std::string::npos);
}

TEST_CASE("presets") {
  const ExperimentConfig sub = preset("sublinear-regime");
  CHECK(sub.s == 16);
  CHECK(sub.m2 == doctest::Approx(0.0625));
  const ExperimentConfig lin = preset("linear-regime");
  CHECK(lin.s * 8 == lin.p);
  const ExperimentConfig gap = preset("lasso-gap");
  CHECK(gap.decoders == std::vector<DecoderKind>{DecoderKind::exhaustive, DecoderKind::lasso});
  CHECK(gap.p == lin.p);
  CHECK(gap.n_grid == lin.n_grid);
  try {
    preset("nope");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("lasso-gap") != std::string::npos);
  }
}

TEST_CASE("instance files round-trip exactly") {
  ExperimentConfig c = small_config();
  c.sigma = 0.7;
  const TrialInstance inst = make_instance(c, 5, 2);
  std::stringstream io;
  write_instance(io, inst, 123);
  const LoadedInstance back = read_instance(io);
  CHECK(back.x.matrix() == inst.x.matrix());
  CHECK(back.y.y == inst.y.y);
  CHECK(back.y.sigma == 0.7);
  CHECK(back.beta.support() == inst.beta.support());
  CHECK(std::equal(back.beta.values().begin(), back.beta.values().end(), inst.beta.values().begin()));
  CHECK(back.seed == 123);
  std::istringstream broken("2 3 1 1 0\n1 2 3\n");
  CHECK_THROWS_AS(read_instance(broken), DomainError);
}
