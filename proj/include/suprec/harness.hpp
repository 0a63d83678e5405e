#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "suprec/bounds.hpp"
#include "suprec/decoders.hpp"
#include "suprec/ensemble.hpp"
#include "suprec/errors.hpp"

namespace suprec {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Config-file or flag validation failure; the message names the offending key.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Raised by sweep when the CSV sink stops accepting writes.
class SweepWriteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Ensemble {
  generic,     // fresh design every trial, signs per sign_mode
  restricted,  // one realised design for all trials, every support value = +M
};

Ensemble parse_ensemble(const std::string& text);
std::string to_string(Ensemble ensemble);

struct ExperimentConfig {
  int p = 0;
  int s = 0;
  std::vector<int> n_grid;
  double sigma = 1.0;
  double m2 = 0.0;  // squared minimum magnitude in noise units
  SignMode sign_mode = SignMode::random_sign;
  std::vector<DecoderKind> decoders{DecoderKind::exhaustive};
  Ensemble ensemble = Ensemble::generic;
  int trials = 100;
  std::uint64_t base_seed = 1;
  BoundOptions bounds;
  std::string out;

  // Not part of the file format.
  std::string preset;
  double budget = 1e8;
  bool record_timing = false;
  int threads = 0;  // 0: one worker per hardware thread

  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  /// Signal magnitude in the units of y: sqrt(m2) * sigma, or sqrt(m2) when sigma = 0.
  double magnitude() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, repeated
/// keys and malformed values raise ConfigError naming the key.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Canonical `key = value` rendering; parse_config(render_config(c)) == c.
std::string render_config(const ExperimentConfig& config);

/// Stable identifier derived from the canonical rendering.
std::string experiment_id(const ExperimentConfig& config);

/// One trial's draws. The design stream is keyed by the trial index, or by a
/// fixed index for the restricted ensemble.
struct TrialInstance {
  DesignMatrix x;
  SparseSignal beta;
  ObservationVector y;
  std::uint64_t design_seed = 0;
  std::uint64_t signal_seed = 0;
  std::uint64_t noise_seed = 0;
};

TrialInstance make_instance(const ExperimentConfig& config, int n, std::uint64_t trial_index);

/// Decoder hook: returns the estimated support for one instance.
using DecodeFn = std::function<DecodeResult(const TrialInstance&, int s)>;

DecodeFn make_decoder(DecoderKind kind, double budget);

enum class TrialStatus { success, failure, aborted };

struct TrialOutcome {
  TrialStatus status = TrialStatus::aborted;
  SupportSet truth;
  std::optional<SupportSet> estimate;
  double decode_seconds = 0.0;
  std::string abort_reason;
  std::uint64_t design_seed = 0;
  std::uint64_t signal_seed = 0;
  std::uint64_t noise_seed = 0;
};

/// Success iff the estimate equals the true support exactly. Budget refusals
/// become aborted outcomes rather than errors.
TrialOutcome run_trial(const ExperimentConfig& config, int n, std::uint64_t trial_index,
                       const DecodeFn& decode);
TrialOutcome run_trial(const ExperimentConfig& config, int n, std::uint64_t trial_index,
                       DecoderKind decoder);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// 95% Wilson score interval for `errors` out of `trials` (trials >= 1).
WilsonInterval wilson_interval(int errors, int trials, double z = 1.959963984540054);

struct TrialSeeds {
  std::uint64_t design = 0;
  std::uint64_t signal = 0;
  std::uint64_t noise = 0;
};

struct TrialBatchResult {
  int n = 0;
  std::string decoder;
  int trials = 0;   // attempted
  int errors = 0;
  int aborted = 0;  // excluded from perr_hat
  double perr_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
  double mean_decode_ms = 0.0;
  std::vector<TrialSeeds> seeds;
  BoundReport bounds;
};

/// Runs config.trials trials at sample size n, in parallel, aggregating in
/// trial-index order. Attaches the BoundReport for (n, p, s, m2); for the
/// restricted ensemble it also carries the Fano bound of the realised design.
TrialBatchResult estimate_error(const ExperimentConfig& config, int n, DecoderKind decoder);
TrialBatchResult estimate_error(const ExperimentConfig& config, int n, const std::string& decoder_name,
                                const DecodeFn& decode);

struct PhaseRow {
  int n = 0;
  double perr_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
  std::optional<double> union_bound;
  std::optional<double> fano;  // exact when available, else the ensemble form
};

struct PhaseCurve {
  std::string decoder;
  std::vector<PhaseRow> rows;
};

struct SweepResult {
  std::vector<PhaseCurve> curves;            // one per decoder
  std::vector<TrialBatchResult> batches;     // grid-major, decoders adjacent
};

/// CSV header row, without trailing newline.
std::string csv_header();
std::string csv_row(const ExperimentConfig& config, const TrialBatchResult& batch);

using ProgressFn = std::function<void(const TrialBatchResult&)>;

/// Runs every (n, decoder) point and appends one CSV row per point, flushing
/// after each grid value. On failure a `#INCOMPLETE` trailer row is written
/// before the error propagates.
SweepResult sweep(const ExperimentConfig& config, std::ostream& csv, const ProgressFn& progress = {});

/// One JSON object describing a finished sweep.
std::string sweep_summary_json(const ExperimentConfig& config, const SweepResult& result);

struct PresetInfo {
  std::string name;
  std::string description;
};

std::vector<PresetInfo> list_presets();

/// Throws ConfigError listing the known presets for an unknown name.
ExperimentConfig preset(const std::string& name);

/// Instance text format: `n p s sigma seed`, then n rows of p design entries,
/// one row of `index:value` pairs, one row of n observations. Values use 17
/// significant digits so a round trip is exact.
void write_instance(std::ostream& out, const TrialInstance& instance, std::uint64_t seed);

struct LoadedInstance {
  DesignMatrix x;
  SparseSignal beta;
  ObservationVector y;
  std::uint64_t seed = 0;
};

LoadedInstance read_instance(std::istream& in);

}  // namespace suprec
