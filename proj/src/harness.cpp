#include "suprec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "suprec/combinations.hpp"
#include "suprec/errors.hpp"
#include "suprec/rng.hpp"
#include "suprec/tails.hpp"

namespace suprec {

namespace {

/// Trial index used for the design stream of the restricted ensemble.
constexpr std::uint64_t kFixedDesignIndex = ~std::uint64_t{0};

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  std::istringstream in(text);
  while (std::getline(in, current, sep)) parts.push_back(trim(current));
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end || value.empty()) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "'");
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string format_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

std::string join_decoders(const std::vector<DecoderKind>& decoders) {
  std::string out;
  for (std::size_t i = 0; i < decoders.size(); ++i) {
    if (i) out += ',';
    out += to_string(decoders[i]);
  }
  return out;
}

std::string sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

}  // namespace

Ensemble parse_ensemble(const std::string& text) {
  if (text == "generic") return Ensemble::generic;
  if (text == "restricted") return Ensemble::restricted;
  throw DomainError("unknown ensemble '" + text + "' (expected generic or restricted)");
}

std::string to_string(Ensemble ensemble) {
  return ensemble == Ensemble::generic ? "generic" : "restricted";
}

void ExperimentConfig::validate() const {
  if (p < 2) throw ConfigError("config key 'p': must be >= 2");
  if (s < 1 || s >= p) throw ConfigError("config key 's': must satisfy 1 <= s < p");
  if (n_grid.empty()) throw ConfigError("config key 'n_grid': grid must be nonempty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw ConfigError("config key 'n_grid': sample sizes must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw ConfigError("config key 'n_grid': grid must be strictly increasing");
    }
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("config key 'sigma': must be >= 0");
  if (!(m2 > 0.0) || !std::isfinite(m2)) throw ConfigError("config key 'm2': must be > 0");
  if (decoders.empty()) throw ConfigError("config key 'decoder': at least one decoder required");
  if (trials < 1) throw ConfigError("config key 'trials': must be >= 1");
  if (!(bounds.c > 0.0)) throw ConfigError("config key 'bound_C': must be > 0");
  if (!(bounds.c_prime > 0.0)) throw ConfigError("config key 'bound_Cprime': must be > 0");
  if (!(budget > 0.0)) throw ConfigError("enumeration budget must be > 0");
}

double ExperimentConfig::magnitude() const {
  return std::sqrt(m2) * (sigma > 0.0 ? sigma : 1.0);
}

ExperimentConfig parse_config(std::istream& in) {
  static const std::set<std::string> kKeys = {
      "p",      "s",    "n",      "n_grid",  "sigma",   "m2",           "sign_mode", "decoder",
      "ensemble", "trials", "base_seed", "bound_C", "bound_Cprime", "union_form", "out"};
  ExperimentConfig config;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value', got '" + body + "'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!kKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError("config key '" + key + "' given twice");
    try {
      if (key == "p") {
        config.p = parse_number<int>(key, value);
      } else if (key == "s") {
        config.s = parse_number<int>(key, value);
      } else if (key == "n") {
        config.n_grid = {parse_number<int>(key, value)};
      } else if (key == "n_grid") {
        config.n_grid.clear();
        for (const std::string& part : split(value, ',')) config.n_grid.push_back(parse_number<int>(key, part));
      } else if (key == "sigma") {
        config.sigma = parse_number<double>(key, value);
      } else if (key == "m2") {
        config.m2 = parse_number<double>(key, value);
      } else if (key == "sign_mode") {
        config.sign_mode = parse_sign_mode(value);
      } else if (key == "decoder") {
        config.decoders.clear();
        for (const std::string& part : split(value, ',')) config.decoders.push_back(parse_decoder(part));
      } else if (key == "ensemble") {
        config.ensemble = parse_ensemble(value);
      } else if (key == "trials") {
        config.trials = parse_number<int>(key, value);
      } else if (key == "base_seed") {
        config.base_seed = parse_number<std::uint64_t>(key, value);
      } else if (key == "bound_C") {
        config.bounds.c = parse_number<double>(key, value);
      } else if (key == "bound_Cprime") {
        config.bounds.c_prime = parse_number<double>(key, value);
      } else if (key == "union_form") {
        config.bounds.union_form = parse_union_form(value);
      } else if (key == "out") {
        config.out = value;
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const DomainError& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  if (seen.count("n") && seen.count("n_grid")) throw ConfigError("config keys 'n' and 'n_grid' are exclusive");
  for (const char* required : {"p", "s", "m2"}) {
    if (!seen.count(required)) throw ConfigError(std::string("config key '") + required + "' is required");
  }
  if (!seen.count("n") && !seen.count("n_grid")) throw ConfigError("config key 'n_grid' (or 'n') is required");
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string render_config(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "p = " << config.p << '\n';
  out << "s = " << config.s << '\n';
  out << "n_grid = ";
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) out << (i ? "," : "") << config.n_grid[i];
  out << '\n';
  out << "sigma = " << format_exact(config.sigma) << '\n';
  out << "m2 = " << format_exact(config.m2) << '\n';
  out << "sign_mode = " << to_string(config.sign_mode) << '\n';
  out << "decoder = " << join_decoders(config.decoders) << '\n';
  out << "ensemble = " << to_string(config.ensemble) << '\n';
  out << "trials = " << config.trials << '\n';
  out << "base_seed = " << config.base_seed << '\n';
  out << "bound_C = " << format_exact(config.bounds.c) << '\n';
  out << "bound_Cprime = " << format_exact(config.bounds.c_prime) << '\n';
  out << "union_form = " << to_string(config.bounds.union_form) << '\n';
  if (!config.out.empty()) out << "out = " << config.out << '\n';
  return out.str();
}

std::string experiment_id(const ExperimentConfig& config) {
  ExperimentConfig keyed = config;
  keyed.out.clear();
  const std::string text = render_config(keyed);
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%08llx", static_cast<unsigned long long>(h >> 32));
  return (config.preset.empty() ? std::string("custom") : config.preset) + "-" + buf;
}

TrialInstance make_instance(const ExperimentConfig& config, int n, std::uint64_t trial_index) {
  const bool restricted = config.ensemble == Ensemble::restricted;
  const std::uint64_t design_seed =
      derive_seed(config.base_seed, restricted ? kFixedDesignIndex : trial_index, Stream::design);
  const std::uint64_t signal_seed = derive_seed(config.base_seed, trial_index, Stream::signal);
  const std::uint64_t noise_seed = derive_seed(config.base_seed, trial_index, Stream::noise);
  DesignMatrix x = sample_design(n, config.p, design_seed);
  SparseSignal beta = sample_signal(config.p, config.s, config.magnitude(),
                                    restricted ? SignMode::all_positive : config.sign_mode, signal_seed);
  ObservationVector y = observe(x, beta, config.sigma, noise_seed);
  return TrialInstance{std::move(x), std::move(beta), std::move(y), design_seed, signal_seed, noise_seed};
}

DecodeFn make_decoder(DecoderKind kind, double budget) {
  switch (kind) {
    case DecoderKind::exhaustive:
      return [budget](const TrialInstance& inst, int s) {
        ExhaustiveOptions options;
        options.budget = budget;
        return decode_exhaustive(gram_precompute(inst.x, inst.y.y), s, options);
      };
    case DecoderKind::omp:
      return [](const TrialInstance& inst, int s) { return decode_omp(gram_precompute(inst.x, inst.y.y), s); };
    case DecoderKind::lasso:
      return [](const TrialInstance& inst, int s) { return decode_lasso(inst.x, inst.y.y, s); };
  }
  throw DomainError("make_decoder: unknown decoder");
}

TrialOutcome run_trial(const ExperimentConfig& config, int n, std::uint64_t trial_index, const DecodeFn& decode) {
  TrialInstance inst = make_instance(config, n, trial_index);
  TrialOutcome outcome;
  outcome.truth = inst.beta.support();
  outcome.design_seed = inst.design_seed;
  outcome.signal_seed = inst.signal_seed;
  outcome.noise_seed = inst.noise_seed;
  try {
    DecodeResult result = decode(inst, config.s);
    outcome.decode_seconds = result.elapsed_seconds;
    outcome.status = result.estimate == outcome.truth ? TrialStatus::success : TrialStatus::failure;
    outcome.estimate = std::move(result.estimate);
  } catch (const BudgetError& e) {
    outcome.status = TrialStatus::aborted;
    outcome.abort_reason = e.what();
  }
  return outcome;
}

TrialOutcome run_trial(const ExperimentConfig& config, int n, std::uint64_t trial_index, DecoderKind decoder) {
  return run_trial(config, n, trial_index, make_decoder(decoder, config.budget));
}

WilsonInterval wilson_interval(int errors, int trials, double z) {
  if (trials < 1 || errors < 0 || errors > trials) throw DomainError("wilson_interval: need 0 <= errors <= trials, trials >= 1");
  const double t = trials;
  const double phat = errors / t;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / t;
  const double center = (phat + z2 / (2.0 * t)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / t + z2 / (4.0 * t * t)) / denom;
  WilsonInterval ci;
  ci.lo = std::clamp(center - half, 0.0, phat);
  ci.hi = std::clamp(center + half, phat, 1.0);
  return ci;
}

TrialBatchResult estimate_error(const ExperimentConfig& config, int n, const std::string& decoder_name,
                                const DecodeFn& decode) {
  config.validate();
  if (n < 1) throw ConfigError("sample size n must be >= 1");
  const auto count = static_cast<std::size_t>(config.trials);
  std::vector<TrialOutcome> outcomes(count);

  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t t = next++; t < count; t = next++) {
      try {
        outcomes[t] = run_trial(config, n, t, decode);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  TrialBatchResult batch;
  batch.n = n;
  batch.decoder = decoder_name;
  batch.trials = config.trials;
  double decode_total = 0.0;
  for (const TrialOutcome& o : outcomes) {
    batch.seeds.push_back({o.design_seed, o.signal_seed, o.noise_seed});
    if (o.status == TrialStatus::aborted) {
      ++batch.aborted;
      continue;
    }
    if (o.status == TrialStatus::failure) ++batch.errors;
    decode_total += o.decode_seconds;
  }
  const int valid = batch.trials - batch.aborted;
  if (valid > 0) {
    batch.perr_hat = static_cast<double>(batch.errors) / valid;
    const WilsonInterval ci = wilson_interval(batch.errors, valid);
    batch.ci_lo = ci.lo;
    batch.ci_hi = ci.hi;
    batch.mean_decode_ms = 1e3 * decode_total / valid;
  } else {
    batch.perr_hat = std::numeric_limits<double>::quiet_NaN();
  }

  batch.bounds = bound_report(n, config.p, config.s, config.m2, config.bounds);
  if (config.ensemble == Ensemble::restricted) {
    const double hypotheses = binomial_double(config.p, config.s);
    if (hypotheses >= 3.0 && hypotheses <= kMaxKlHypotheses) {
      const DesignMatrix x = sample_design(n, config.p, derive_seed(config.base_seed, kFixedDesignIndex, Stream::design));
      // Divergences in noise units: v = sqrt(m2) * ones.
      batch.bounds.fano_exact = fano_bound_exact(kl_matrix(x, config.s, std::sqrt(config.m2)));
    }
  }
  return batch;
}

TrialBatchResult estimate_error(const ExperimentConfig& config, int n, DecoderKind decoder) {
  return estimate_error(config, n, to_string(decoder), make_decoder(decoder, config.budget));
}

std::string csv_header() {
  return "experiment_id,p,s,n,sigma,m2,decoder,ensemble,trials,errors,aborted,perr_hat,ci_lo,ci_hi,"
         "union_bound,union_regime_valid,fano_exact,fano_ensemble,sufficient_n,necessary_n,base_seed,"
         "mean_decode_ms";
}

std::string csv_row(const ExperimentConfig& config, const TrialBatchResult& batch) {
  const BoundReport& b = batch.bounds;
  const bool have_rate = batch.trials > batch.aborted;
  std::ostringstream row;
  row << experiment_id(config) << ',' << config.p << ',' << config.s << ',' << batch.n << ','
      << format_double(config.sigma) << ',' << format_double(config.m2) << ',' << batch.decoder << ','
      << to_string(config.ensemble) << ',' << batch.trials << ',' << batch.errors << ',' << batch.aborted << ','
      << (have_rate ? format_double(batch.perr_hat) : "") << ',' << (have_rate ? format_double(batch.ci_lo) : "")
      << ',' << (have_rate ? format_double(batch.ci_hi) : "") << ','
      << (b.union_bound ? format_double(b.union_bound->clipped) : "") << ','
      << (b.union_bound ? (b.union_bound->regime_valid ? "true" : "false") : "") << ','
      << format_optional(b.fano_exact) << ',' << format_optional(b.fano_ensemble) << ','
      << format_optional(b.sufficient_n) << ',' << format_optional(b.necessary_n) << ',' << config.base_seed << ','
      << (config.record_timing && have_rate ? format_double(batch.mean_decode_ms) : "");
  return row.str();
}

SweepResult sweep(const ExperimentConfig& config, std::ostream& csv, const ProgressFn& progress) {
  config.validate();
  SweepResult result;
  for (DecoderKind d : config.decoders) result.curves.push_back({to_string(d), {}});

  auto check_sink = [&csv] {
    if (!csv.good()) throw SweepWriteError("CSV write failed");
  };
  try {
    csv << csv_header() << '\n';
    csv.flush();
    check_sink();
    for (int n : config.n_grid) {
      std::string block;
      for (std::size_t d = 0; d < config.decoders.size(); ++d) {
        TrialBatchResult batch = estimate_error(config, n, config.decoders[d]);
        if (progress) progress(batch);
        block += csv_row(config, batch);
        block += '\n';
        PhaseRow row;
        row.n = n;
        row.perr_hat = batch.perr_hat;
        row.ci_lo = batch.ci_lo;
        row.ci_hi = batch.ci_hi;
        if (batch.bounds.union_bound) row.union_bound = batch.bounds.union_bound->clipped;
        row.fano = batch.bounds.fano_exact ? batch.bounds.fano_exact : batch.bounds.fano_ensemble;
        result.curves[d].rows.push_back(row);
        result.batches.push_back(std::move(batch));
      }
      csv << block;
      csv.flush();
      check_sink();
    }
  } catch (const std::exception& e) {
    csv.clear();
    csv << "#INCOMPLETE," << sanitize(e.what()) << '\n';
    csv.flush();
    throw;
  }
  return result;
}

std::string sweep_summary_json(const ExperimentConfig& config, const SweepResult& result) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) -> json { return v ? json(*v) : json(nullptr); };
  json rows = json::array();
  for (const TrialBatchResult& b : result.batches) {
    const bool have_rate = b.trials > b.aborted;
    json row = {
        {"experiment_id", experiment_id(config)},
        {"p", config.p},
        {"s", config.s},
        {"n", b.n},
        {"sigma", config.sigma},
        {"m2", config.m2},
        {"decoder", b.decoder},
        {"ensemble", to_string(config.ensemble)},
        {"trials", b.trials},
        {"errors", b.errors},
        {"aborted", b.aborted},
        {"perr_hat", have_rate ? json(b.perr_hat) : json(nullptr)},
        {"ci_lo", have_rate ? json(b.ci_lo) : json(nullptr)},
        {"ci_hi", have_rate ? json(b.ci_hi) : json(nullptr)},
        {"union_bound", b.bounds.union_bound ? json(b.bounds.union_bound->clipped) : json(nullptr)},
        {"union_log_value", b.bounds.union_bound ? json(b.bounds.union_bound->log_value) : json(nullptr)},
        {"union_regime_valid", b.bounds.union_bound ? json(b.bounds.union_bound->regime_valid) : json(nullptr)},
        {"fano_exact", opt(b.bounds.fano_exact)},
        {"fano_ensemble", opt(b.bounds.fano_ensemble)},
        {"sufficient_n", opt(b.bounds.sufficient_n)},
        {"necessary_n", opt(b.bounds.necessary_n)},
        {"base_seed", config.base_seed},
        {"mean_decode_ms", have_rate ? json(b.mean_decode_ms) : json(nullptr)},
    };
    rows.push_back(std::move(row));
  }
  json summary = {
      {"toolkit_version", kToolkitVersion},
      {"preset", config.preset.empty() ? json(nullptr) : json(config.preset)},
      {"experiment_id", experiment_id(config)},
      {"union_form", to_string(config.bounds.union_form)},
      {"bound_C", config.bounds.c},
      {"bound_Cprime", config.bounds.c_prime},
      {"rows", std::move(rows)},
  };
  return summary.dump(2);
}

std::vector<PresetInfo> list_presets() {
  return {
      {"sublinear-regime", "p=256, s=16, m2=1/s, OMP decoder (C(256,16) is far beyond the exhaustive budget)"},
      {"linear-regime", "p=32, s=p/8=4, m2=(4/s) log s, exhaustive decoder"},
      {"lasso-gap", "linear-regime sizes, exhaustive and lasso decoders on identical instances"},
  };
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig config;
  config.preset = name;
  config.sigma = 1.0;
  config.sign_mode = SignMode::random_sign;
  config.ensemble = Ensemble::generic;
  config.base_seed = 20070101;
  if (name == "sublinear-regime") {
    config.p = 256;
    config.s = 16;  // ceil(sqrt(256))
    config.m2 = 1.0 / config.s;
    config.n_grid = {32, 64, 128, 256, 512};
    config.decoders = {DecoderKind::omp};
    config.trials = 100;
  } else if (name == "linear-regime" || name == "lasso-gap") {
    config.p = 32;
    config.s = 4;  // p / 8
    config.m2 = 4.0 / config.s * std::log(static_cast<double>(config.s));
    config.n_grid = {8, 12, 16, 24, 32};
    config.decoders = name == "lasso-gap" ? std::vector<DecoderKind>{DecoderKind::exhaustive, DecoderKind::lasso}
                                          : std::vector<DecoderKind>{DecoderKind::exhaustive};
    config.trials = 200;
  } else {
    std::string known;
    for (const PresetInfo& info : list_presets()) known += (known.empty() ? "" : ", ") + info.name;
    throw ConfigError("unknown preset '" + name + "' (known presets: " + known + ")");
  }
  config.validate();
  return config;
}

void write_instance(std::ostream& out, const TrialInstance& instance, std::uint64_t seed) {
  const Matrix& x = instance.x.matrix();
  out << x.rows() << ' ' << x.cols() << ' ' << instance.beta.sparsity() << ' ' << format_exact(instance.y.sigma)
      << ' ' << seed << '\n';
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out << (j ? " " : "") << format_exact(x(i, j));
    out << '\n';
  }
  for (int i = 0; i < instance.beta.sparsity(); ++i) {
    out << (i ? " " : "") << instance.beta.support()[i] << ':'
        << format_exact(instance.beta.values()[static_cast<std::size_t>(i)]);
  }
  out << '\n';
  for (Eigen::Index i = 0; i < instance.y.y.size(); ++i) out << (i ? " " : "") << format_exact(instance.y.y(i));
  out << '\n';
}

LoadedInstance read_instance(std::istream& in) {
  auto fail = [](const std::string& what) { throw DomainError("instance file: " + what); };
  std::string line;
  if (!std::getline(in, line)) fail("missing header line");
  std::istringstream head(line);
  int n = 0;
  int p = 0;
  int s = 0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  if (!(head >> n >> p >> s >> sigma >> seed) || n < 1 || p < 1 || s < 1 || s > p) fail("bad header '" + line + "'");

  auto read_doubles = [&](std::size_t expected, const char* what) {
    std::string row;
    if (!std::getline(in, row)) fail(std::string("missing ") + what + " line");
    std::vector<double> values;
    std::istringstream cells(row);
    std::string cell;
    while (cells >> cell) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) fail(std::string("bad number in ") + what);
      values.push_back(v);
    }
    if (values.size() != expected) fail(std::string("wrong entry count in ") + what + " line");
    return values;
  };

  Matrix x(n, p);
  for (int i = 0; i < n; ++i) {
    const std::vector<double> row = read_doubles(static_cast<std::size_t>(p), "design");
    for (int j = 0; j < p; ++j) x(i, j) = row[static_cast<std::size_t>(j)];
  }

  if (!std::getline(in, line)) fail("missing signal line");
  std::istringstream pairs(line);
  std::string pair;
  std::vector<std::pair<int, double>> entries;
  while (pairs >> pair) {
    const auto colon = pair.find(':');
    if (colon == std::string::npos) fail("signal entries must be index:value");
    int index = 0;
    double value = 0.0;
    const auto [p1, e1] = std::from_chars(pair.data(), pair.data() + colon, index);
    const auto [p2, e2] = std::from_chars(pair.data() + colon + 1, pair.data() + pair.size(), value);
    if (e1 != std::errc{} || e2 != std::errc{} || p1 != pair.data() + colon || p2 != pair.data() + pair.size()) {
      fail("bad signal entry '" + pair + "'");
    }
    entries.emplace_back(index, value);
  }
  if (static_cast<int>(entries.size()) != s) fail("signal line must hold s entries");
  std::sort(entries.begin(), entries.end());
  std::vector<int> support;
  std::vector<double> values;
  for (const auto& [index, value] : entries) {
    support.push_back(index);
    values.push_back(value);
  }

  const std::vector<double> obs = read_doubles(static_cast<std::size_t>(n), "observation");
  Vector y(n);
  for (int i = 0; i < n; ++i) y(i) = obs[static_cast<std::size_t>(i)];

  return LoadedInstance{DesignMatrix(std::move(x)), SparseSignal(SupportSet(std::move(support), p), std::move(values)),
                        ObservationVector{std::move(y), sigma}, seed};
}

}  // namespace suprec
