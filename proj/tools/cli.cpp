#include "suprec/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "suprec/bounds.hpp"
#include "suprec/combinations.hpp"
#include "suprec/errors.hpp"
#include "suprec/harness.hpp"
#include "suprec/tail_check.hpp"

namespace suprec {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string num_or_dash(const std::optional<double>& v) { return v ? num(*v) : std::string("-"); }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void row(std::ostream& out, const std::string& key, const std::string& value) {
  out << std::left << std::setw(22) << key << value << '\n';
}

struct DecodeArgs {
  int p = 0;
  int s = 0;
  int n = 0;
  double sigma = 1.0;
  double m2 = 1.0;
  std::string decoder = "exhaustive";
  std::string sign_mode = "random-sign";
  std::uint64_t seed = 1;
  double budget = 1e8;
  std::string emit_instance;
  bool json = false;
};

int cmd_decode(const DecodeArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  config.p = a.p;
  config.s = a.s;
  config.n_grid = {a.n};
  config.sigma = a.sigma;
  config.m2 = a.m2;
  config.sign_mode = parse_sign_mode(a.sign_mode);
  config.decoders = {parse_decoder(a.decoder)};
  config.base_seed = a.seed;
  config.budget = a.budget;
  config.trials = 1;
  config.validate();

  const TrialInstance inst = make_instance(config, a.n, 0);
  if (!a.emit_instance.empty()) {
    std::ofstream file(a.emit_instance);
    write_instance(file, inst, a.seed);
    file.flush();
    if (!file) throw std::runtime_error("cannot write instance file '" + a.emit_instance + "'");
  }

  DecodeResult result;
  try {
    result = make_decoder(config.decoders.front(), a.budget)(inst, a.s);
  } catch (const BudgetError& e) {
    err << "refused: C(" << a.p << "," << a.s << ") = " << num(binomial_double(a.p, a.s))
        << " subsets exceeds the enumeration budget " << num(a.budget) << '\n';
    return kExitRuntime;
  }
  const SupportSet& truth = inst.beta.support();
  const double f_truth = residual_sq(inst.x, truth, inst.y.y);
  const double delta = result.min_residual - f_truth;
  const bool exact = result.estimate == truth;

  if (a.json) {
    json j = {{"p", a.p},
              {"s", a.s},
              {"n", a.n},
              {"sigma", a.sigma},
              {"m2", a.m2},
              {"decoder", a.decoder},
              {"seed", a.seed},
              {"true_support", truth.indices()},
              {"estimate", result.estimate.indices()},
              {"f_estimate", result.min_residual},
              {"f_truth", f_truth},
              {"delta", delta},
              {"exact_recovery", exact},
              {"tie_count", result.tie_count},
              {"subsets_evaluated", result.subsets_evaluated}};
    out << j.dump(2) << '\n';
  } else {
    row(out, "decoder", a.decoder);
    row(out, "true_support", truth.to_string());
    row(out, "estimate", result.estimate.to_string());
    row(out, "f(estimate)", num(result.min_residual));
    row(out, "f(truth)", num(f_truth));
    row(out, "delta", num(delta));
    row(out, "exact_recovery", exact ? "yes" : "no");
    row(out, "subsets_evaluated", std::to_string(result.subsets_evaluated));
    if (result.underdetermined) row(out, "note", "s > n: many subsets fit exactly");
  }
  err << "decode time: " << num(1e3 * result.elapsed_seconds) << " ms\n";
  return kExitOk;
}

struct BoundsArgs {
  int p = 0;
  int s = 0;
  int n = 0;
  double m2 = 0.0;
  double c = 24.0;
  double c_prime = 0.25;
  std::string union_form = "exact-lemma2";
  bool json = false;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  if (a.s < 1 || a.s >= a.p) throw DomainError("--s must satisfy 1 <= s < p");
  if (a.n < 1) throw DomainError("--n must be >= 1");
  if (!(a.c > 0.0) || !(a.c_prime > 0.0)) throw DomainError("--C and --Cprime must be > 0");
  BoundOptions options;
  options.c = a.c;
  options.c_prime = a.c_prime;
  options.union_form = parse_union_form(a.union_form);
  const BoundReport r = bound_report(a.n, a.p, a.s, a.m2, options);

  if (a.json) {
    json terms = json::array();
    if (r.union_bound) {
      for (const UnionTerm& t : r.union_bound->terms) {
        terms.push_back({{"k", t.k}, {"count", t.count}, {"log_pairwise", t.log_pairwise},
                         {"log_term", std::isfinite(t.log_term) ? json(t.log_term) : json(nullptr)}});
      }
    }
    json j = {{"n", r.n},
              {"p", r.p},
              {"s", r.s},
              {"m2", r.m2},
              {"union_form", a.union_form},
              {"union_bound", r.union_bound ? json(r.union_bound->clipped) : json(nullptr)},
              {"union_log_value", r.union_bound ? json(r.union_bound->log_value) : json(nullptr)},
              {"per_k_terms", terms},
              {"sufficient_n", opt_json(r.sufficient_n)},
              {"necessary_n", opt_json(r.necessary_n)},
              {"fano_exact", opt_json(r.fano_exact)},
              {"fano_ensemble", opt_json(r.fano_ensemble)},
              {"regime_valid", r.regime_valid}};
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  row(out, "n", std::to_string(r.n));
  row(out, "p", std::to_string(r.p));
  row(out, "s", std::to_string(r.s));
  row(out, "m2", num(r.m2));
  row(out, "union_form", to_string(options.union_form));
  if (r.union_bound) {
    row(out, "union_bound", num(r.union_bound->clipped));
    row(out, "union_log_value", num(r.union_bound->log_value));
  } else {
    row(out, "union_bound", "- (requires s < n)");
  }
  row(out, "sufficient_n", num_or_dash(r.sufficient_n));
  row(out, "necessary_n", num_or_dash(r.necessary_n));
  row(out, "fano_exact", num_or_dash(r.fano_exact));
  row(out, "fano_ensemble", num_or_dash(r.fano_ensemble));
  row(out, "regime_valid", r.regime_valid ? "true" : "false");
  if (r.union_bound) {
    out << "per_k_terms\n";
    out << "  k  count  log_pairwise  log_term\n";
    for (const UnionTerm& t : r.union_bound->terms) {
      out << "  " << t.k << "  " << num(t.count) << "  " << num(t.log_pairwise) << "  " << num(t.log_term) << '\n';
    }
  }
  return kExitOk;
}

struct SweepArgs {
  std::string config_path;
  std::string preset_name;
  int p = 0;
  int s = 0;
  std::string n_grid;
  double sigma = 1.0;
  double m2 = 0.0;
  std::string decoder = "exhaustive";
  std::string sign_mode = "random-sign";
  std::string ensemble = "generic";
  std::string union_form = "exact-lemma2";
  double c = 24.0;
  double c_prime = 0.25;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out;
  bool json = false;
  bool timing = false;
};

ExperimentConfig inline_config(const SweepArgs& a) {
  std::ostringstream text;
  text << "p = " << a.p << "\ns = " << a.s << "\nn_grid = " << a.n_grid << "\nsigma = " << num(a.sigma)
       << "\nm2 = " << num(a.m2) << "\nsign_mode = " << a.sign_mode << "\ndecoder = " << a.decoder
       << "\nensemble = " << a.ensemble << "\nbound_C = " << num(a.c) << "\nbound_Cprime = " << num(a.c_prime)
       << "\nunion_form = " << a.union_form << '\n';
  std::istringstream in(text.str());
  return parse_config(in);
}

int cmd_sweep(const SweepArgs& a, bool inline_given, std::ostream& out, std::ostream& err) {
  const int sources = !a.config_path.empty() + !a.preset_name.empty() + inline_given;
  if (sources != 1) throw ConfigError("sweep needs exactly one of --config, --preset or inline flags with --n-grid");
  ExperimentConfig config;
  if (!a.config_path.empty()) {
    config = load_config(a.config_path);
  } else if (!a.preset_name.empty()) {
    config = preset(a.preset_name);
  } else {
    config = inline_config(a);
  }
  if (a.trials) config.trials = *a.trials;
  if (a.seed) config.base_seed = *a.seed;
  if (a.threads) config.threads = *a.threads;
  if (!a.out.empty()) config.out = a.out;
  config.record_timing = a.timing;
  config.validate();

  std::ofstream file;
  std::ostringstream discard;
  std::ostream* csv = &out;
  if (!config.out.empty()) {
    file.open(config.out);
    if (!file) throw std::runtime_error("cannot open output file '" + config.out + "'");
    csv = &file;
  } else if (a.json) {
    csv = &discard;
  }

  err << "experiment " << experiment_id(config) << '\n';
  const SweepResult result = sweep(config, *csv, [&err](const TrialBatchResult& b) {
    err << "n=" << b.n << " decoder=" << b.decoder << " errors=" << b.errors << "/" << (b.trials - b.aborted)
        << " aborted=" << b.aborted << " mean_decode_ms=" << num(b.mean_decode_ms) << '\n';
  });
  if (a.json) out << sweep_summary_json(config, result) << '\n';
  return kExitOk;
}

struct VerifyArgs {
  std::int64_t samples = 1000000;
  std::uint64_t seed = 1;
  bool selftest_break = false;
};

int cmd_verify_tails(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  TailCheckOptions options;
  options.samples = a.samples;
  options.seed = a.seed;
  options.break_one = a.selftest_break;
  bool ok = true;
  for (const TailCell& c : run_tail_checks(options)) {
    ok = ok && c.pass;
    out << (c.pass ? "PASS" : "FAIL") << ' ' << c.bound << " d=" << c.d << " nu=" << num(c.nu) << " x=" << num(c.x)
        << " threshold=" << num(c.threshold) << " bound=" << num(c.prob_bound) << " empirical=" << num(c.empirical)
        << " stderr=" << num(c.stderr_mc) << '\n';
    if (c.wide_ci) {
      err << "WIDE-CI " << c.bound << " d=" << c.d << " nu=" << num(c.nu) << " x=" << num(c.x)
          << ": 3 stderr exceeds the bound; increase --samples\n";
    }
  }
  constexpr int kSandwichMax = 40;
  const auto failures = check_binomial_sandwich(kSandwichMax);
  ok = ok && failures.empty();
  out << (failures.empty() ? "PASS" : "FAIL") << " binomial-sandwich m<=" << kSandwichMax
      << " violations=" << failures.size() << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_presets(const std::string& show, std::ostream& out) {
  if (!show.empty()) {
    out << render_config(preset(show));
    return kExitOk;
  }
  for (const PresetInfo& info : list_presets()) out << std::left << std::setw(18) << info.name << info.description << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse support recovery toolkit", "suprec"};
  app.require_subcommand(1);

  DecodeArgs dec;
  CLI::App* decode = app.add_subcommand("decode", "Generate one instance and decode it");
  decode->add_option("--p", dec.p, "Ambient dimension")->required();
  decode->add_option("--s", dec.s, "Support size")->required();
  decode->add_option("--n", dec.n, "Number of observations")->required();
  decode->add_option("--sigma", dec.sigma, "Noise standard deviation")->capture_default_str();
  decode->add_option("--m2", dec.m2, "Squared minimum magnitude in noise units")->capture_default_str();
  decode->add_option("--decoder", dec.decoder, "exhaustive, omp or lasso")->capture_default_str();
  decode->add_option("--sign-mode", dec.sign_mode, "all-positive or random-sign")->capture_default_str();
  decode->add_option("--seed", dec.seed, "Base seed")->capture_default_str();
  decode->add_option("--budget", dec.budget, "Exhaustive enumeration budget")->capture_default_str();
  decode->add_option("--emit-instance", dec.emit_instance, "Write the instance to PATH");
  decode->add_flag("--json", dec.json, "Print a JSON object");

  BoundsArgs bnd;
  CLI::App* bounds = app.add_subcommand("bounds", "Evaluate the theoretical bounds at one point");
  bounds->add_option("--p", bnd.p)->required();
  bounds->add_option("--s", bnd.s)->required();
  bounds->add_option("--n", bnd.n)->required();
  bounds->add_option("--m2", bnd.m2)->required();
  bounds->add_option("--C", bnd.c, "Sufficient-n constant")->capture_default_str();
  bounds->add_option("--Cprime", bnd.c_prime, "Necessary-n constant")->capture_default_str();
  bounds->add_option("--union-form", bnd.union_form, "exact-lemma2 or simplified")->capture_default_str();
  bounds->add_flag("--json", bnd.json, "Print a JSON object");

  SweepArgs sw;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a Monte Carlo sweep over a sample-size grid");
  sweep_cmd->add_option("--config", sw.config_path, "Config file");
  sweep_cmd->add_option("--preset", sw.preset_name, "Named preset");
  CLI::Option* grid_opt = sweep_cmd->add_option("--n-grid", sw.n_grid, "Comma-separated sample sizes");
  sweep_cmd->add_option("--p", sw.p);
  sweep_cmd->add_option("--s", sw.s);
  sweep_cmd->add_option("--m2", sw.m2);
  sweep_cmd->add_option("--sigma", sw.sigma)->capture_default_str();
  sweep_cmd->add_option("--decoder", sw.decoder, "Decoder or comma list")->capture_default_str();
  sweep_cmd->add_option("--sign-mode", sw.sign_mode)->capture_default_str();
  sweep_cmd->add_option("--ensemble", sw.ensemble)->capture_default_str();
  sweep_cmd->add_option("--union-form", sw.union_form)->capture_default_str();
  sweep_cmd->add_option("--C", sw.c)->capture_default_str();
  sweep_cmd->add_option("--Cprime", sw.c_prime)->capture_default_str();
  sweep_cmd->add_option("--trials", sw.trials, "Override the trial count");
  sweep_cmd->add_option("--seed", sw.seed, "Override the base seed");
  sweep_cmd->add_option("--threads", sw.threads, "Worker threads (0: all cores)");
  sweep_cmd->add_option("--out", sw.out, "CSV output path (default stdout)");
  sweep_cmd->add_flag("--json", sw.json, "Print a JSON summary to stdout");
  sweep_cmd->add_flag("--timing", sw.timing, "Record mean decode time in the CSV");

  VerifyArgs ver;
  CLI::App* verify = app.add_subcommand("verify-tails", "Monte Carlo check of the chi-square tail bounds");
  verify->add_option("--samples", ver.samples, "Draws per (d, nu) cell")->capture_default_str();
  verify->add_option("--seed", ver.seed)->capture_default_str();
  verify->add_flag("--selftest-break", ver.selftest_break, "Rig one threshold so the check must fail");

  std::string show;
  CLI::App* presets = app.add_subcommand("presets", "List the named experiment presets");
  presets->add_option("--show", show, "Print the config of one preset");

  std::vector<const char*> argv{"suprec"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (decode->parsed()) return cmd_decode(dec, out, err);
    if (bounds->parsed()) return cmd_bounds(bnd, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sw, grid_opt->count() > 0, out, err);
    if (verify->parsed()) return cmd_verify_tails(ver, out, err);
    if (presets->parsed()) return cmd_presets(show, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace suprec
