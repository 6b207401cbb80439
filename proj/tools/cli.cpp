#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "nsg/errors.hpp"
#include "run_config.hpp"

namespace nsg::cli {
namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raw flag values; anything left unset keeps the scenario file's value.
struct Flags {
  std::string scenario_path;
  std::string kind, suite, target, method, family, rule, format, out;
  std::vector<double> sigma, theta_grid;
  std::vector<int> d;
  std::vector<std::size_t> n;
  double sum_sigma_sq = 0, delta = 0, theta = 0, b = 0, B = 0, c = 0, alpha = 0, certificate_scale = 0;
  std::uint64_t seed = 0, trials = 0;
  unsigned threads = 0;
  bool strict = false;
};

void add_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--scenario", f.scenario_path, "scenario / run-config JSON file");
  cmd.add_option("--sigma", f.sigma, "comma-separated step scales")->delimiter(',');
  cmd.add_option("--sum-sigma-sq", f.sum_sigma_sq, "sum of squared step scales");
  cmd.add_option("--d", f.d, "dimension (comma list for grids)")->delimiter(',');
  cmd.add_option("--n", f.n, "steps or sample count (comma list for grids)")->delimiter(',');
  cmd.add_option("--delta", f.delta, "failure probability");
  cmd.add_option("--theta", f.theta, "fixed theta");
  cmd.add_option("--theta-grid", f.theta_grid, "comma-separated theta values")->delimiter(',');
  cmd.add_option("--b", f.b, "lower variance level of the adaptive bound");
  cmd.add_option("--B", f.B, "upper variance level of the adaptive bound");
  cmd.add_option("--c", f.c, "bound constant");
  cmd.add_option("--family", f.family, "base distribution family");
  cmd.add_option("--rule", f.rule, "rule kind or inline rule JSON");
  cmd.add_option("--certificate-scale", f.certificate_scale, "multiply certified sigma (tail suite)");
  cmd.add_option("--method", f.method, "exact_enumeration | monte_carlo_quantile");
  cmd.add_option("--seed", f.seed, "base seed (falls back to NSG_SEED)");
  cmd.add_option("--trials", f.trials, "Monte Carlo trials");
  cmd.add_option("--alpha", f.alpha, "Clopper-Pearson level");
  cmd.add_option("--threads", f.threads, "worker threads (0 = all cores)");
  cmd.add_option("--format", f.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  cmd.add_option("--out", f.out, "write the report here instead of stdout");
  cmd.add_flag("--strict", f.strict, "treat warnings as contract violations");
}

bool given(const CLI::App& cmd, const char* name) {
  const CLI::Option* opt = cmd.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

AdaptiveRule parse_rule(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    try {
      return rule_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("--rule: ") + e.what());
    }
  }
  return rule_from_json(json{{"kind", text}});
}

RunConfig assemble(const CLI::App& cmd, const Flags& f) {
  RunConfig config = f.scenario_path.empty() ? RunConfig{} : load_run_config(f.scenario_path);
  auto& s = config.scenario;
  if (given(cmd, "--sigma")) config.sigma = f.sigma;
  if (given(cmd, "--sum-sigma-sq")) config.sum_sigma_sq = f.sum_sigma_sq;
  if (given(cmd, "--d")) s.d_grid = f.d;
  if (given(cmd, "--n")) s.n_grid = f.n;
  if (given(cmd, "--delta")) s.delta = f.delta;
  if (given(cmd, "--theta")) s.theta = f.theta;
  if (given(cmd, "--theta-grid")) config.theta_grid = f.theta_grid;
  if (given(cmd, "--b")) s.b = f.b;
  if (given(cmd, "--B")) s.B = f.B;
  if (given(cmd, "--c")) config.c = f.c;
  if (given(cmd, "--family")) s.family = family_from_string(f.family);
  if (given(cmd, "--rule")) s.rule = parse_rule(f.rule);
  if (given(cmd, "--certificate-scale")) config.certificate_scale = f.certificate_scale;
  if (given(cmd, "--kind")) config.kind = f.kind;
  if (given(cmd, "--suite")) config.suite = f.suite;
  if (given(cmd, "--target")) config.target = f.target;
  if (given(cmd, "--method")) config.method = f.method;
  if (given(cmd, "--trials")) config.trials = f.trials;
  if (given(cmd, "--alpha")) config.alpha = f.alpha;
  if (given(cmd, "--threads")) config.threads = f.threads;
  if (given(cmd, "--format")) config.format = f.format;
  if (given(cmd, "--out")) config.out = f.out;
  if (f.strict) config.strict = true;

  if (given(cmd, "--seed")) {
    config.seed = f.seed;
  } else if (!config.seed) {
    if (const char* env = std::getenv("NSG_SEED"); env && *env) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (*end != '\0' || *env == '-') throw ValidationError("NSG_SEED must be a nonnegative integer");
      config.seed = v;
    }
  }
  if (s.d_grid.empty() || s.n_grid.empty()) throw ValidationError("--d and --n need at least one value");
  config.validate();
  return config;
}

void emit(const Outcome& outcome, const RunConfig& config, std::ostream& out, std::ostream& err) {
  for (const auto& w : outcome.warnings) err << "warning: " << w << "\n";
  if (!config.out) {
    out << outcome.text;
    return;
  }
  std::ofstream file(*config.out, std::ios::binary);
  if (!file) throw IoError("cannot open '" + *config.out + "' for writing");
  file << outcome.text;
  file.flush();
  if (!file) throw IoError("failed writing '" + *config.out + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Norm-subGaussian concentration toolkit", "nsg"};
  app.require_subcommand(1);

  Flags f;
  struct Command {
    CLI::App* app;
    Outcome (*run)(const RunConfig&);
  };
  std::vector<Command> commands;

  auto* bounds = app.add_subcommand("bounds", "evaluate a concentration bound");
  add_flags(*bounds, f);
  bounds->add_option("--kind", f.kind, "hoeffding | fixed_theta | optimal_theta | adaptive");
  commands.push_back({bounds, cmd_bounds});

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_flags(*verify, f);
  verify->add_option("--suite", f.suite, "tail | mgf | lieb | peeling | hoeffding | adaptive | equivalence | cover");
  commands.push_back({verify, cmd_verify});

  auto* simulate = app.add_subcommand("simulate", "dump one martingale path");
  add_flags(*simulate, f);
  commands.push_back({simulate, cmd_simulate});

  auto* estimate = app.add_subcommand("estimate-constant", "estimate the constant in a bound");
  add_flags(*estimate, f);
  estimate->add_option("--target", f.target, "hoeffding | main_lemma | adaptive | mgf_lemma | isotropic_example");
  commands.push_back({estimate, cmd_estimate_constant});

  auto* sample_cmd = app.add_subcommand("sample", "draw samples with the certificate");
  add_flags(*sample_cmd, f);
  commands.push_back({sample_cmd, cmd_sample});

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  for (const auto& command : commands) {
    if (!command.app->parsed()) continue;
    try {
      RunConfig config = assemble(*command.app, f);
      const Outcome outcome = command.run(config);
      emit(outcome, config, out, err);
      return outcome.status;
    } catch (const IoError& e) {
      err << "error: " << e.what() << "\n";
      return kIo;
    } catch (const std::exception& e) {
      // Validation, domain, usage and resource errors, and malformed JSON.
      err << "error: " << e.what() << "\n";
      return kUsage;
    }
  }
  return kUsage;
}

}  // namespace nsg::cli
