#include "commands.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "cli.hpp"
#include "nsg/bounds.hpp"
#include "nsg/errors.hpp"
#include "suites.hpp"

namespace nsg::cli {

using nsg::to_json;
namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double variance_sum(const RunConfig& config, std::size_t n) {
  if (config.sum_sigma_sq) {
    if (!config.sigma.empty()) throw UsageError("give either --sigma or --sum-sigma-sq, not both");
    if (!(*config.sum_sigma_sq >= 0.0)) throw ValidationError("sum of sigma^2 must be nonnegative");
    return *config.sum_sigma_sq;
  }
  if (config.sigma.empty()) throw UsageError("bounds need --sigma or --sum-sigma-sq");
  // A single sigma with --n stands for n equal steps.
  const std::size_t copies = config.sigma.size() == 1 ? n : 1;
  double total = 0.0;
  for (double s : config.sigma) {
    if (!(s >= 0.0)) throw ValidationError("sigma values must be nonnegative");
    total += s * s;
  }
  return total * static_cast<double>(copies);
}

}  // namespace

Outcome cmd_bounds(const RunConfig& config) {
  const auto& s = config.scenario;
  bounds::BoundQuery q;
  q.d = s.d_grid.front();
  q.n = static_cast<int>(config.sigma.size() > 1 ? config.sigma.size() : s.n_grid.front());
  q.delta = s.delta;
  q.theta = s.theta;
  q.c = config.c.value_or(1.0);
  q.sigma_sq_sum = variance_sum(config, static_cast<std::size_t>(q.n));
  q.validate();

  const std::string kind = config.kind.value_or("hoeffding");
  json inputs{{"n", q.n}, {"d", q.d}, {"delta", q.delta}, {"sum_sigma_sq", q.sigma_sq_sum}, {"c", q.c}};
  json report{{"kind", kind}};
  std::optional<double> bound, theta, iota;
  std::string case_name = "bound";

  if (kind == "hoeffding") {
    bound = bounds::hoeffding_bound(q);
  } else if (kind == "fixed_theta") {
    bound = bounds::fixed_theta_bound(q);
    theta = *q.theta;
  } else if (kind == "optimal_theta") {
    q.theta = bounds::optimal_theta(q);
    theta = *q.theta;
    bound = bounds::fixed_theta_bound(q);
  } else if (kind == "adaptive") {
    const auto grid = bounds::build_doubling_grid(s.b, s.B, q.d, q.delta);
    const auto a = bounds::adaptive_bound(q.sigma_sq_sum, grid, q.c);
    iota = grid.iota;
    inputs["b"] = s.b;
    inputs["B"] = s.B;
    report["grid"] = to_json(grid);
    if (a.exceeded()) {
      case_name = "exceeded";
    } else {
      bound = a.value;
    }
  } else {
    throw UsageError("--kind must be hoeffding, fixed_theta, optimal_theta or adaptive");
  }
  if (s.theta) inputs["theta"] = *s.theta;

  report["inputs"] = inputs;
  report["case"] = case_name;
  report["bound"] = bound ? json(*bound) : json(nullptr);
  if (theta) report["theta"] = *theta;
  if (iota) report["iota"] = *iota;

  if (config.csv()) {
    std::string text = "kind,case,bound,theta,iota\n";
    text += kind + "," + case_name + "," + (bound ? fmt(*bound) : "") + "," + (theta ? fmt(*theta) : "") + "," +
            (iota ? fmt(*iota) : "") + "\n";
    return {text, kPass, {}};
  }
  return {dump(report), kPass, {}};
}

Outcome cmd_verify(const RunConfig& config) {
  if (!config.suite) throw UsageError("verify needs --suite");
  const auto report = run_suite(*config.suite, config);
  const int status = report.pass() ? kPass : kContractViolation;
  if (config.csv()) {
    std::string text = "name,value,limit,slack,pass\n";
    for (const auto& c : report.checks) {
      text += "\"" + c.name + "\"," + fmt(c.value) + "," + fmt(c.limit) + "," + fmt(c.slack) + "," +
              (c.pass ? "true" : "false") + "\n";
    }
    return {text, status, {}};
  }
  return {dump(to_json(report, config)), status, {}};
}

Outcome cmd_simulate(const RunConfig& config) {
  const auto& s = config.scenario;
  const DistributionSpec base =
      config.distributions.empty() ? verify::unit_base(s.family, s.d_grid.front()) : config.distributions.front();
  const auto path = simulate_path(s.rule, base, s.n_grid.front(), {config.trial_config().seed, 0});
  if (config.csv("csv")) {
    std::ostringstream os;
    write_path_csv(os, path);
    return {os.str(), kPass, {}};
  }
  json steps = json::array();
  for (const auto& step : path.steps) {
    steps.push_back({{"sigma", step.sigma},
                     {"x", std::vector<double>(step.x.data(), step.x.data() + step.x.size())},
                     {"sum_norm", step.partial_sum.norm()}});
  }
  return {dump({{"dimension", path.dimension}, {"rule", to_json(s.rule)}, {"steps", steps}}), kPass, {}};
}

Outcome cmd_estimate_constant(const RunConfig& config) {
  const auto target = verify::target_from_string(config.target.value_or("hoeffding"));
  const auto trials = config.trial_config();
  verify::ConstantEstimate est;

  if (target == verify::Target::MgfLemma || target == verify::Target::IsotropicExample) {
    std::vector<double> theta = config.theta_grid;
    if (theta.empty()) theta = {-1.0, -0.5, -0.25, 0.25, 0.5, 1.0};
    std::vector<double> t_grid;
    for (int k = 1; k <= 20; ++k) t_grid.push_back(0.25 * k);
    std::vector<DistributionSpec> laws = config.distributions;
    if (laws.empty()) {
      for (int d : config.scenario.d_grid) {
        laws.push_back(target == verify::Target::IsotropicExample ? isotropic_gaussian(d, 1.0)
                                                                   : verify::unit_base(config.scenario.family, d));
      }
    }
    bool first = true;
    for (const auto& law : laws) {
      if (target == verify::Target::IsotropicExample && law.family != Family::IsotropicGaussian)
        throw ValidationError("isotropic_example needs isotropic_gaussian distributions");
      auto one = target == verify::Target::MgfLemma
                     ? verify::estimate_mgf_constant(law, theta, trials)
                     : verify::estimate_isotropic_constant(law.dimension, law.sigma, t_grid, trials);
      if (first) {
        est = one;
        first = false;
      } else {
        est.c_hat = std::max(est.c_hat, one.c_hat);
        est.cells.insert(est.cells.end(), one.cells.begin(), one.cells.end());
      }
    }
    est.scenario = config.scenario.name;
  } else {
    verify::Method method = verify::Method::MonteCarloQuantile;
    if (config.method == "exact_enumeration") {
      method = verify::Method::ExactEnumeration;
    } else if (config.method && *config.method != "monte_carlo_quantile") {
      throw ValidationError("method must be exact_enumeration or monte_carlo_quantile");
    }
    est = verify::estimate_constant(target, config.scenario, trials, method);
  }

  json report = to_json(est);
  json ratios = json::array();
  const auto& d_grid = config.scenario.d_grid;
  if (d_grid.size() > 1 && target != verify::Target::MgfLemma && target != verify::Target::IsotropicExample) {
    const auto [lo, hi] = std::minmax_element(d_grid.begin(), d_grid.end());
    for (std::size_t n : config.scenario.n_grid) {
      double c_lo = 0.0, c_hi = 0.0;
      for (const auto& cell : est.cells) {
        if (cell.n == n && cell.d == *lo) c_lo = cell.c_hat;
        if (cell.n == n && cell.d == *hi) c_hi = cell.c_hat;
      }
      ratios.push_back({{"n", n}, {"d_low", *lo}, {"d_high", *hi},
                        {"ratio", c_lo > 0.0 ? json(c_hi / c_lo) : json(nullptr)}});
    }
  }
  report["d_ratio"] = ratios;

  Outcome outcome;
  if (est.unstable) {
    std::ostringstream w;
    w << "unstable quantile: delta * trials = " << config.scenario.delta * static_cast<double>(est.trials)
      << " < 100";
    outcome.warnings.push_back(w.str());
  }
  report["warnings"] = outcome.warnings;
  outcome.status = (est.unstable && config.strict) ? kContractViolation : kPass;

  if (config.csv()) {
    std::string text = "d,n,delta,theta,c_hat,norm_quantile,violations,trials\n";
    for (const auto& cell : est.cells) {
      text += std::to_string(cell.d) + "," + std::to_string(cell.n) + "," + fmt(cell.delta) + "," +
              (cell.theta ? fmt(*cell.theta) : "") + "," + fmt(cell.c_hat) + "," + fmt(cell.norm_quantile) + "," +
              fmt(cell.violations) + "," + std::to_string(cell.trials) + "\n";
    }
    outcome.text = text;
  } else {
    outcome.text = dump(report);
  }
  return outcome;
}

Outcome cmd_sample(const RunConfig& config) {
  DistributionSpec spec;
  if (!config.distributions.empty()) {
    spec = config.distributions.front();
  } else {
    const double sigma = config.sigma.empty() ? 1.0 : config.sigma.front();
    const int d = config.scenario.d_grid.front();
    spec = config.scenario.family == Family::FiniteSupport ? finite_support_rademacher(d, sigma)
                                                            : DistributionSpec{config.scenario.family, d, sigma, {}};
  }
  spec.validate();
  const auto points = sample(spec, {config.trial_config().seed, 0}, config.scenario.n_grid.front());
  if (config.csv()) {
    std::string text;
    for (int k = 0; k < spec.dimension; ++k) text += (k ? ",x_" : "x_") + std::to_string(k + 1);
    text += "\n";
    for (const auto& x : points) {
      for (int k = 0; k < spec.dimension; ++k) text += (k ? "," : "") + fmt(x[k]);
      text += "\n";
    }
    return {text, kPass, {}};
  }
  json rows = json::array();
  for (const auto& x : points) rows.push_back(std::vector<double>(x.data(), x.data() + x.size()));
  return {dump({{"distribution", to_json(spec)}, {"certificate", to_json(certificate(spec))}, {"samples", rows}}),
          kPass,
          {}};
}

}  // namespace nsg::cli
