#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsg/bounds.hpp"
#include "nsg/cover.hpp"
#include "nsg/dilation.hpp"
#include "nsg/errors.hpp"

namespace nsg::cli {

using nsg::to_json;
namespace {

// Floating-point allowance for the exact (enumerated) inequalities.
constexpr double kExactTolerance = 1e-9;

std::string label(const DistributionSpec& spec) {
  std::ostringstream os;
  os << to_string(spec.family) << " d=" << spec.dimension << " sigma=" << spec.sigma;
  return os.str();
}

// value <= limit
Check at_most(std::string name, double value, double limit) {
  return {std::move(name), value, limit, limit - value, value <= limit};
}

// value >= limit
Check at_least(std::string name, double value, double limit) {
  return {std::move(name), value, limit, value - limit, value >= limit};
}

std::vector<DistributionSpec> every_family(const std::vector<int>& d_grid) {
  std::vector<DistributionSpec> out;
  for (int d : d_grid) {
    out.push_back(bounded_sphere(d, 1.0));
    out.push_back(bounded_ball(d, 1.0));
    out.push_back(axis_subgaussian(d, 1.0));
    out.push_back(isotropic_gaussian(d, 1.0));
    out.push_back(finite_support_rademacher(d, 1.0));
  }
  return out;
}

std::vector<DistributionSpec> distributions_or(const RunConfig& config, std::vector<DistributionSpec> fallback) {
  return config.distributions.empty() ? fallback : config.distributions;
}

std::vector<DistributionSpec> finite_laws(const RunConfig& config) {
  std::vector<DistributionSpec> fallback;
  for (int d : config.scenario.d_grid) fallback.push_back(finite_support_rademacher(d, 1.0));
  auto laws = distributions_or(config, fallback);
  for (const auto& spec : laws) {
    if (spec.family != Family::FiniteSupport) throw ValidationError("exact suites need finite_support distributions");
  }
  return laws;
}

std::vector<double> theta_grid_or(const RunConfig& config, std::vector<double> fallback) {
  return config.theta_grid.empty() ? fallback : config.theta_grid;
}

// Each distribution gets its own block of streams.
TrialConfig offset(TrialConfig config, std::size_t index) {
  config.stream_base += static_cast<std::uint64_t>(index) << 40;
  return config;
}

SuiteReport tail_suite(const RunConfig& config) {
  SuiteReport report{"tail", {}};
  const double scale = config.certificate_scale.value_or(1.0);
  const auto laws = distributions_or(config, every_family(config.scenario.d_grid));
  const auto trials = config.trial_config();
  for (std::size_t i = 0; i < laws.size(); ++i) {
    auto cert = certificate(laws[i]);
    cert.sigma *= scale;
    const double param = cert.parameter();
    const auto norms = sample_norms(laws[i], offset(trials, i));
    if (param == 0.0) {
      // A zero certificate claims |X| = 0 almost surely; any hit refutes it.
      const double t[] = {std::numeric_limits<double>::min()};
      const auto e = verify::tail_profile(norms, t, trials.alpha)[0];
      report.checks.push_back(at_most(label(laws[i]) + " point mass", static_cast<double>(e.hits), 0.0));
      continue;
    }
    std::vector<double> t_grid;
    for (int k = 1; k <= 20; ++k) t_grid.push_back(k * 4.0 * param / 20.0);
    for (const auto& e : verify::tail_profile(norms, t_grid, trials.alpha)) {
      std::ostringstream name;
      name << label(laws[i]) << " t=" << e.threshold;
      report.checks.push_back(at_most(name.str(), e.upper, cert.tail_bound(e.threshold)));
    }
  }
  return report;
}

SuiteReport mgf_suite(const RunConfig& config) {
  SuiteReport report{"mgf", {}};
  const double limit = config.c.value_or(4.0);
  const auto grid = theta_grid_or(config, {-1.0, -0.5, -0.25, 0.25, 0.5, 1.0});
  const auto laws = distributions_or(config, every_family(config.scenario.d_grid));
  for (std::size_t i = 0; i < laws.size(); ++i) {
    const auto mgf = mgf_constant(laws[i], grid, offset(config.trial_config(), i));
    report.checks.push_back(at_most(label(laws[i]) + " c_hat", mgf.c_hat, limit));
  }
  return report;
}

SuiteReport lieb_suite(const RunConfig& config) {
  SuiteReport report{"lieb", {}};
  constexpr int kInstances = 10;
  const auto grid = theta_grid_or(config, {0.5, 1.0});
  const auto laws = finite_laws(config);
  const std::uint64_t seed = config.trial_config().seed;
  for (std::size_t i = 0; i < laws.size(); ++i) {
    const int m = laws[i].dimension + 1;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      std::vector<MatrixAtom> atoms;
      for (const auto& atom : laws[i].support) atoms.push_back({grid[j] * dilate(atom.point).dense(), atom.probability});
      for (int k = 0; k < kInstances; ++k) {
        Matrix a = Matrix::Zero(m, m);
        if (k > 0) {
          RandomSource rng({seed, (i << 40) + (j << 20) + static_cast<std::uint64_t>(k)});
          for (int r = 0; r < m; ++r)
            for (int s = 0; s <= r; ++s) a(r, s) = a(s, r) = 0.5 * rng.normal();
        }
        std::ostringstream name;
        name << label(laws[i]) << " theta=" << grid[j] << " A#" << k;
        report.checks.push_back(at_least(name.str(), lieb_check(a, atoms), -kExactTolerance));
      }
    }
  }
  return report;
}

SuiteReport peeling_suite(const RunConfig& config) {
  SuiteReport report{"peeling", {}};
  const auto grid = theta_grid_or(config, {0.5, 1.0});
  for (const auto& law : finite_laws(config)) {
    const auto step = peeling_step(law);
    for (std::size_t n : config.scenario.n_grid) {
      const std::vector<PeelingStep> steps(n, step);
      for (double theta : grid) {
        const double one[] = {theta};
        const double c = config.c.value_or(mgf_constant(law, one).c_hat);
        const auto result = peeling_check(law.dimension, steps, theta, c);
        std::ostringstream name;
        name << label(law) << " n=" << n << " theta=" << theta << " c=" << c;
        report.checks.push_back(at_most(name.str(), result.value, result.dimension + kExactTolerance));
      }
    }
  }
  return report;
}

verify::Method method_of(const RunConfig& config) {
  if (!config.method || *config.method == "monte_carlo_quantile") return verify::Method::MonteCarloQuantile;
  if (*config.method == "exact_enumeration") return verify::Method::ExactEnumeration;
  throw ValidationError("method must be exact_enumeration or monte_carlo_quantile");
}

SuiteReport hoeffding_suite(const RunConfig& config) {
  SuiteReport report{"hoeffding", {}};
  const double c = config.c.value_or(2.0);
  const auto est = verify::estimate_constant(verify::Target::Hoeffding, config.scenario, config.trial_config(),
                                             method_of(config));
  for (const auto& cell : est.cells) {
    std::ostringstream name;
    name << "d=" << cell.d << " n=" << cell.n << " quantile/bound";
    report.checks.push_back(at_most(name.str(), cell.c_hat, c));
  }
  // Logarithmic growth in d: the largest d may cost at most 1.5x the smallest.
  const auto [lo, hi] = std::minmax_element(config.scenario.d_grid.begin(), config.scenario.d_grid.end());
  if (*lo != *hi) {
    for (std::size_t n : config.scenario.n_grid) {
      double c_lo = 0.0, c_hi = 0.0;
      for (const auto& cell : est.cells) {
        if (cell.n != n) continue;
        if (cell.d == *lo) c_lo = cell.c_hat;
        if (cell.d == *hi) c_hi = cell.c_hat;
      }
      if (c_lo <= 0.0) continue;
      std::ostringstream name;
      name << "n=" << n << " c_hat(d=" << *hi << ")/c_hat(d=" << *lo << ")";
      report.checks.push_back(at_most(name.str(), c_hi / c_lo, 1.5));
    }
  }
  return report;
}

SuiteReport adaptive_suite(const RunConfig& config) {
  SuiteReport report{"adaptive", {}};
  const double c = config.c.value_or(2.0);
  config.scenario.validate(verify::Target::Adaptive);
  const auto trials = config.trial_config();
  std::size_t cell = 0;
  for (int d : config.scenario.d_grid) {
    for (std::size_t n : config.scenario.n_grid) {
      const auto e = verify::adaptive_violations(config.scenario, d, n, c, offset(trials, cell++));
      std::ostringstream name;
      name << "d=" << d << " n=" << n << " violation upper bound";
      report.checks.push_back(at_most(name.str(), e.upper, config.scenario.delta));
    }
  }
  return report;
}

SuiteReport equivalence_suite(const RunConfig& config) {
  SuiteReport report{"equivalence", {}};
  std::vector<DistributionSpec> fallback;
  for (int d : config.scenario.d_grid) {
    fallback.push_back(bounded_sphere(d, 1.0));
    fallback.push_back(isotropic_gaussian(d, 1.0));
  }
  const auto laws = distributions_or(config, fallback);
  for (std::size_t i = 0; i < laws.size(); ++i) {
    const auto r = verify::equivalence_report(laws[i], offset(config.trial_config(), i));
    const double ratios[] = {r.ratio_tail_moment, r.ratio_tail_mgf, r.ratio_moment_mgf};
    double worst = 1.0;
    for (double q : ratios) worst = std::max({worst, q, 1.0 / q});
    report.checks.push_back(at_most(label(laws[i]) + " worst ratio", worst, 4.0));
  }
  return report;
}

SuiteReport cover_suite(const RunConfig& config) {
  SuiteReport report{"cover", {}};
  const std::uint64_t seed = config.trial_config().seed;
  for (int d : config.scenario.d_grid) {
    const auto cover = build_half_cover(d, {seed, static_cast<std::uint64_t>(d)});
    const auto diag = certify_cover(cover, {seed, (1ULL << 32) + static_cast<std::uint64_t>(d)});
    const std::string prefix = "d=" + std::to_string(d) + " ";
    report.checks.push_back(at_most(prefix + "size", static_cast<double>(cover.points.size()), std::pow(5.0, d)));
    report.checks.push_back(at_most(prefix + "covering radius", diag.covering_radius, 0.5));

    RandomSource rng({seed, (2ULL << 32) + static_cast<std::uint64_t>(d)});
    Vector x(d);
    double worst = -INFINITY;
    for (int k = 0; k < 1000; ++k) {
      rng.fill_normal(x);
      const double r = norm_via_cover(x, cover), norm = x.norm();
      worst = std::max({worst, (norm - r) / norm, (r - 2.0 * norm) / norm});
    }
    report.checks.push_back(at_most(prefix + "norm sandwich excess", worst, 1e-12));
  }
  return report;
}

}  // namespace

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

double SuiteReport::min_slack() const {
  double out = INFINITY;
  for (const auto& c : checks) out = std::min(out, c.slack);
  return out;
}

SuiteReport run_suite(const std::string& suite, const RunConfig& config) {
  if (suite == "tail") return tail_suite(config);
  if (suite == "mgf") return mgf_suite(config);
  if (suite == "lieb") return lieb_suite(config);
  if (suite == "peeling") return peeling_suite(config);
  if (suite == "hoeffding") return hoeffding_suite(config);
  if (suite == "adaptive") return adaptive_suite(config);
  if (suite == "equivalence") return equivalence_suite(config);
  if (suite == "cover") return cover_suite(config);
  throw UsageError("unknown suite '" + suite + "'");
}

json to_json(const SuiteReport& report, const RunConfig& config) {
  const auto trials = config.trial_config();
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"slack", c.slack}, {"pass", c.pass}});
  }
  const double min_slack = report.min_slack();
  return {{"suite", report.suite},
          {"scenario", config.scenario.name},
          {"pass", report.pass()},
          {"min_slack", std::isfinite(min_slack) ? json(min_slack) : json(nullptr)},
          {"checks", checks},
          {"seed", trials.seed},
          {"trials", trials.trials},
          {"alpha", trials.alpha}};
}

}  // namespace nsg::cli
