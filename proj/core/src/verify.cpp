#include "nsg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nsg/bounds.hpp"
#include "nsg/dilation.hpp"
#include "nsg/errors.hpp"
#include "nsg/parallel.hpp"
#include "nsg/stats.hpp"

namespace nsg::verify {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Stream layout for martingale cells: cell k, path j -> stream_base + k * 2^32 + j.
SeedStream cell_stream(const TrialConfig& config, std::size_t cell, std::uint64_t path) {
  return {config.seed, config.stream_base + (static_cast<std::uint64_t>(cell) << 32) + path};
}

double log_mean_exp(std::span<const std::pair<double, double>> value_probability, double scale) {
  double top = kNegInf;
  for (const auto& [v, p] : value_probability) {
    if (p > 0.0) top = std::max(top, scale * v);
  }
  double acc = 0.0;
  for (const auto& [v, p] : value_probability) {
    if (p > 0.0) acc += p * std::exp(scale * v - top);
  }
  return top + std::log(acc);
}

std::vector<std::pair<double, double>> uniform_weights(std::span<const double> values) {
  std::vector<std::pair<double, double>> out;
  out.reserve(values.size());
  const double w = 1.0 / static_cast<double>(values.size());
  for (double v : values) out.emplace_back(v, w);
  return out;
}

// Smallest c making the target bound hold for one path.
struct PathNormalizer {
  Target target;
  double log_factor = 0.0;
  std::optional<double> theta;
  std::optional<bounds::DoublingGrid> grid;

  double operator()(const PathSummary& s) const {
    switch (target) {
      case Target::Hoeffding:
        if (s.sigma_sq_sum == 0.0) return 0.0;
        return s.sum_norm / std::sqrt(s.sigma_sq_sum * log_factor);
      case Target::MainLemma:
        if (s.sigma_sq_sum == 0.0) return 0.0;
        return (s.sum_norm - log_factor / *theta) / (*theta * s.sigma_sq_sum);
      case Target::Adaptive: {
        if (s.sigma_sq_sum >= grid->B) return kNegInf;
        const double level = std::max(s.sigma_sq_sum, grid->b);
        return 0.5 * (s.sum_norm / std::sqrt(level * grid->iota) - 1.0);
      }
      default:
        throw UsageError("target is not a martingale bound");
    }
  }
};

}  // namespace

TailEstimate estimate_tail(const TrialStatistic& statistic, double threshold, const TrialConfig& config) {
  const double t[] = {threshold};
  return estimate_tails(statistic, t, config).front();
}

std::vector<TailEstimate> estimate_tails(const TrialStatistic& statistic, std::span<const double> thresholds,
                                         const TrialConfig& config) {
  config.validate();
  std::vector<double> values(config.trials);
  parallel_for(config.trials, config.threads, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) values[i] = statistic({config.seed, config.stream_base + i});
  });
  return tail_profile(values, thresholds, config.alpha);
}

std::vector<TailEstimate> tail_profile(std::span<const double> samples, std::span<const double> thresholds,
                                       double alpha) {
  if (samples.empty()) throw UsageError("tail estimate needs at least one sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<TailEstimate> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    TailEstimate e;
    e.threshold = t;
    e.trials = sorted.size();
    e.hits = sorted.size() - static_cast<std::uint64_t>(below);
    e.upper = clopper_pearson_upper(e.hits, e.trials, alpha);
    out.push_back(e);
  }
  return out;
}

std::string to_string(Target target) {
  switch (target) {
    case Target::MainLemma: return "main_lemma";
    case Target::Hoeffding: return "hoeffding";
    case Target::Adaptive: return "adaptive";
    case Target::MgfLemma: return "mgf_lemma";
    case Target::IsotropicExample: return "isotropic_example";
  }
  return "unknown";
}

Target target_from_string(const std::string& name) {
  for (Target t : {Target::MainLemma, Target::Hoeffding, Target::Adaptive, Target::MgfLemma,
                   Target::IsotropicExample}) {
    if (to_string(t) == name) return t;
  }
  throw ValidationError("unknown target '" + name + "'");
}

std::string to_string(Method method) {
  return method == Method::ExactEnumeration ? "exact_enumeration" : "monte_carlo_quantile";
}

void Scenario::validate(Target target) const {
  nsg::validate(rule);
  if (d_grid.empty() || n_grid.empty()) throw ValidationError("scenario grids must be nonempty");
  for (int d : d_grid) {
    if (d < 1) throw ValidationError("d must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (target == Target::MainLemma && !(theta && *theta > 0.0))
    throw ValidationError("the main_lemma target needs a positive theta");
  if (target == Target::Adaptive) (void)bounds::iota(d_grid.front(), delta, B, b);
  if (target == Target::MgfLemma || target == Target::IsotropicExample)
    throw UsageError("scenario estimation covers the martingale bounds only");
}

DistributionSpec unit_base(Family family, int d) {
  if (family == Family::FiniteSupport) return finite_support_rademacher(d, 1.0);
  return {family, d, 1.0, {}};
}

ConstantEstimate estimate_constant(Target target, const Scenario& scenario, const TrialConfig& config,
                                   Method method) {
  scenario.validate(target);
  config.validate();
  if (method == Method::ExactEnumeration && scenario.family != Family::FiniteSupport)
    throw ValidationError("exact enumeration needs a finite_support family");

  ConstantEstimate out;
  out.target = target;
  out.method = method;
  out.seed = config.seed;
  out.alpha = config.alpha;
  out.scenario = scenario.name;
  out.trials = method == Method::ExactEnumeration ? 0 : config.trials;
  out.unstable = method == Method::MonteCarloQuantile &&
                 scenario.delta * static_cast<double>(config.trials) < 100.0;
  const double q = 1.0 - scenario.delta;

  std::size_t cell_index = 0;
  for (int d : scenario.d_grid) {
    for (std::size_t n : scenario.n_grid) {
      const DistributionSpec base = unit_base(scenario.family, d);
      PathNormalizer normalize{target, bounds::log_factor(d, scenario.delta), scenario.theta, std::nullopt};
      if (target == Target::Adaptive)
        normalize.grid = bounds::build_doubling_grid(scenario.b, scenario.B, d, scenario.delta);

      CellEstimate cell{d, n, scenario.delta, scenario.theta, 0.0, 0.0, 0.0, 0};
      if (method == Method::ExactEnumeration) {
        const auto paths = enumerate_paths(scenario.rule, base, n);
        std::vector<std::pair<double, double>> ratio, norm;
        ratio.reserve(paths.size());
        norm.reserve(paths.size());
        for (const auto& p : paths) {
          const PathSummary s = path_statistic(p.path);
          ratio.emplace_back(normalize(s), p.probability);
          norm.emplace_back(s.sum_norm, p.probability);
        }
        cell.c_hat = std::max(0.0, weighted_quantile(ratio, q));
        cell.norm_quantile = weighted_quantile(norm, q);
        for (const auto& [r, p] : ratio) {
          if (r > cell.c_hat) cell.violations += p;
        }
        cell.trials = paths.size();
      } else {
        std::vector<double> ratio(config.trials), norm(config.trials);
        parallel_for(config.trials, config.threads, [&](std::uint64_t begin, std::uint64_t end) {
          for (std::uint64_t j = begin; j < end; ++j) {
            const PathSummary s = simulate_summary(scenario.rule, base, n, cell_stream(config, cell_index, j));
            ratio[j] = normalize(s);
            norm[j] = s.sum_norm;
          }
        });
        cell.c_hat = std::max(0.0, empirical_quantile(ratio, q));
        cell.norm_quantile = empirical_quantile(norm, q);
        cell.violations = static_cast<double>(
            std::count_if(ratio.begin(), ratio.end(), [&cell](double r) { return r > cell.c_hat; }));
        cell.trials = config.trials;
      }
      out.c_hat = std::max(out.c_hat, cell.c_hat);
      out.cells.push_back(cell);
      ++cell_index;
    }
  }
  return out;
}

TailEstimate adaptive_violations(const Scenario& scenario, int d, std::size_t n, double c, const TrialConfig& config) {
  scenario.validate(Target::Adaptive);
  const auto grid = bounds::build_doubling_grid(scenario.b, scenario.B, d, scenario.delta);
  const DistributionSpec base = unit_base(scenario.family, d);
  auto statistic = [&](SeedStream stream) {
    const PathSummary s = simulate_summary(scenario.rule, base, n, stream);
    const auto bound = bounds::adaptive_bound(s.sigma_sq_sum, grid, c);
    return (!bound.exceeded() && s.sum_norm > bound.value) ? 1.0 : 0.0;
  };
  return estimate_tail(statistic, 0.5, config);
}

std::vector<std::pair<int, double>> moment_profile(std::span<const double> norms, int p_max) {
  if (norms.empty()) throw UsageError("moment profile needs at least one sample");
  if (p_max < 1 || p_max > 20) throw ValidationError("p_max must lie in [1, 20]");
  const double top = *std::max_element(norms.begin(), norms.end());
  std::vector<std::pair<int, double>> out;
  for (int p = 1; p <= p_max; ++p) {
    if (top == 0.0) {
      out.emplace_back(p, 0.0);
      continue;
    }
    double acc = 0.0;
    for (double v : norms) acc += std::pow(std::abs(v) / top, p);
    const double moment = top * std::pow(acc / static_cast<double>(norms.size()), 1.0 / p);
    out.emplace_back(p, moment / std::sqrt(static_cast<double>(p)));
  }
  return out;
}

SuperExpSigma super_exp_sigma(std::span<const double> norms) {
  if (norms.empty()) throw UsageError("super-exponential sigma needs at least one sample");
  const double top = *std::max_element(norms.begin(), norms.end());
  if (top == 0.0) return {0.0, true};
  auto mean_exp = [&](double sigma) {
    double acc = 0.0;
    for (double v : norms) acc += std::exp(v * v / (sigma * sigma));
    return acc / static_cast<double>(norms.size());
  };
  const double e = std::numbers::e;
  double lo = top / 10.0;
  double hi = top * 10.0;
  if (mean_exp(lo) <= e) return {lo, false};
  // mean_exp is decreasing in sigma: keep mean_exp(lo) > e >= mean_exp(hi).
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mean_exp(mid) <= e ? hi : lo) = mid;
  }
  return {hi, false};
}

double tail_sigma(std::span<const double> norms, std::span<const double> t_grid, double alpha) {
  if (t_grid.empty()) throw DomainError("tail sigma needs a nonempty t grid");
  for (double t : t_grid) {
    if (!(t > 0.0)) throw ValidationError("t grid entries must be positive");
  }
  double sigma = 0.0;
  bool informative = false;
  for (const auto& e : tail_profile(norms, t_grid, alpha)) {
    if (e.upper >= 2.0) continue;
    informative = true;
    sigma = std::max(sigma, e.threshold / std::sqrt(2.0 * std::log(2.0 / e.upper)));
  }
  if (!informative) throw DomainError("every tail grid point is vacuous");
  return sigma;
}

bool EquivalenceReport::within(double window) const {
  for (double r : {ratio_tail_moment, ratio_tail_mgf, ratio_moment_mgf}) {
    if (!(r >= 1.0 / window && r <= window)) return false;
  }
  return true;
}

EquivalenceReport equivalence_report(std::span<const double> norms, double alpha, int p_max, int t_points) {
  if (norms.empty()) throw UsageError("equivalence report needs samples");
  if (t_points < 1) throw ValidationError("t grid needs at least one point");
  const double top = *std::max_element(norms.begin(), norms.end());
  if (top == 0.0) throw DomainError("equivalence ratios are undefined for a point mass at the origin");
  EquivalenceReport r;
  r.p_max = p_max;
  for (int k = 1; k <= t_points; ++k) r.t_grid.push_back(top * k / t_points);
  r.sigma_tail = tail_sigma(norms, r.t_grid, alpha);
  for (const auto& [p, v] : moment_profile(norms, p_max)) r.sigma_moment = std::max(r.sigma_moment, v);
  r.sigma_mgf = super_exp_sigma(norms).sigma;
  r.ratio_tail_moment = r.sigma_tail / r.sigma_moment;
  r.ratio_tail_mgf = r.sigma_tail / r.sigma_mgf;
  r.ratio_moment_mgf = r.sigma_moment / r.sigma_mgf;
  return r;
}

EquivalenceReport equivalence_report(const DistributionSpec& spec, const TrialConfig& config, int p_max,
                                     int t_points) {
  const auto norms = sample_norms(spec, config);
  return equivalence_report(norms, config.alpha, p_max, t_points);
}

double projection_check(const DistributionSpec& spec, const Vector& v, std::span<const double> theta_grid,
                        const TrialConfig& config) {
  spec.validate();
  if (v.size() != spec.dimension) throw ValidationError("direction dimension does not match d");
  if (std::abs(v.norm() - 1.0) > 1e-12) throw ValidationError("projection direction must be a unit vector");
  if (theta_grid.empty()) throw UsageError("theta grid is empty");

  std::vector<std::pair<double, double>> law;
  if (spec.family == Family::FiniteSupport) {
    for (const auto& atom : spec.support) law.emplace_back(v.dot(atom.point), atom.probability);
  } else {
    law = uniform_weights(sample_projections(spec, v, config));
  }
  const double sigma = certificate(spec).parameter();
  double c_hat = 0.0;
  for (double theta : theta_grid) {
    if (theta == 0.0) continue;
    const double log_mgf = std::max(0.0, log_mean_exp(law, theta));
    if (log_mgf == 0.0) continue;
    if (sigma == 0.0) throw DomainError("projection constant is undefined for sigma = 0");
    c_hat = std::max(c_hat, std::sqrt(2.0 * log_mgf) / (std::abs(theta) * sigma));
  }
  return c_hat;
}

SubExponentialEstimate normsq_subexp(std::span<const std::pair<double, double>> value_probability, double sigma,
                                     std::span<const double> lambda_grid) {
  if (value_probability.empty()) throw UsageError("sub-exponential check needs a nonempty law");
  double mean = 0.0;
  for (const auto& [z, p] : value_probability) mean += p * z;
  std::vector<std::pair<double, double>> centered;
  for (const auto& [z, p] : value_probability) centered.emplace_back(z - mean, p);

  // Required c at each lambda: sqrt(ln M(lambda)) / (|lambda| sigma^2).
  std::vector<std::pair<double, double>> need;
  for (double lambda : lambda_grid) {
    if (lambda == 0.0) continue;
    const double log_mgf = std::max(0.0, log_mean_exp(centered, lambda));
    double required = 0.0;
    if (log_mgf > 0.0) {
      if (sigma == 0.0) throw DomainError("sub-exponential constant is undefined for sigma = 0");
      required = std::sqrt(log_mgf) / (std::abs(lambda) * sigma * sigma);
    }
    need.emplace_back(lambda, required);
  }
  auto admissible = [&](double lambda, double c) { return c == 0.0 || std::abs(lambda) * c * sigma * sigma <= 1.0; };
  auto holds = [&](double c) {
    for (const auto& [lambda, required] : need) {
      if (admissible(lambda, c) && required > c) return false;
    }
    return true;
  };

  SubExponentialEstimate out;
  double hi = 0.0;
  for (const auto& [lambda, required] : need) hi = std::max(hi, required);
  double lo = 0.0;
  if (hi > 0.0) {
    // holds() is monotone in c: larger c admits fewer lambdas and demands less.
    for (out.rounds = 0; out.rounds < 50 && hi - lo > 1e-12 * hi; ++out.rounds) {
      const double mid = 0.5 * (lo + hi);
      (holds(mid) ? hi : lo) = mid;
    }
  }
  out.c_hat = hi;
  out.converged = hi == 0.0 || hi - lo <= 1e-12 * hi;
  for (const auto& [lambda, required] : need) {
    if (admissible(lambda, out.c_hat)) out.admissible.push_back(lambda);
  }
  return out;
}

SubExponentialEstimate normsq_subexp_check(const DistributionSpec& spec, std::span<const double> lambda_grid,
                                           const TrialConfig& config) {
  const double sigma = certificate(spec).parameter();
  if (sigma > 0.0) {
    for (double lambda : lambda_grid) {
      if (!(std::abs(lambda) < 0.5 / (sigma * sigma)))
        throw ValidationError("lambda grid must lie in (-1/(2 sigma^2), 1/(2 sigma^2))");
    }
  }
  std::vector<std::pair<double, double>> law;
  if (spec.family == Family::FiniteSupport) {
    for (const auto& atom : spec.support) law.emplace_back(atom.point.squaredNorm(), atom.probability);
  } else {
    auto norms = sample_norms(spec, config);
    for (double& v : norms) v *= v;
    law = uniform_weights(norms);
  }
  return normsq_subexp(law, sigma, lambda_grid);
}

ConstantEstimate estimate_isotropic_constant(int d, double sigma, std::span<const double> t_grid,
                                             const TrialConfig& config) {
  const auto norms = sample_norms(isotropic_gaussian(d, sigma), config);
  ConstantEstimate out;
  out.target = Target::IsotropicExample;
  out.method = Method::MonteCarloQuantile;
  out.c_hat = tail_sigma(norms, t_grid, config.alpha) / sigma;
  out.trials = config.trials;
  out.seed = config.seed;
  out.alpha = config.alpha;
  out.scenario = "isotropic_gaussian";
  out.cells.push_back({d, 1, 0.0, std::nullopt, out.c_hat, 0.0, 0.0, config.trials});
  return out;
}

ConstantEstimate estimate_mgf_constant(const DistributionSpec& spec, std::span<const double> theta_grid,
                                       const TrialConfig& config) {
  const auto mgf = mgf_constant(spec, theta_grid, config);
  ConstantEstimate out;
  out.target = Target::MgfLemma;
  out.method = spec.family == Family::FiniteSupport ? Method::ExactEnumeration : Method::MonteCarloQuantile;
  out.c_hat = mgf.c_hat;
  out.trials = spec.family == Family::FiniteSupport ? 0 : config.trials;
  out.seed = config.seed;
  out.alpha = config.alpha;
  out.scenario = std::string(to_string(spec.family));
  out.cells.push_back({spec.dimension, 1, 0.0, std::nullopt, mgf.c_hat, 0.0, 0.0, out.trials});
  return out;
}

}  // namespace nsg::verify
