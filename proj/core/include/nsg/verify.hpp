#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nsg/distributions.hpp"
#include "nsg/martingale.hpp"
#include "nsg/trial.hpp"

namespace nsg::verify {

/// Empirical Pr(statistic >= threshold) with an exact binomial upper bound.
struct TailEstimate {
  double threshold = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double upper = 1.0;

  double point() const { return trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials); }
};

/// One statistic per trial; trial i gets stream (seed, stream_base + i).
using TrialStatistic = std::function<double(SeedStream)>;

TailEstimate estimate_tail(const TrialStatistic& statistic, double threshold, const TrialConfig& config);
std::vector<TailEstimate> estimate_tails(const TrialStatistic& statistic, std::span<const double> thresholds,
                                         const TrialConfig& config);
/// Tail estimates from precomputed samples.
std::vector<TailEstimate> tail_profile(std::span<const double> samples, std::span<const double> thresholds,
                                       double alpha);

enum class Target { MainLemma, Hoeffding, Adaptive, MgfLemma, IsotropicExample };
enum class Method { ExactEnumeration, MonteCarloQuantile };

std::string to_string(Target target);
Target target_from_string(const std::string& name);
std::string to_string(Method method);

/// Martingale experiment: a rule over a unit-scale base family, swept over
/// (d, n). A FiniteSupport family means the axis Rademacher atoms +-e_k.
struct Scenario {
  std::string name = "scenario";
  AdaptiveRule rule = ConstantRule{1.0};
  Family family = Family::BoundedSphere;
  std::vector<int> d_grid{2};
  std::vector<std::size_t> n_grid{64};
  double delta = 0.01;
  std::optional<double> theta;
  double b = 1.0;
  double B = 1024.0;

  void validate(Target target) const;
};

DistributionSpec unit_base(Family family, int d);

struct CellEstimate {
  int d = 1;
  std::size_t n = 0;
  double delta = 0.0;
  std::optional<double> theta;
  double c_hat = 0.0;
  /// (1 - delta)-quantile of |sum X_i|.
  double norm_quantile = 0.0;
  /// Paths whose bound with c = c_hat is violated (probability mass for exact cells).
  double violations = 0.0;
  std::uint64_t trials = 0;
};

struct ConstantEstimate {
  Target target = Target::Hoeffding;
  Method method = Method::MonteCarloQuantile;
  double c_hat = 0.0;
  std::vector<CellEstimate> cells;
  /// delta * trials < 100: the quantile is statistically unreliable.
  bool unstable = false;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  std::string scenario;
};

/// Per cell, c_hat is the (1 - delta)-quantile of the smallest c making the
/// target bound hold on each path; the estimate is the max over cells.
/// MainLemma: (|S| - log(2d/delta)/theta) / (theta sum sigma^2).
/// Hoeffding: |S| / sqrt(sum sigma^2 log(2d/delta)).
/// Adaptive:  (|S| / sqrt(max(sum sigma^2, b) iota) - 1) / 2, never violated once sum sigma^2 >= B.
/// Negative quantiles are reported as 0.
ConstantEstimate estimate_constant(Target target, const Scenario& scenario, const TrialConfig& config,
                                   Method method = Method::MonteCarloQuantile);

/// Fraction of paths with sum sigma^2 < B and |S| above the adaptive bound at c.
TailEstimate adaptive_violations(const Scenario& scenario, int d, std::size_t n, double c, const TrialConfig& config);

/// (p, (mean |X|^p)^{1/p} / sqrt p) for p = 1..p_max (p_max <= 20).
std::vector<std::pair<int, double>> moment_profile(std::span<const double> norms, int p_max);

struct SuperExpSigma {
  double sigma = 0.0;
  bool degenerate = false;
};

/// Smallest sigma with mean exp(|X|^2 / sigma^2) <= e, by bisection.
SuperExpSigma super_exp_sigma(std::span<const double> norms);

/// Smallest sigma such that the Clopper-Pearson upper tail bound at each t
/// is at most 2 exp(-t^2 / (2 sigma^2)).
double tail_sigma(std::span<const double> norms, std::span<const double> t_grid, double alpha);

struct EquivalenceReport {
  double sigma_tail = 0.0;
  double sigma_moment = 0.0;
  double sigma_mgf = 0.0;
  double ratio_tail_moment = 0.0;
  double ratio_tail_mgf = 0.0;
  double ratio_moment_mgf = 0.0;
  std::vector<double> t_grid;
  int p_max = 0;

  /// All pairwise ratios inside [1/window, window].
  bool within(double window = 4.0) const;
};

EquivalenceReport equivalence_report(std::span<const double> norms, double alpha, int p_max = 8, int t_points = 20);
EquivalenceReport equivalence_report(const DistributionSpec& spec, const TrialConfig& config, int p_max = 8,
                                     int t_points = 20);

/// max over theta of sqrt(2 ln E exp(theta <v, X>)) / (|theta| sigma), sigma
/// the certified nSG parameter. Exact for FiniteSupport laws.
double projection_check(const DistributionSpec& spec, const Vector& v, std::span<const double> theta_grid,
                        const TrialConfig& config = {});

struct SubExponentialEstimate {
  double c_hat = 0.0;
  /// Grid points with |lambda| <= 1 / (c_hat sigma^2).
  std::vector<double> admissible;
  bool converged = false;
  int rounds = 0;
};

/// Smallest c with E exp(lambda (Z - EZ)) <= exp(lambda^2 (c sigma^2)^2) for
/// every grid lambda with |lambda| <= 1 / (c sigma^2), over a finite law of Z.
SubExponentialEstimate normsq_subexp(std::span<const std::pair<double, double>> value_probability, double sigma,
                                     std::span<const double> lambda_grid);

/// Z = |X|^2 with sigma the certified nSG parameter; the grid must lie in
/// (-1 / (2 sigma^2), 1 / (2 sigma^2)).
SubExponentialEstimate normsq_subexp_check(const DistributionSpec& spec, std::span<const double> lambda_grid,
                                           const TrialConfig& config = {});

/// Estimated multiplier of an isotropic Gaussian: tail_sigma / sigma.
ConstantEstimate estimate_isotropic_constant(int d, double sigma, std::span<const double> t_grid,
                                             const TrialConfig& config);

/// mgf_constant wrapped as a ConstantEstimate.
ConstantEstimate estimate_mgf_constant(const DistributionSpec& spec, std::span<const double> theta_grid,
                                       const TrialConfig& config);

}  // namespace nsg::verify
