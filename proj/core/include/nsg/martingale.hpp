#pragma once

#include <cstddef>
#include <iosfwd>
#include <variant>
#include <vector>

#include "nsg/distributions.hpp"
#include "nsg/linalg.hpp"

namespace nsg {

struct ConstantRule {
  double sigma = 1.0;
};

/// sigma_i = base * 2^k where k counts thresholds reached by the running
/// maximum of |S_j|, j < i. Non-decreasing along every path.
struct DoubleOnThreshold {
  double base = 1.0;
  std::vector<double> thresholds;
};

/// sigma_i = clamp(gain * |S_{i-1}|, floor, cap).
struct HistoryNormScaled {
  double floor = 1.0;
  double cap = 1.0;
  double gain = 0.0;
};

/// How sigma_i is chosen from the history X_1..X_{i-1}.
using AdaptiveRule = std::variant<ConstantRule, DoubleOnThreshold, HistoryNormScaled>;

void validate(const AdaptiveRule& rule);

/// Everything a rule may look at before step i.
struct RuleState {
  double sum_norm = 0.0;
  double max_sum_norm = 0.0;

  void advance(const Vector& partial_sum);
};

/// sigma_i for the given history; ValidationError if it is not positive.
double next_sigma(const AdaptiveRule& rule, const RuleState& state);

struct PathStep {
  double sigma = 0.0;
  Vector x;
  Vector partial_sum;
};

/// A realized martingale difference sequence. Step i draws X_i as sigma_i
/// times a draw from the unit-scale base law, so X_i given the past is
/// zero-mean and inherits the base certificate scaled by sigma_i.
struct MartingalePath {
  int dimension = 1;
  std::vector<PathStep> steps;
};

struct PathSummary {
  double sigma_sq_sum = 0.0;
  double sum_norm = 0.0;
};

/// Throws ValidationError unless `base` is a valid zero-mean law with sigma == 1.
void require_unit_base(const DistributionSpec& base);

MartingalePath simulate_path(const AdaptiveRule& rule, const DistributionSpec& base, std::size_t n,
                             SeedStream stream);

/// Same draws as simulate_path, without storing the steps.
PathSummary simulate_summary(const AdaptiveRule& rule, const DistributionSpec& base, std::size_t n,
                             SeedStream stream);

/// (sum sigma_i^2, |sum X_i|).
PathSummary path_statistic(const MartingalePath& path);

/// Replays the rule over the stored prefixes and checks that every sigma_i and
/// partial sum is reproduced bit for bit.
bool audit_path(const MartingalePath& path, const AdaptiveRule& rule);

struct EnumeratedPath {
  MartingalePath path;
  double probability = 0.0;
};

/// Every path of a finite-support base law with its probability. Throws
/// ResourceError when more than 10^6 paths would be produced.
std::vector<EnumeratedPath> enumerate_paths(const AdaptiveRule& rule, const DistributionSpec& base, std::size_t n);

/// CSV with columns step,sigma,x_1..x_d,sumnorm.
void write_path_csv(std::ostream& out, const MartingalePath& path);

}  // namespace nsg
