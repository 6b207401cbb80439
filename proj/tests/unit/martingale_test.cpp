#include "nsg/martingale.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "nsg/errors.hpp"
#include "oracles.hpp"

namespace nsg {
namespace {

TEST(Martingale, ConstantRademacherPath) {
  const auto path = simulate_path(ConstantRule{1.0}, finite_support_rademacher(1, 1.0), 4, {7, 0});
  ASSERT_EQ(path.steps.size(), 4u);
  for (const auto& step : path.steps) {
    EXPECT_EQ(std::abs(step.x[0]), 1.0);
    EXPECT_EQ(step.sigma, 1.0);
  }
  const double s = path.steps.back().partial_sum[0];
  EXPECT_LE(std::abs(s), 4.0);
  EXPECT_EQ(std::fmod(s, 2.0), 0.0);
}

TEST(Martingale, DoublingRuleReplaysExactly) {
  const AdaptiveRule rule = DoubleOnThreshold{1.0, {2.0, 4.0, 8.0}};
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto path = simulate_path(rule, bounded_sphere(3, 1.0), 64, {1, s});
    EXPECT_TRUE(audit_path(path, rule));
    double running_max = 0.0;
    for (const auto& step : path.steps) {
      int crossed = 0;
      for (double t : {2.0, 4.0, 8.0}) crossed += running_max >= t;
      EXPECT_EQ(step.sigma, std::ldexp(1.0, crossed));
      running_max = std::max(running_max, step.partial_sum.norm());
    }
  }
}

TEST(Martingale, AuditDetectsTampering) {
  const AdaptiveRule rule = HistoryNormScaled{0.5, 4.0, 0.3};
  auto path = simulate_path(rule, bounded_sphere(2, 1.0), 20, {3, 3});
  ASSERT_TRUE(audit_path(path, rule));
  path.steps[5].sigma *= 1.0000001;
  EXPECT_FALSE(audit_path(path, rule));
}

TEST(Martingale, HistoryRuleRespectsCap) {
  const AdaptiveRule rule = HistoryNormScaled{0.25, 3.0, 0.5};
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto path = simulate_path(rule, isotropic_gaussian(2, 1.0), 30, {5, s});
    for (const auto& step : path.steps) {
      EXPECT_LE(step.sigma, 3.0);
      EXPECT_GE(step.sigma, 0.25);
    }
  }
}

TEST(Martingale, PathStatistic) {
  EXPECT_EQ(path_statistic(MartingalePath{2, {}}).sigma_sq_sum, 0.0);
  EXPECT_EQ(path_statistic(MartingalePath{2, {}}).sum_norm, 0.0);
  const auto path = simulate_path(ConstantRule{2.0}, bounded_sphere(3, 1.0), 3, {0, 0});
  const auto stat = path_statistic(path);
  EXPECT_EQ(stat.sigma_sq_sum, 12.0);
  double triangle = 0.0;
  for (const auto& step : path.steps) triangle += step.x.norm();
  EXPECT_LE(stat.sum_norm, triangle + 1e-12);
}

TEST(Martingale, SummaryMatchesStoredPath) {
  const AdaptiveRule rule = DoubleOnThreshold{0.5, {1.0, 3.0}};
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto stored = path_statistic(simulate_path(rule, bounded_ball(4, 1.0), 40, {9, s}));
    const auto streamed = simulate_summary(rule, bounded_ball(4, 1.0), 40, {9, s});
    EXPECT_EQ(stored.sigma_sq_sum, streamed.sigma_sq_sum);
    EXPECT_EQ(stored.sum_norm, streamed.sum_norm);
  }
}

TEST(Martingale, TriangleInequalityOverManyPaths) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto path = simulate_path(HistoryNormScaled{0.5, 2.0, 1.0}, axis_subgaussian(3, 1.0), 25, {2, s});
    double triangle = 0.0;
    for (const auto& step : path.steps) triangle += step.x.norm();
    EXPECT_LE(path_statistic(path).sum_norm, triangle + 1e-12);
  }
}

TEST(Martingale, RejectsNonPositiveSigma) {
  EXPECT_THROW(simulate_path(ConstantRule{0.0}, bounded_sphere(2, 1.0), 3, {0, 0}), ValidationError);
  EXPECT_THROW(simulate_path(ConstantRule{-1.0}, bounded_sphere(2, 1.0), 3, {0, 0}), ValidationError);
  EXPECT_THROW(simulate_path(HistoryNormScaled{0.0, 1.0, 1.0}, bounded_sphere(2, 1.0), 3, {0, 0}), ValidationError);
  EXPECT_THROW(simulate_path(ConstantRule{1.0}, bounded_sphere(2, 2.0), 3, {0, 0}), ValidationError);
}

TEST(Martingale, EnumerateRademacherFourSteps) {
  const auto paths = enumerate_paths(ConstantRule{1.0}, finite_support_rademacher(1, 1.0), 4);
  ASSERT_EQ(paths.size(), 16u);
  double total = 0.0, tail = 0.0;
  for (const auto& p : paths) {
    total += p.probability;
    if (path_statistic(p.path).sum_norm >= 3.0) tail += p.probability;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  // Oracle: sign patterns with |S| >= 3.
  double expected = 0.0;
  for (const auto& [v, p] : oracle::rademacher_abs_sum_law(4)) expected += v >= 3.0 ? p : 0.0;
  EXPECT_EQ(tail, expected);
  EXPECT_EQ(tail, 0.125);
}

TEST(Martingale, EnumerateEmptyPath) {
  const auto paths = enumerate_paths(ConstantRule{1.0}, finite_support_rademacher(2, 1.0), 0);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].probability, 1.0);
  EXPECT_TRUE(paths[0].path.steps.empty());
}

TEST(Martingale, EnumerateAdaptiveDoubling) {
  // Threshold 1: after any first step |S_1| = 1 so sigma_2 = 2; after step 2
  // |S_2| is 1 or 3 and the running max is already >= 1, so sigma_3 = 2, and
  // with threshold 3 crossed sigma_3 = 4.
  const AdaptiveRule rule = DoubleOnThreshold{1.0, {1.0, 3.0}};
  const auto paths = enumerate_paths(rule, finite_support_rademacher(1, 1.0), 3);
  ASSERT_EQ(paths.size(), 8u);
  double total = 0.0;
  for (const auto& p : paths) {
    total += p.probability;
    EXPECT_EQ(p.probability, 0.125);
    ASSERT_EQ(p.path.steps.size(), 3u);
    EXPECT_EQ(p.path.steps[0].sigma, 1.0);
    EXPECT_EQ(p.path.steps[1].sigma, 2.0);
    const double s2 = std::abs(p.path.steps[1].partial_sum[0]);
    EXPECT_EQ(p.path.steps[2].sigma, s2 >= 3.0 ? 4.0 : 2.0);
    EXPECT_TRUE(audit_path(p.path, rule));
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Martingale, EnumerationGuard) {
  EXPECT_THROW(enumerate_paths(ConstantRule{1.0}, finite_support_rademacher(1, 1.0), 21), ResourceError);
  EXPECT_THROW(enumerate_paths(ConstantRule{1.0}, bounded_sphere(1, 1.0), 2), ValidationError);
}

TEST(Martingale, ConditionalMeanIsZeroForFiniteBases) {
  // Conditional on any prefix, the next-step mean is sigma_i times the base mean.
  const auto paths = enumerate_paths(HistoryNormScaled{0.5, 4.0, 1.0}, finite_support_rademacher(2, 1.0), 3);
  std::map<std::vector<double>, std::pair<Vector, double>> by_prefix;
  for (const auto& p : paths) {
    std::vector<double> key(p.path.steps[1].partial_sum.data(), p.path.steps[1].partial_sum.data() + 2);
    key.push_back(p.path.steps[0].x[0]);
    key.push_back(p.path.steps[0].x[1]);
    auto& [sum, mass] = by_prefix.try_emplace(key, Vector::Zero(2), 0.0).first->second;
    sum += p.probability * p.path.steps[2].x;
    mass += p.probability;
  }
  for (const auto& [key, entry] : by_prefix) EXPECT_LE(entry.first.norm() / entry.second, 1e-15);
}

TEST(Martingale, CsvOutput) {
  std::ostringstream empty;
  write_path_csv(empty, simulate_path(ConstantRule{1.0}, bounded_sphere(2, 1.0), 0, {0, 0}));
  EXPECT_EQ(empty.str(), "step,sigma,x_1,x_2,sumnorm\n");

  std::ostringstream a, b;
  const auto path = simulate_path(ConstantRule{1.0}, finite_support_rademacher(1, 1.0), 4, {7, 0});
  write_path_csv(a, path);
  write_path_csv(b, simulate_path(ConstantRule{1.0}, finite_support_rademacher(1, 1.0), 4, {7, 0}));
  EXPECT_EQ(a.str(), b.str());
  std::istringstream lines(a.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 5);
}

}  // namespace
}  // namespace nsg
