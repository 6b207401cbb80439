#include "nsg/dilation.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "nsg/errors.hpp"
#include "oracles.hpp"

namespace nsg {
namespace {

Vector random_vector(std::mt19937_64& rng, int d, double max_norm) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  Vector x(d);
  for (int i = 0; i < d; ++i) x[i] = normal(rng);
  return x * (max_norm * unit(rng) / x.norm());
}

Vector sorted_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

DistributionSpec two_atoms(const Vector& a) {
  return {Family::FiniteSupport, static_cast<int>(a.size()), 1.0, {{a, 0.5}, {-a, 0.5}}};
}

TEST(Dilation, SpectrumOfThreeFour) {
  Vector x(2);
  x << 3, 4;
  const Vector ev = sorted_eigenvalues(dilate(x).dense());
  EXPECT_NEAR(ev[0], -5.0, 1e-12);
  EXPECT_NEAR(ev[1], 0.0, 1e-12);
  EXPECT_NEAR(ev[2], 5.0, 1e-12);
}

TEST(Dilation, ZeroVector) {
  EXPECT_EQ(dilate(Vector::Zero(4)).dense(), Matrix::Zero(5, 5));
  EXPECT_EQ(exp_dilation(Vector::Zero(4), 3.0), Matrix::Identity(5, 5));
}

TEST(Dilation, StructuralIdentities) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 8;
    const Vector x = random_vector(rng, d, 5.0);
    const auto y = dilate(x);
    const Matrix m = y.dense();
    EXPECT_EQ(m, m.transpose());
    EXPECT_EQ(m.trace(), 0.0);
    EXPECT_LE((m * m * m - x.squaredNorm() * m).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, x.squaredNorm()));
    EXPECT_LE((m * m - y.squared()).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, x.squaredNorm()));
    const Vector ev = sorted_eigenvalues(m);
    EXPECT_NEAR(ev[0], -x.norm(), 1e-12 * std::max(1.0, x.norm()));
    EXPECT_NEAR(ev[d], x.norm(), 1e-12 * std::max(1.0, x.norm()));
    for (int k = 1; k < d; ++k) EXPECT_NEAR(ev[k], 0.0, 1e-12 * std::max(1.0, x.norm()));
  }
}

TEST(Dilation, DeterminantOfExponentialIsOne) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = random_vector(rng, 1 + trial % 6, 3.0);
    const Matrix e = exp_dilation(x, 1.5);
    EXPECT_NEAR(e.determinant(), 1.0, 1e-8);
  }
}

TEST(Dilation, ExponentialOfUnitAxis) {
  const Vector ev = sorted_eigenvalues(exp_dilation(Vector::Constant(1, 1.0), 1.0));
  EXPECT_NEAR(ev[0], std::exp(-1.0), 1e-15);
  EXPECT_NEAR(ev[1], std::exp(1.0), 1e-15);
}

TEST(Dilation, ExponentialMatchesSeriesOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> theta_dist(-2.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 1 + trial % 16;
    const Vector x = random_vector(rng, d, 4.0);
    const double theta = theta_dist(rng);
    const Matrix expected = oracle::series_exp(theta * dilate(x).dense());
    EXPECT_LE((exp_dilation(x, theta) - expected).cwiseAbs().maxCoeff(), 1e-10);
    // Top eigenvalue is e^{theta r} for theta >= 0.
    if (theta >= 0) EXPECT_NEAR(lambda_max(exp_dilation(x, theta)), std::exp(theta * x.norm()), 1e-10);
  }
}

TEST(Dilation, SeriesBranchNearZero) {
  for (double r : {1e-12, 1e-9, 2e-8}) {
    Vector x(3);
    x << r, 0, 0;
    const Matrix expected = oracle::series_exp(0.7 * dilate(x).dense());
    EXPECT_LE((exp_dilation(x, 0.7) - expected).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Dilation, EmpiricalMgfOfSignedAxisAtoms) {
  Vector e1 = Vector::Zero(2);
  e1[0] = 1.0;
  const auto spec = two_atoms(e1);
  for (double theta : {-2.0, -0.5, 0.3, 1.0, 2.0}) {
    const Matrix m = empirical_mgf(spec, theta);
    // Odd powers cancel: E e^{theta Y} = I + (cosh theta - 1) Y^2.
    Matrix expected = Matrix::Identity(3, 3);
    expected(0, 0) = expected(1, 1) = std::cosh(theta);
    EXPECT_LE((m - expected).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(lambda_max(m), std::cosh(theta), 1e-14);
  }
  EXPECT_EQ(empirical_mgf(spec, 0.0), Matrix::Identity(3, 3));

  DistributionSpec origin{Family::FiniteSupport, 2, 1.0, {{Vector::Zero(2), 1.0}}};
  EXPECT_EQ(empirical_mgf(origin, 2.5), Matrix::Identity(3, 3));
}

TEST(Dilation, EmpiricalMgfOfSymmetricLawIsEven) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 5;
    DistributionSpec spec{Family::FiniteSupport, d, 1.0, {}};
    for (int k = 0; k < 3; ++k) {
      const Vector a = random_vector(rng, d, 2.0);
      spec.support.push_back({a, 1.0 / 6.0});
      spec.support.push_back({-a, 1.0 / 6.0});
    }
    EXPECT_LE((empirical_mgf(spec, 1.3) - empirical_mgf(spec, -1.3)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Dilation, EmpiricalMgfFromSamples) {
  std::vector<Vector> samples{Vector::Constant(2, 1.0), Vector::Constant(2, -1.0)};
  const Matrix from_samples = empirical_mgf(std::span<const Vector>(samples), 0.8);
  const Matrix expected = 0.5 * (oracle::series_exp(0.8 * dilate(samples[0]).dense()) +
                                 oracle::series_exp(0.8 * dilate(samples[1]).dense()));
  EXPECT_LE((from_samples - expected).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_THROW(empirical_mgf(std::span<const Vector>(), 1.0), UsageError);
}

TEST(Dilation, ScalarDomination) {
  EXPECT_TRUE(scalar_dominates(Matrix::Identity(3, 3), 1.0));
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 2.0;
  EXPECT_FALSE(scalar_dominates(m, 1.0));

  Vector e1 = Vector::Zero(1);
  e1[0] = 1.0;
  const Matrix mgf = empirical_mgf(two_atoms(e1), 1.0);
  EXPECT_TRUE(scalar_dominates(mgf, 1.5430806348152437785));
  EXPECT_FALSE(scalar_dominates(mgf, 1.54));
}

TEST(Dilation, ScalarDominationMonotoneInLevel) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix m = exp_dilation(random_vector(rng, 3, 2.0), 0.9);
    bool seen_true = false;
    for (int k = 0; k <= 200; ++k) {
      const bool dominated = scalar_dominates(m, k * 0.05);
      if (seen_true) EXPECT_TRUE(dominated);
      seen_true = seen_true || dominated;
    }
  }
}

TEST(Dilation, MgfConstantOfSignedAtoms) {
  // ln cosh(u) / u^2 at u = theta sigma; the analytic bound is 1/2.
  for (double sigma : {0.5, 1.0, 3.0}) {
    Vector a = Vector::Zero(2);
    a[0] = sigma;
    const double grid[] = {-1.0 / sigma, 1.0 / sigma};
    const auto c = mgf_constant(two_atoms(a), grid);
    EXPECT_NEAR(c.c_hat, 0.4337808304830271870264946849, 1e-14);
    EXPECT_EQ(c.sigma, sigma);
  }
  const double fine[] = {0.001, 0.01, 0.1, 1.0, 5.0};
  EXPECT_LE(mgf_constant(two_atoms(Vector::Constant(1, 1.0)), fine).c_hat, 0.5);
}

TEST(Dilation, MgfConstantOfOriginIsZero) {
  DistributionSpec origin{Family::FiniteSupport, 2, 1.0, {{Vector::Zero(2), 1.0}}};
  const double grid[] = {-1.0, 0.5, 2.0};
  EXPECT_EQ(mgf_constant(origin, grid).c_hat, 0.0);
  const double bad[] = {0.0};
  EXPECT_THROW(mgf_constant(origin, bad), UsageError);
  EXPECT_THROW(mgf_constant(origin, std::span<const double>()), UsageError);
}

TEST(Dilation, MgfConstantOfIsotropicGaussianIsModest) {
  TrialConfig config;
  config.trials = 1'000'000;
  config.seed = 4;
  const double grid[] = {-1.0, -0.5, -0.25, 0.25, 0.5, 1.0};
  const auto c = mgf_constant(isotropic_gaussian(4, 1.0), grid, config);
  EXPECT_TRUE(std::isfinite(c.c_hat));
  EXPECT_GT(c.c_hat, 0.0);
  EXPECT_LE(c.c_hat, 4.0);
}

TEST(Dilation, LiebDeterministicAtomHasZeroSlack) {
  Matrix a(2, 2);
  a << 1.0, 0.3, 0.3, -0.5;
  const MatrixAtom atoms[] = {{Matrix::Zero(2, 2), 1.0}};
  EXPECT_NEAR(lieb_check(a, atoms), 0.0, 1e-14);
}

TEST(Dilation, LiebTwoDiagonalAtoms) {
  // A = 0, Y = +-diag(1, -1): E e^Y = cosh(1) I, so the left side is
  // 2 cosh(1) and the right side is E tr e^Y = 2 cosh(1) as well.
  Matrix y = Matrix::Zero(2, 2);
  y(0, 0) = 1.0;
  y(1, 1) = -1.0;
  const MatrixAtom atoms[] = {{y, 0.5}, {-y, 0.5}};
  const double slack = lieb_check(Matrix::Zero(2, 2), atoms);
  EXPECT_NEAR(slack, 0.0, 1e-14);
  EXPECT_GE(slack, -1e-9);
}

TEST(Dilation, LiebRandomInstancesHaveNonnegativeSlack) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  double min_slack = INFINITY;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + trial % 4;
    auto sym = [&] {
      Matrix r(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) r(i, j) = normal(rng);
      return Matrix(0.5 * (r + r.transpose()));
    };
    const Matrix a = sym();
    std::vector<MatrixAtom> atoms;
    double total = 0.0;
    const int count = 1 + trial % 3;
    for (int k = 0; k < count; ++k) {
      atoms.push_back({sym(), unit(rng)});
      total += atoms.back().probability;
    }
    for (auto& atom : atoms) atom.probability /= total;
    double sum = 0.0;
    for (auto& atom : atoms) sum += atom.probability;
    atoms.back().probability += 1.0 - sum;
    min_slack = std::min(min_slack, lieb_check(a, atoms));
  }
  EXPECT_GE(min_slack, -1e-9);
}

TEST(Dilation, LiebRejectsMismatchedDimensions) {
  const MatrixAtom atoms[] = {{Matrix::Zero(3, 3), 1.0}};
  EXPECT_THROW(lieb_check(Matrix::Zero(2, 2), atoms), ValidationError);
  const MatrixAtom unnormalized[] = {{Matrix::Zero(2, 2), 0.7}};
  EXPECT_THROW(lieb_check(Matrix::Zero(2, 2), unnormalized), ValidationError);
}

TEST(Dilation, PeelingWithNoStepsIsWorkingDimension) {
  const auto r = peeling_check(3, {}, 1.0, 1.0);
  EXPECT_EQ(r.dimension, 4);
  EXPECT_NEAR(r.value, 4.0, 1e-15);
}

TEST(Dilation, PeelingSingleSignedStep) {
  // One step of +-e_1: value = e^{-c} (d - 1 + 2 cosh 1) with c = ln cosh 1.
  const auto step = peeling_step(finite_support_rademacher(1, 1.0));
  const PeelingStep steps[] = {step};
  const double c = std::log(std::cosh(1.0));
  const auto r = peeling_check(1, steps, 1.0, c);
  EXPECT_NEAR(r.value, std::exp(-c) * 2.0 * std::cosh(1.0), 1e-14);
  EXPECT_LE(r.value, 2.0 + 1e-9);
}

TEST(Dilation, PeelingThreeStepsBelowDimension) {
  std::mt19937_64 rng(21);
  for (double theta : {0.5, 1.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<PeelingStep> steps;
      double c = 0.0;
      for (int i = 0; i < 3; ++i) {
        const Vector a = random_vector(rng, 2, 2.0);
        DistributionSpec law = two_atoms(a);
        const double grid[] = {theta};
        c = std::max(c, mgf_constant(law, grid).c_hat);
        steps.push_back(peeling_step(law));
      }
      const auto r = peeling_check(2, steps, theta, c);
      EXPECT_EQ(r.paths, 8u);
      EXPECT_LE(r.value, 3.0 + 1e-9);
    }
  }
}

TEST(Dilation, PeelingGuardsPathExplosion) {
  const auto step = peeling_step(finite_support_rademacher(5, 1.0));
  std::vector<PeelingStep> steps(7, step);  // 10^7 paths
  EXPECT_THROW(peeling_check(5, steps, 1.0, 1.0), ResourceError);
}

}  // namespace
}  // namespace nsg
