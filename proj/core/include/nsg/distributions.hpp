#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "nsg/rng.hpp"

namespace nsg {

enum class Family { BoundedSphere, BoundedBall, AxisSubGaussian, IsotropicGaussian, FiniteSupport };

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);

/// One support point of a finite distribution.
struct Atom {
  Eigen::VectorXd point;
  double probability = 0.0;
};

/// A zero-mean random vector law in R^d with scale parameter sigma.
///
/// BoundedSphere and BoundedBall are uniform on the sphere / ball of radius
/// sigma. AxisSubGaussian is xi * e_1 with xi ~ N(0, sigma^2).
/// IsotropicGaussian has i.i.d. N(0, sigma^2 / d) coordinates. FiniteSupport
/// draws from `support`; `sigma` is kept as a nominal scale only.
struct DistributionSpec {
  Family family = Family::BoundedSphere;
  int dimension = 1;
  double sigma = 1.0;
  std::vector<Atom> support;

  /// Throws ValidationError when an invariant does not hold.
  void validate() const;
};

enum class Provenance { BoundedCase, AxisCase, IsotropicCase, Asserted };

std::string_view to_string(Provenance provenance);

/// Certifies Pr(|X - EX| >= t) <= 2 exp(-t^2 / (2 (multiplier * sigma)^2)).
struct NsgCertificate {
  double sigma = 0.0;
  double constant_multiplier = 1.0;
  Provenance provenance = Provenance::Asserted;

  /// The effective nSG parameter, multiplier * sigma.
  double parameter() const { return constant_multiplier * sigma; }
  /// Right-hand side of the certified tail inequality at threshold t.
  double tail_bound(double t) const;
};

/// Per-family analytic certificate. A FiniteSupport law concentrated at the
/// origin gets sigma 0, for which the claim holds trivially.
NsgCertificate certificate(const DistributionSpec& spec);

/// Uniform law over the 2d axis atoms {+-sigma e_k}.
DistributionSpec finite_support_rademacher(int d, double sigma);

DistributionSpec bounded_sphere(int d, double sigma);
DistributionSpec bounded_ball(int d, double sigma);
DistributionSpec axis_subgaussian(int d, double sigma);
DistributionSpec isotropic_gaussian(int d, double sigma);

/// Same law with every draw multiplied by `factor` (> 0).
DistributionSpec scaled(const DistributionSpec& spec, double factor);

/// Stateful draw interface over one seed stream.
class Sampler {
 public:
  Sampler(DistributionSpec spec, SeedStream stream);

  Eigen::VectorXd draw();
  /// Writes one draw into `out`, which must have size d.
  void draw_into(Eigen::Ref<Eigen::VectorXd> out);

  const DistributionSpec& spec() const { return spec_; }

 private:
  DistributionSpec spec_;
  RandomSource source_;
  std::vector<double> cumulative_;
};

/// `count` independent draws from `spec` on the given stream.
std::vector<Eigen::VectorXd> sample(const DistributionSpec& spec, SeedStream stream, std::size_t count);

}  // namespace nsg
