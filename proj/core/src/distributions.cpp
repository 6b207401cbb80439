#include "nsg/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nsg/errors.hpp"

namespace nsg {

namespace {

constexpr double kProbabilityTolerance = 1e-12;
constexpr double kMeanTolerance = 1e-12;

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::BoundedSphere: return "bounded_sphere";
    case Family::BoundedBall: return "bounded_ball";
    case Family::AxisSubGaussian: return "axis_subgaussian";
    case Family::IsotropicGaussian: return "isotropic_gaussian";
    case Family::FiniteSupport: return "finite_support";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  for (Family f : {Family::BoundedSphere, Family::BoundedBall, Family::AxisSubGaussian,
                   Family::IsotropicGaussian, Family::FiniteSupport}) {
    if (to_string(f) == name) return f;
  }
  throw ValidationError("unknown distribution family '" + std::string(name) + "'");
}

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::BoundedCase: return "bounded_case";
    case Provenance::AxisCase: return "axis_case";
    case Provenance::IsotropicCase: return "isotropic_case";
    case Provenance::Asserted: return "asserted";
  }
  return "unknown";
}

void DistributionSpec::validate() const {
  if (dimension < 1) throw ValidationError("dimension must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be a positive finite real");
  if (family != Family::FiniteSupport) {
    if (!support.empty()) throw ValidationError("support is only allowed for finite_support");
    return;
  }
  if (support.empty()) throw ValidationError("finite_support needs at least one atom");
  double total = 0.0;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dimension);
  for (const auto& atom : support) {
    if (atom.point.size() != dimension) throw ValidationError("support vector dimension does not match d");
    if (!(atom.probability >= 0.0) || !std::isfinite(atom.probability))
      throw ValidationError("support probabilities must be nonnegative");
    if (!atom.point.allFinite()) throw ValidationError("support vectors must be finite");
    total += atom.probability;
    mean += atom.probability * atom.point;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance)
    throw ValidationError("support probabilities must sum to 1");
  if (mean.norm() > kMeanTolerance) throw ValidationError("finite_support must have zero mean");
}

double NsgCertificate::tail_bound(double t) const {
  const double s = parameter();
  if (s == 0.0) return t > 0.0 ? 0.0 : 2.0;
  return 2.0 * std::exp(-t * t / (2.0 * s * s));
}

NsgCertificate certificate(const DistributionSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case Family::BoundedSphere:
    case Family::BoundedBall:
      return {spec.sigma, 1.0, Provenance::BoundedCase};
    case Family::AxisSubGaussian:
      return {spec.sigma, 1.0, Provenance::AxisCase};
    case Family::IsotropicGaussian:
      // Union bound over a 1/2-cover of the sphere.
      return {spec.sigma, 2.0 * std::sqrt(2.0), Provenance::IsotropicCase};
    case Family::FiniteSupport: {
      double radius = 0.0;
      for (const auto& atom : spec.support) {
        if (atom.probability > 0.0) radius = std::max(radius, atom.point.norm());
      }
      return {radius, 1.0, Provenance::BoundedCase};
    }
  }
  throw ValidationError("unknown family");
}

DistributionSpec finite_support_rademacher(int d, double sigma) {
  if (d < 1) throw ValidationError("dimension must be >= 1");
  DistributionSpec spec{Family::FiniteSupport, d, sigma, {}};
  const double p = 1.0 / (2.0 * d);
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e[k] = sigma;
    spec.support.push_back({e, p});
    spec.support.push_back({-e, p});
  }
  return spec;
}

DistributionSpec bounded_sphere(int d, double sigma) { return {Family::BoundedSphere, d, sigma, {}}; }
DistributionSpec bounded_ball(int d, double sigma) { return {Family::BoundedBall, d, sigma, {}}; }
DistributionSpec axis_subgaussian(int d, double sigma) { return {Family::AxisSubGaussian, d, sigma, {}}; }
DistributionSpec isotropic_gaussian(int d, double sigma) { return {Family::IsotropicGaussian, d, sigma, {}}; }

DistributionSpec scaled(const DistributionSpec& spec, double factor) {
  if (!(factor > 0.0)) throw ValidationError("scale factor must be positive");
  DistributionSpec out = spec;
  out.sigma *= factor;
  for (auto& atom : out.support) atom.point *= factor;
  return out;
}

Sampler::Sampler(DistributionSpec spec, SeedStream stream) : spec_(std::move(spec)), source_(stream) {
  spec_.validate();
  if (spec_.family == Family::FiniteSupport) {
    cumulative_.reserve(spec_.support.size());
    double running = 0.0;
    for (const auto& atom : spec_.support) {
      running += atom.probability;
      cumulative_.push_back(running);
    }
  }
}

Eigen::VectorXd Sampler::draw() {
  Eigen::VectorXd out(spec_.dimension);
  draw_into(out);
  return out;
}

void Sampler::draw_into(Eigen::Ref<Eigen::VectorXd> out) {
  const int d = spec_.dimension;
  switch (spec_.family) {
    case Family::BoundedSphere:
      out = spec_.sigma * source_.unit_vector(d);
      return;
    case Family::BoundedBall: {
      const Eigen::VectorXd direction = source_.unit_vector(d);
      const double radius = spec_.sigma * std::pow(source_.uniform(), 1.0 / d);
      out = radius * direction;
      return;
    }
    case Family::AxisSubGaussian:
      out.setZero();
      out[0] = spec_.sigma * source_.normal();
      return;
    case Family::IsotropicGaussian: {
      source_.fill_normal(out);
      out *= spec_.sigma / std::sqrt(static_cast<double>(d));
      return;
    }
    case Family::FiniteSupport: {
      // Rounding can leave the last cumulative value a hair under 1.
      const double u = source_.uniform() * cumulative_.back();
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      if (it == cumulative_.end()) --it;
      out = spec_.support[static_cast<std::size_t>(it - cumulative_.begin())].point;
      return;
    }
  }
}

std::vector<Eigen::VectorXd> sample(const DistributionSpec& spec, SeedStream stream, std::size_t count) {
  Sampler sampler(spec, stream);
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.draw());
  return out;
}

}  // namespace nsg
