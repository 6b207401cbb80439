#include "nsg/dilation.hpp"

#include <cmath>
#include <numeric>

#include "nsg/errors.hpp"
#include "nsg/stats.hpp"

namespace nsg {

namespace {

constexpr double kSeriesCutoff = 1e-8;

// Coefficients of Y and Y^2 in exp(theta Y).
struct ExpCoefficients {
  double linear;
  double quadratic;
};

ExpCoefficients exp_coefficients(double radius, double theta) {
  if (radius < kSeriesCutoff) {
    const double u2 = theta * theta * radius * radius;
    return {theta * (1.0 + u2 / 6.0), 0.5 * theta * theta * (1.0 + u2 / 12.0)};
  }
  const double u = theta * radius;
  return {std::sinh(u) / radius, (std::cosh(u) - 1.0) / (radius * radius)};
}

// Accumulated pieces of sum_k w_k exp(theta Y_k): the Y part is carried by
// sum w a x, the Y^2 part by sum w b |x|^2 and sum w b x x^T.
struct MgfAccumulator {
  double weight = 0.0;
  Vector linear;
  double corner = 0.0;
  Matrix outer;

  explicit MgfAccumulator(int d = 0) : linear(Vector::Zero(d)), outer(Matrix::Zero(d, d)) {}

  void add(const Vector& x, double theta, double w) {
    const auto [a, b] = exp_coefficients(x.norm(), theta);
    weight += w;
    linear.noalias() += (w * a) * x;
    corner += w * b * x.squaredNorm();
    outer.noalias() += (w * b) * x * x.transpose();
  }

  void merge(const MgfAccumulator& other) {
    weight += other.weight;
    linear += other.linear;
    corner += other.corner;
    outer += other.outer;
  }

  Matrix mean() const {
    const auto d = linear.size();
    Matrix m = Matrix::Identity(d + 1, d + 1);
    m(0, 0) += corner / weight;
    m.block(1, 0, d, 1) += linear / weight;
    m.block(0, 1, 1, d) += linear.transpose() / weight;
    m.block(1, 1, d, d) += outer / weight;
    return m;
  }
};

}  // namespace

DilationMatrix::DilationMatrix(Vector x) : x_(std::move(x)), radius_(x_.norm()) {
  if (x_.size() < 1) throw ValidationError("dilation needs d >= 1");
}

Matrix DilationMatrix::dense() const {
  const auto d = x_.size();
  Matrix y = Matrix::Zero(d + 1, d + 1);
  y.block(1, 0, d, 1) = x_;
  y.block(0, 1, 1, d) = x_.transpose();
  return y;
}

Matrix DilationMatrix::squared() const {
  const auto d = x_.size();
  Matrix y2 = Matrix::Zero(d + 1, d + 1);
  y2(0, 0) = radius_ * radius_;
  y2.block(1, 1, d, d) = x_ * x_.transpose();
  return y2;
}

DilationMatrix dilate(const Vector& x) { return DilationMatrix(x); }

Matrix exp_dilation(const Vector& x, double theta) {
  MgfAccumulator acc(static_cast<int>(x.size()));
  acc.add(x, theta, 1.0);
  return acc.mean();
}

Matrix empirical_mgf(const DistributionSpec& spec, double theta, const TrialConfig& config) {
  spec.validate();
  if (spec.family == Family::FiniteSupport) {
    MgfAccumulator acc(spec.dimension);
    for (const auto& atom : spec.support) acc.add(atom.point, theta, atom.probability);
    return acc.mean();
  }
  const auto acc = accumulate_samples(
      spec, config, MgfAccumulator(spec.dimension),
      [theta](MgfAccumulator& a, const Vector& x) { a.add(x, theta, 1.0); },
      [](MgfAccumulator& into, const MgfAccumulator& from) { into.merge(from); });
  return acc.mean();
}

Matrix empirical_mgf(std::span<const Vector> samples, double theta) {
  if (samples.empty()) throw UsageError("empirical MGF needs at least one sample");
  MgfAccumulator acc(static_cast<int>(samples.front().size()));
  for (const auto& x : samples) {
    if (x.size() != samples.front().size()) throw ValidationError("samples have mixed dimensions");
    acc.add(x, theta, 1.0);
  }
  return acc.mean();
}

bool scalar_dominates(const Matrix& m, double s) {
  require_symmetric(m, 1e-12);
  return lambda_max(m) <= s + 1e-10;
}

MgfConstant mgf_constant(const DistributionSpec& spec, std::span<const double> theta_grid,
                         const TrialConfig& config) {
  if (theta_grid.empty()) throw UsageError("theta grid is empty");
  for (double theta : theta_grid) {
    if (theta == 0.0 || !std::isfinite(theta)) throw UsageError("theta grid entries must be nonzero and finite");
  }
  MgfConstant out;
  out.sigma = certificate(spec).parameter();
  bool nontrivial = false;
  for (double theta : theta_grid) {
    const double log_top = std::log(lambda_max(empirical_mgf(spec, theta, config)));
    out.theta.push_back(theta);
    out.log_lambda_max.push_back(log_top);
    if (log_top > 0.0) nontrivial = true;
  }
  if (out.sigma == 0.0) {
    if (nontrivial) throw DomainError("mgf constant is undefined for sigma = 0");
    return out;
  }
  for (std::size_t i = 0; i < out.theta.size(); ++i) {
    const double theta = out.theta[i];
    out.c_hat = std::max(out.c_hat, out.log_lambda_max[i] / (theta * theta * out.sigma * out.sigma));
  }
  return out;
}

double lieb_check(const Matrix& a, std::span<const MatrixAtom> atoms) {
  require_symmetric(a);
  if (atoms.empty()) throw ValidationError("lieb check needs at least one atom");
  const auto m = a.rows();
  Matrix mgf = Matrix::Zero(m, m);
  std::vector<double> lhs_terms;
  double total = 0.0;
  for (const auto& atom : atoms) {
    if (atom.value.rows() != m || atom.value.cols() != m) throw ValidationError("atom dimension does not match A");
    require_symmetric(atom.value, 1e-12);
    if (!(atom.probability >= 0.0)) throw ValidationError("atom probabilities must be nonnegative");
    total += atom.probability;
    mgf += atom.probability * sym_exp(atom.value);
    lhs_terms.push_back(atom.probability * trace_exp(a + atom.value));
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("atom probabilities must sum to 1");
  const Matrix log_mgf = sym_log(0.5 * (mgf + mgf.transpose()));
  return trace_exp(a + log_mgf) - pairwise_sum(lhs_terms);
}

PeelingStep peeling_step(const DistributionSpec& finite) {
  if (finite.family != Family::FiniteSupport) throw ValidationError("peeling steps need a finite_support law");
  return {finite.support, certificate(finite).parameter()};
}

PeelingResult peeling_check(int d, std::span<const PeelingStep> steps, double theta, double c) {
  if (d < 1) throw ValidationError("d must be >= 1");
  double path_count = 1.0;
  double sigma_sq_sum = 0.0;
  for (const auto& step : steps) {
    if (step.atoms.empty()) throw ValidationError("peeling step has no atoms");
    for (const auto& atom : step.atoms) {
      if (atom.point.size() != d) throw ValidationError("peeling atom dimension does not match d");
    }
    path_count *= static_cast<double>(step.atoms.size());
    if (path_count > static_cast<double>(kMaxEnumeratedPaths))
      throw ResourceError("peeling enumeration exceeds 10^6 paths");
    sigma_sq_sum += step.sigma * step.sigma;
  }
  const double scale = std::exp(-c * theta * theta * sigma_sq_sum);

  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(path_count));
  // Depth-first over atoms in index order; the term order is fixed.
  auto visit = [&](auto&& self, std::size_t depth, double probability, const Vector& sum) -> void {
    if (depth == steps.size()) {
      terms.push_back(probability * scale * exp_dilation(sum, theta).trace());
      return;
    }
    for (const auto& atom : steps[depth].atoms) {
      if (atom.probability == 0.0) continue;
      self(self, depth + 1, probability * atom.probability, Vector(sum + atom.point));
    }
  };
  visit(visit, 0, 1.0, Vector::Zero(d));
  return {pairwise_sum(terms), d + 1, static_cast<std::uint64_t>(path_count)};
}

}  // namespace nsg
