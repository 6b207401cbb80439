#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nsg/distributions.hpp"
#include "nsg/linalg.hpp"
#include "nsg/trial.hpp"

namespace nsg {

/// The symmetric (d+1)x(d+1) embedding
///
///     Y = [ 0  x^T ]
///         [ x  0   ]
///
/// Spectrum {+|x|, -|x|, 0 (d-1 times)} and Y^3 = |x|^2 Y.
class DilationMatrix {
 public:
  explicit DilationMatrix(Vector x);

  const Vector& vector() const { return x_; }
  int dimension() const { return static_cast<int>(x_.size()) + 1; }
  double radius() const { return radius_; }

  Matrix dense() const;
  /// Y^2 = diag(|x|^2, x x^T).
  Matrix squared() const;

 private:
  Vector x_;
  double radius_;
};

DilationMatrix dilate(const Vector& x);

/// exp(theta Y) = I + sinh(theta r)/r Y + (cosh(theta r) - 1)/r^2 Y^2 with r = |x|.
Matrix exp_dilation(const Vector& x, double theta);

/// E exp(theta Y). Exact for FiniteSupport specs; otherwise averaged over
/// `config.trials` draws.
Matrix empirical_mgf(const DistributionSpec& spec, double theta, const TrialConfig& config = {});
Matrix empirical_mgf(std::span<const Vector> samples, double theta);

/// True iff M <= s I in the PSD order, i.e. lambda_max(M) <= s + 1e-10.
bool scalar_dominates(const Matrix& m, double s);

/// Smallest c with E exp(theta Y) <= exp(c theta^2 sigma^2) I on every grid
/// theta, where sigma is the certified nSG parameter of the law.
struct MgfConstant {
  double c_hat = 0.0;
  double sigma = 0.0;
  std::vector<double> theta;
  std::vector<double> log_lambda_max;
};

MgfConstant mgf_constant(const DistributionSpec& spec, std::span<const double> theta_grid,
                         const TrialConfig& config = {});

struct MatrixAtom {
  Matrix value;
  double probability = 0.0;
};

/// tr exp(A + log E e^Y) - E tr exp(A + Y) for a finite law of symmetric Y.
/// Nonnegative up to rounding.
double lieb_check(const Matrix& a, std::span<const MatrixAtom> atoms);

/// One martingale step with a fixed finite conditional law and nSG parameter.
struct PeelingStep {
  std::vector<Atom> atoms;
  double sigma = 0.0;
};

/// Builds a step from a zero-mean FiniteSupport spec, sigma from its certificate.
PeelingStep peeling_step(const DistributionSpec& finite);

struct PeelingResult {
  double value = 0.0;
  /// Working matrix dimension d + 1.
  int dimension = 0;
  std::uint64_t paths = 0;

  double slack() const { return dimension - value; }
};

inline constexpr std::uint64_t kMaxEnumeratedPaths = 1'000'000;

/// Exact E tr exp(-c theta^2 sum sigma_i^2 I + theta sum Y_i) by enumerating
/// every path. Throws ResourceError above kMaxEnumeratedPaths paths.
PeelingResult peeling_check(int d, std::span<const PeelingStep> steps, double theta, double c);

}  // namespace nsg
