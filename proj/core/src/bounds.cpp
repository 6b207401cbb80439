#include "nsg/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nsg/errors.hpp"

namespace nsg::bounds {

void BoundQuery::validate() const {
  if (n < 1) throw DomainError("n must be >= 1");
  if (d < 1) throw DomainError("d must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (!(sigma_sq_sum >= 0.0) || !std::isfinite(sigma_sq_sum))
    throw DomainError("sum of sigma_i^2 must be a nonnegative finite real");
  if (theta && !(*theta > 0.0)) throw DomainError("theta must be positive");
  if (!(c > 0.0)) throw DomainError("c must be positive");
}

double log_factor(int d, double delta) {
  if (d < 1) throw DomainError("d must be >= 1");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const double ratio = 2.0 * d / delta;
  if (ratio <= 1.0) throw DomainError("log(2d/delta) must be positive: need delta < 2d");
  return std::log(ratio);
}

double iota(int d, double delta, double B, double b) {
  if (!(b > 0.0)) throw DomainError("b must be positive");
  if (!(B > b)) throw DomainError("need B > b > 0");
  const double ratio = B / b;
  if (ratio < std::numbers::e)
    throw DomainError("B/b = " + std::to_string(ratio) +
                      " makes log log(B/b) negative; enlarge B/b to at least e");
  return log_factor(d, delta) + std::log(std::log(ratio));
}

double fixed_theta_bound(const BoundQuery& q) {
  if (!q.theta) throw UsageError("fixed-theta bound needs theta");
  q.validate();
  const double theta = *q.theta;
  return q.c * theta * q.sigma_sq_sum + log_factor(q.d, q.delta) / theta;
}

double optimal_theta(const BoundQuery& q) {
  q.validate();
  if (q.sigma_sq_sum == 0.0)
    throw DomainError("optimal theta is undefined for a zero variance sum; the bound is 0");
  return std::sqrt(log_factor(q.d, q.delta) / q.sigma_sq_sum);
}

double hoeffding_bound(const BoundQuery& q) {
  q.validate();
  const double lf = log_factor(q.d, q.delta);
  if (q.sigma_sq_sum == 0.0) return 0.0;
  return q.c * std::sqrt(q.sigma_sq_sum * lf);
}

DoublingGrid build_doubling_grid(double b, double B, int d, double delta) {
  DoublingGrid grid;
  grid.b = b;
  grid.B = B;
  grid.iota = iota(d, delta, B, b);
  // psi_j = 2^{j-1} b for j = 1..s, last element psi_s <= B < 2 psi_s.
  for (double psi = b; psi <= B; psi *= 2.0) {
    grid.psi.push_back(psi);
    grid.theta.push_back(std::sqrt(grid.iota / psi));
  }
  return grid;
}

AdaptiveBound adaptive_bound(double sigma_sq_sum, const DoublingGrid& grid, double c) {
  if (!(sigma_sq_sum >= 0.0)) throw DomainError("sum of sigma_i^2 must be nonnegative");
  if (grid.psi.empty() || !(grid.b > 0.0) || !(grid.iota > 0.0)) throw ValidationError("invalid doubling grid");
  if (!(c > 0.0)) throw DomainError("c must be positive");
  if (sigma_sq_sum >= grid.B) return {AdaptiveBound::Case::Exceeded, 0.0};
  const double level = std::max(sigma_sq_sum, grid.b);
  return {AdaptiveBound::Case::Bound, (2.0 * c + 1.0) * std::sqrt(level * grid.iota)};
}

}  // namespace nsg::bounds
