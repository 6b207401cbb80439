#pragma once

#include <optional>
#include <vector>

namespace nsg::bounds {

/// Inputs shared by the three vector-martingale bounds.
struct BoundQuery {
  int n = 1;
  int d = 1;
  double delta = 0.05;
  double sigma_sq_sum = 0.0;
  std::optional<double> theta;
  double c = 1.0;

  void validate() const;
};

/// ln(2d / delta). Throws DomainError when 2d / delta < 1.
double log_factor(int d, double delta);

/// ln(2d / delta) + ln ln(B / b). Requires B > b > 0 and B / b >= e.
double iota(int d, double delta, double B, double b);

/// c * theta * sum sigma_i^2 + log_factor / theta. Requires `q.theta`.
double fixed_theta_bound(const BoundQuery& q);

/// sqrt(log_factor / sum sigma_i^2), the theta balancing both terms when c = 1.
double optimal_theta(const BoundQuery& q);

/// c * sqrt(sum sigma_i^2 * log_factor); zero for an empty variance sum.
double hoeffding_bound(const BoundQuery& q);

/// Geometric variance levels psi_j = 2^{j-1} b with matched theta_j = sqrt(iota / psi_j).
struct DoublingGrid {
  double b = 0.0;
  double B = 0.0;
  std::vector<double> psi;
  std::vector<double> theta;
  double iota = 0.0;

  std::size_t size() const { return psi.size(); }
};

DoublingGrid build_doubling_grid(double b, double B, int d, double delta);

struct AdaptiveBound {
  enum class Case { Bound, Exceeded };
  Case kind = Case::Bound;
  /// Meaningful only when kind == Bound.
  double value = 0.0;

  bool exceeded() const { return kind == Case::Exceeded; }
};

/// Exceeded when sum sigma_i^2 >= B, otherwise (2c + 1) sqrt(max(sum, b) * iota).
AdaptiveBound adaptive_bound(double sigma_sq_sum, const DoublingGrid& grid, double c = 1.0);

}  // namespace nsg::bounds
