#include "nsg/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "nsg/errors.hpp"

namespace nsg {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double clopper_pearson_upper(std::uint64_t k, std::uint64_t n, double alpha) {
  if (n == 0) throw UsageError("binomial bound needs n >= 1");
  if (k > n) throw ValidationError("hits exceed trials");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  if (k == n) return 1.0;
  if (k == 0) return -std::expm1(std::log(alpha) / static_cast<double>(n));
  return boost::math::ibeta_inv(static_cast<double>(k + 1), static_cast<double>(n - k), 1.0 - alpha);
}

double empirical_quantile(std::vector<double> samples, double q) {
  if (samples.empty()) throw UsageError("quantile of an empty sample");
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("quantile level must lie in (0, 1)");
  const auto n = static_cast<double>(samples.size());
  // The small offset keeps q * N that lands on an integer from rounding up.
  auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, samples.size());
  auto nth = samples.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(samples.begin(), nth, samples.end());
  return *nth;
}

double weighted_quantile(std::vector<std::pair<double, double>> value_probability, double q) {
  if (value_probability.empty()) throw UsageError("quantile of an empty law");
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("quantile level must lie in (0, 1)");
  std::sort(value_probability.begin(), value_probability.end());
  double cumulative = 0.0;
  for (const auto& [value, p] : value_probability) {
    cumulative += p;
    if (cumulative >= q - 1e-12) return value;
  }
  return value_probability.back().first;
}

}  // namespace nsg
