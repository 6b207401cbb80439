#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace nsg {

/// Pairwise (tree) summation in index order.
double pairwise_sum(std::span<const double> values);

/// One-sided exact binomial (Clopper-Pearson) upper confidence bound on the
/// success probability after k successes in n trials, at level alpha:
/// the (1 - alpha) quantile of Beta(k + 1, n - k), and 1 when k == n.
double clopper_pearson_upper(std::uint64_t k, std::uint64_t n, double alpha);

/// Upper empirical quantile: the ceil(q N)-th smallest sample (1-based).
double empirical_quantile(std::vector<double> samples, double q);

/// Smallest value v with P(X <= v) >= q for a finite weighted law.
double weighted_quantile(std::vector<std::pair<double, double>> value_probability, double q);

}  // namespace nsg
