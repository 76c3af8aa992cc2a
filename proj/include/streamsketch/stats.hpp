#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace streamsketch {

// Arithmetic mean; throws ParameterError on an empty input.
double mean(const std::vector<double>& values);

// Unbiased sample standard deviation; requires at least two values.
double sample_stddev(const std::vector<double>& values);

// Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

// Upper-tail p-value of a chi-squared statistic with `dof` degrees
// of freedom, i.e. P[X >= stat].
double chi_squared_pvalue(double stat, std::size_t dof);

// Poisson(mean) probability mass at k, computed in log space so large
// means stay finite.
double poisson_pmf(std::uint64_t k, double mean);

// Upper tail P[X >= m] for X ~ Poisson(mean). Exact via the
// regularized gamma identity P[X >= m] = P(m, mean).
double poisson_upper_tail(std::uint64_t m, double mean);

}  // namespace streamsketch
