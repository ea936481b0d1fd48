#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vmrf {

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;

    // |estimate - target| < k * stderr; a zero stderr requires an exact match.
    bool within(double target, double k = 3.0) const;
};

// Pairwise (cascade) summation; deterministic for a given input order.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);

// Sample mean and its standard error (sample standard deviation / sqrt(n)).
McEstimate mean_estimate(std::span<const double> values);

// Unbiased sample covariance of two equally long samples.
double sample_covariance(std::span<const double> x, std::span<const double> y);

// Standard error of the sample covariance estimator, from the empirical variance of
// the centred products.
double covariance_stderr(std::span<const double> x, std::span<const double> y);

// Two-sided Kolmogorov-Smirnov distance of a sample from Uniform(0, 1).
double ks_distance_uniform(std::vector<double> sample);

}  // namespace vmrf
