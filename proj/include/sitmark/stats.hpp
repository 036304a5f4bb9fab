// stats.hpp — sample statistics shared across the toolkit.

#pragma once

#include <span>
#include <vector>

namespace sitmark::stats {

double mean(std::span<const double> xs);

// Unbiased sample variance (n-1 denominator); requires n >= 2.
double variance(std::span<const double> xs);
double std_dev(std::span<const double> xs);

// Pearson correlation; requires n >= 2 and both sides non-degenerate.
double correlation(std::span<const double> xs, std::span<const double> ys);

// Adjusted Fisher-Pearson sample skewness G1. Returns 0 and sets *degenerate
// (when provided) if the sample has no spread or fewer than 3 points.
double skewness(std::span<const double> xs, bool* degenerate = nullptr);

// Linear-interpolation quantile (R type 7). p in [0, 1]; requires n >= 1.
// Sorts a copy; use quantiles() for several cuts of the same sample.
double quantile(std::span<const double> xs, double p);
std::vector<double> quantiles(std::span<const double> xs, std::span<const double> ps);

}  // namespace sitmark::stats
