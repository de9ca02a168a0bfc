#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nakasim {

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|. Throws
/// ArgumentError when either sample is empty.
double ks_compare(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two points.
double stddev(std::span<const double> xs);
/// Linear-interpolation quantile of a sorted sample (the "type 7" rule).
double quantile_sorted(std::span<const double> sorted, double q);

struct OriginFit {
  double slope = 0;
  std::vector<double> relative_deviation;  // (y_i - slope x_i) / (slope x_i)
};

/// Least-squares line y = c x through the origin.
OriginFit fit_through_origin(std::span<const double> xs, std::span<const double> ys);

}  // namespace nakasim
