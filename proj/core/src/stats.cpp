#include "nakasim/stats.hpp"

#include <algorithm>
#include <cmath>

#include "nakasim/errors.hpp"

namespace nakasim {

double ks_compare(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.empty() || b.empty()) throw ArgumentError("ks_compare: empty sample");
  std::vector<std::int64_t> x(a.begin(), a.end());
  std::vector<std::int64_t> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0;
  while (i < x.size() && j < y.size()) {
    const std::int64_t v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ArgumentError("quantile_sorted: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("quantile_sorted: q outside [0, 1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

OriginFit fit_through_origin(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.empty()) throw ArgumentError("fit_through_origin: bad input sizes");
  double sxy = 0;
  double sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += xs[i] * ys[i];
    sxx += xs[i] * xs[i];
  }
  if (sxx == 0) throw DegenerateInputError("fit_through_origin: all x are zero");
  OriginFit f;
  f.slope = sxy / sxx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = f.slope * xs[i];
    f.relative_deviation.push_back((ys[i] - pred) / pred);
  }
  return f;
}

}  // namespace nakasim
