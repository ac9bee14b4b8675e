// SPDX-License-Identifier: Apache-2.0
//
// Small sample-statistics helpers shared by the harness and the test suites.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace skg::stats {

inline double mean(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("stats::mean: empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Unbiased sample variance.
inline double variance(std::span<const double> v) {
  if (v.size() < 2) throw std::invalid_argument("stats::variance: need >= 2 samples");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline double stddev(std::span<const double> v) { return std::sqrt(variance(v)); }

/// Standard error of the sample mean.
inline double meanStderr(std::span<const double> v) {
  return stddev(v) / std::sqrt(static_cast<double>(v.size()));
}

inline double quantile(std::span<const double> v, double p) {
  if (v.empty()) throw std::invalid_argument("stats::quantile: empty sample");
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double median(std::span<const double> v) { return quantile(v, 0.5); }

inline double iqr(std::span<const double> v) { return quantile(v, 0.75) - quantile(v, 0.25); }

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("stats::pearson: bad sample sizes");
  }
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("stats::pearson: constant input");
  return sxy / std::sqrt(sxx * syy);
}

inline double skewness(std::span<const double> v) {
  const double m = mean(v);
  const double sd = stddev(v);
  double s = 0.0;
  for (double x : v) s += std::pow((x - m) / sd, 3.0);
  return s / static_cast<double>(v.size());
}

inline double excessKurtosis(std::span<const double> v) {
  const double m = mean(v);
  const double sd = stddev(v);
  double s = 0.0;
  for (double x : v) s += std::pow((x - m) / sd, 4.0);
  return s / static_cast<double>(v.size()) - 3.0;
}

}  // namespace skg::stats
