#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace testutil {

/// Kolmogorov-Smirnov statistic sup |F_n(u) - u| against Uniform(0,1).
inline double ks_statistic(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double hi = (i + 1) / n - samples[i];
    const double lo = samples[i] - i / n;
    worst = std::max(worst, std::max(hi, lo));
  }
  return worst;
}

/// Critical value at significance 0.001 for the asymptotic KS distribution.
inline double ks_critical_001(std::size_t n) { return 1.9495 / std::sqrt(static_cast<double>(n)); }

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace testutil
