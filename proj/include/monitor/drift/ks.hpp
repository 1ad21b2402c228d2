#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "monitor/core/errors.hpp"

namespace monitor::drift {

// Two-sample Kolmogorov-Smirnov statistic: the supremum of |ECDF_ref -
// ECDF_test| over the pooled observed points. Both ECDFs are evaluated
// right-continuously, which handles ties. Inputs need not be sorted.
inline double ks_statistic(std::span<const double> ref, std::span<const double> test) {
  if (ref.empty() || test.empty()) throw Error("EmptySample", "KS needs two non-empty samples");
  std::vector<double> a(ref.begin(), ref.end());
  std::vector<double> b(test.begin(), test.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    // Advance past all observations equal to the next pooled value so both
    // ECDFs are evaluated just right of it.
    double x = (j >= b.size() || (i < a.size() && a[i] <= b[j])) ? a[i] : b[j];
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    double diff = std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m);
    if (diff > d) d = diff;
  }
  return d;
}

// Asymptotic two-sided p-value from the Kolmogorov distribution:
// lambda = D*sqrt(nm/(n+m)), p = 2*sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
// The series is truncated once a term drops below 1e-10; if it has not
// converged by then (lambda near 0) the tail mass is 1. Clamped to [0,1].
inline double ks_pvalue(double d, std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw Error("EmptySample", "KS p-value needs n, m >= 1");
  double nm = static_cast<double>(n) * static_cast<double>(m);
  double lambda = d * std::sqrt(nm / static_cast<double>(n + m));
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  bool converged = false;
  for (int j = 1; j <= 256; ++j) {
    double term = std::exp(-2.0 * static_cast<double>(j) * static_cast<double>(j) *
                           lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-10) {
      converged = true;
      break;
    }
  }
  if (!converged) return 1.0;
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace monitor::drift
