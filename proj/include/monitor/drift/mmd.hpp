#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "monitor/core/errors.hpp"
#include "monitor/util/matrix.hpp"

namespace monitor::drift {

// RBF kernel bandwidth from the median heuristic: sigma^2 is half the median
// of the squared pairwise Euclidean distances over the pooled sample. The
// median of an even-length list is the midpoint of the two middle values.
inline double median_heuristic(const util::Matrix& pooled) {
  const std::size_t n = pooled.rows();
  if (n < 2) throw Error("DegenerateSample", "median heuristic needs at least 2 points");
  std::vector<double> d2;
  d2.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      d2.push_back(util::squared_distance(pooled.row(i), pooled.row(j)));
  std::sort(d2.begin(), d2.end());
  double median;
  std::size_t k = d2.size();
  if (k % 2 == 1)
    median = d2[k / 2];
  else
    median = 0.5 * (d2[k / 2 - 1] + d2[k / 2]);
  double sigma2 = 0.5 * median;
  if (sigma2 <= 0.0)
    throw Error("DegenerateSample", "all pooled points identical, bandwidth undefined");
  return sigma2;
}

inline double rbf_kernel(std::span<const double> a, std::span<const double> b, double sigma2) {
  return std::exp(-util::squared_distance(a, b) / (2.0 * sigma2));
}

// Unbiased squared MMD estimator with the RBF kernel. Diagonal terms are
// excluded from the within-sample sums, so the estimate can be negative.
inline double mmd2_unbiased(const util::Matrix& x, const util::Matrix& y, double sigma2) {
  const std::size_t n = x.rows();
  const std::size_t m = y.rows();
  if (n < 2 || m < 2) throw Error("SampleTooSmall", "unbiased MMD needs n, m >= 2");
  if (sigma2 <= 0.0) throw Error("BadArgument", "sigma^2 must be positive");
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) sxx += rbf_kernel(x.row(i), x.row(j), sigma2);
  double syy = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) syy += rbf_kernel(y.row(i), y.row(j), sigma2);
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) sxy += rbf_kernel(x.row(i), y.row(j), sigma2);
  double nn = static_cast<double>(n);
  double mm = static_cast<double>(m);
  return sxx / (nn * (nn - 1.0)) + syy / (mm * (mm - 1.0)) - 2.0 * sxy / (nn * mm);
}

}  // namespace monitor::drift
