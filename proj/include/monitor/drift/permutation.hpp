#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "monitor/drift/mmd.hpp"
#include "monitor/util/matrix.hpp"
#include "monitor/util/rng.hpp"

namespace monitor::drift {

// Shared permutation-test core: the statistic is a function of an index
// arrangement of the pooled sample, where positions [0,n) form the first
// sample and the rest the second. The first evaluation uses the identity
// arrangement (the observed split); every round re-shuffles with the seeded
// generator. Add-one smoothing keeps p in [1/(1+n_perm), 1].
template <typename IndexStatFn>
double permutation_pvalue_indexed(std::size_t pool_size, IndexStatFn&& stat,
                                  std::size_t n_perm, std::uint64_t seed) {
  if (n_perm == 0) throw Error("BadArgument", "need at least one permutation");
  std::vector<std::size_t> idx(pool_size);
  std::iota(idx.begin(), idx.end(), 0);
  const double observed = stat(idx);
  util::Rng rng(seed);
  std::size_t at_least = 0;
  for (std::size_t p = 0; p < n_perm; ++p) {
    rng.shuffle(idx);
    if (stat(idx) >= observed) ++at_least;
  }
  return (1.0 + static_cast<double>(at_least)) / (1.0 + static_cast<double>(n_perm));
}

// Permutation p-value for an arbitrary two-sample statistic on row matrices.
template <typename StatFn>
double permutation_pvalue(const util::Matrix& x, const util::Matrix& y, StatFn&& statistic,
                          std::size_t n_perm, std::uint64_t seed) {
  const std::size_t n = x.rows();
  const std::size_t m = y.rows();
  const std::size_t cols = x.cols();
  util::Matrix pooled(n + m, cols);
  for (std::size_t i = 0; i < n; ++i)
    std::copy(x.row(i).begin(), x.row(i).end(), pooled.row(i).begin());
  for (std::size_t i = 0; i < m; ++i)
    std::copy(y.row(i).begin(), y.row(i).end(), pooled.row(n + i).begin());
  util::Matrix px(n, cols), py(m, cols);
  auto stat = [&](const std::vector<std::size_t>& idx) {
    for (std::size_t i = 0; i < n; ++i)
      std::copy(pooled.row(idx[i]).begin(), pooled.row(idx[i]).end(), px.row(i).begin());
    for (std::size_t i = 0; i < m; ++i)
      std::copy(pooled.row(idx[n + i]).begin(), pooled.row(idx[n + i]).end(),
                py.row(i).begin());
    return statistic(px, py);
  };
  return permutation_pvalue_indexed(n + m, stat, n_perm, seed);
}

// Scalar-sample convenience overload.
template <typename StatFn>
double permutation_pvalue(const std::vector<double>& x, const std::vector<double>& y,
                          StatFn&& statistic, std::size_t n_perm, std::uint64_t seed) {
  const std::size_t n = x.size();
  std::vector<double> pooled(x);
  pooled.insert(pooled.end(), y.begin(), y.end());
  std::vector<double> px(n), py(y.size());
  auto stat = [&](const std::vector<std::size_t>& idx) {
    for (std::size_t i = 0; i < n; ++i) px[i] = pooled[idx[i]];
    for (std::size_t i = 0; i < py.size(); ++i) py[i] = pooled[idx[n + i]];
    return statistic(px, py);
  };
  return permutation_pvalue_indexed(pooled.size(), stat, n_perm, seed);
}

struct MmdTestResult {
  double mmd2 = 0.0;
  double pvalue = 1.0;
  double sigma2 = 0.0;
};

// MMD permutation test on a precomputed Gram matrix: the kernel is evaluated
// once per pooled pair and every permutation only re-indexes it. Produces
// bit-identical results to running mmd2_unbiased through the generic
// permutation_pvalue with the same seed, at a fraction of the cost.
inline MmdTestResult mmd_permutation_test(const util::Matrix& x, const util::Matrix& y,
                                          double sigma2, std::size_t n_perm,
                                          std::uint64_t seed) {
  const std::size_t n = x.rows();
  const std::size_t m = y.rows();
  if (n < 2 || m < 2) throw Error("SampleTooSmall", "unbiased MMD needs n, m >= 2");
  const std::size_t total = n + m;
  util::Matrix pooled(total, x.cols());
  for (std::size_t i = 0; i < n; ++i)
    std::copy(x.row(i).begin(), x.row(i).end(), pooled.row(i).begin());
  for (std::size_t i = 0; i < m; ++i)
    std::copy(y.row(i).begin(), y.row(i).end(), pooled.row(n + i).begin());

  std::vector<double> gram(total * total);
  for (std::size_t i = 0; i < total; ++i) {
    gram[i * total + i] = 1.0;
    for (std::size_t j = i + 1; j < total; ++j) {
      double k = rbf_kernel(pooled.row(i), pooled.row(j), sigma2);
      gram[i * total + j] = k;
      gram[j * total + i] = k;
    }
  }

  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  auto stat = [&](const std::vector<std::size_t>& idx) {
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = gram.data() + idx[i] * total;
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) sxx += row[idx[j]];
    }
    double syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double* row = gram.data() + idx[n + i] * total;
      for (std::size_t j = 0; j < m; ++j)
        if (i != j) syy += row[idx[n + j]];
    }
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = gram.data() + idx[i] * total;
      for (std::size_t j = 0; j < m; ++j) sxy += row[idx[n + j]];
    }
    return sxx / (nn * (nn - 1.0)) + syy / (mm * (mm - 1.0)) - 2.0 * sxy / (nn * mm);
  };

  MmdTestResult result;
  result.sigma2 = sigma2;
  std::vector<std::size_t> identity(total);
  std::iota(identity.begin(), identity.end(), 0);
  result.mmd2 = stat(identity);
  result.pvalue = permutation_pvalue_indexed(total, stat, n_perm, seed);
  return result;
}

}  // namespace monitor::drift
