#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "monitor/core/errors.hpp"

namespace monitor::drift {

// Bonferroni: reject p_i iff p_i <= alpha / K.
inline std::vector<bool> correct_bonferroni(const std::vector<double>& pvalues, double alpha) {
  if (pvalues.empty()) return {};
  double threshold = alpha / static_cast<double>(pvalues.size());
  std::vector<bool> reject(pvalues.size());
  for (std::size_t i = 0; i < pvalues.size(); ++i) reject[i] = pvalues[i] <= threshold;
  return reject;
}

// Benjamini-Hochberg step-up: with p_(1) <= ... <= p_(K), find the largest i
// with p_(i) <= (i/K)*alpha and reject every hypothesis whose p-value is at
// most that p_(i). Ties reject together. Decisions come back in input order.
inline std::vector<bool> correct_fdr_bh(const std::vector<double>& pvalues, double alpha) {
  if (pvalues.empty()) return {};
  const std::size_t k = pvalues.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
  double cutoff = -1.0;
  for (std::size_t rank = k; rank >= 1; --rank) {
    double p = pvalues[order[rank - 1]];
    if (p <= static_cast<double>(rank) / static_cast<double>(k) * alpha) {
      cutoff = p;
      break;
    }
  }
  std::vector<bool> reject(k, false);
  if (cutoff >= 0.0)
    for (std::size_t i = 0; i < k; ++i) reject[i] = pvalues[i] <= cutoff;
  return reject;
}

}  // namespace monitor::drift
