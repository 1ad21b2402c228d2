#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "monitor/core/errors.hpp"
#include "monitor/stats/frequency.hpp"

namespace monitor::drift {

namespace detail {

// Regularized lower incomplete gamma P(a,x): series for x < a+1, continued
// fraction for the complement otherwise.
inline double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw Error("BadArgument", "gamma_p domain");
  if (x == 0.0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Lentz continued fraction for Q(a,x).
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

}  // namespace detail

// Upper tail of the chi-square distribution with `dof` degrees of freedom.
inline double chi2_sf(double statistic, std::size_t dof) {
  if (statistic <= 0.0) return 1.0;
  double p = 1.0 - detail::gamma_p(static_cast<double>(dof) / 2.0, statistic / 2.0);
  return std::clamp(p, 0.0, 1.0);
}

// Chi-square homogeneity test over the 2xC contingency table formed by two
// frequency tables sharing a category set. Categories with pooled count 0
// are dropped; fewer than two usable categories cannot be tested.
inline std::pair<double, double> chi2_two_sample(const stats::FrequencyTable& ref,
                                                 const stats::FrequencyTable& test) {
  if (ref.categories() != test.categories())
    throw Error("DegenerateTable", "frequency tables declare different categories");
  std::vector<std::size_t> usable;
  for (std::size_t c = 0; c < ref.categories().size(); ++c)
    if (ref.counts()[c] + test.counts()[c] > 0) usable.push_back(c);
  if (usable.size() < 2)
    throw Error("DegenerateTable", "need at least 2 categories with observations");
  double ref_total = 0.0, test_total = 0.0;
  for (std::size_t c : usable) {
    ref_total += static_cast<double>(ref.counts()[c]);
    test_total += static_cast<double>(test.counts()[c]);
  }
  if (ref_total == 0.0 || test_total == 0.0)
    throw Error("EmptySample", "chi-square needs observations in both samples");
  const double grand = ref_total + test_total;
  double stat = 0.0;
  for (std::size_t c : usable) {
    double pooled = static_cast<double>(ref.counts()[c] + test.counts()[c]);
    double exp_ref = ref_total * pooled / grand;
    double exp_test = test_total * pooled / grand;
    double dr = static_cast<double>(ref.counts()[c]) - exp_ref;
    double dt = static_cast<double>(test.counts()[c]) - exp_test;
    stat += dr * dr / exp_ref + dt * dt / exp_test;
  }
  return {stat, chi2_sf(stat, usable.size() - 1)};
}

}  // namespace monitor::drift
