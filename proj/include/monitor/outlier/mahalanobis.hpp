#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "monitor/core/errors.hpp"
#include "monitor/util/matrix.hpp"

namespace monitor::outlier {

namespace detail {

// Cholesky factorization A = L L^T of a symmetric positive definite matrix.
// Throws when not positive definite.
inline util::Matrix cholesky(const util::Matrix& a) {
  const std::size_t n = a.rows();
  util::Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a.at(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
      if (i == j) {
        if (s <= 0.0) throw Error("NotReady", "covariance not positive definite");
        l.at(i, i) = std::sqrt(s);
      } else {
        l.at(i, j) = s / l.at(j, j);
      }
    }
  }
  return l;
}

// Solves L z = b by forward substitution; |z|^2 is then b^T (L L^T)^-1 b.
inline double quadratic_form_via_cholesky(const util::Matrix& l, std::span<const double> b) {
  const std::size_t n = l.rows();
  std::vector<double> z(n);
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l.at(i, k) * z[k];
    z[i] = s / l.at(i, i);
    q += z[i] * z[i];
  }
  return q;
}

}  // namespace detail

// Online mean/covariance with Mahalanobis scoring: the stateful detector,
// updated with every live instance. Covariance uses the single-pass comoment
// recurrence and matches batch statistics of the full stream.
class MahalanobisState {
 public:
  explicit MahalanobisState(std::size_t dim, double epsilon_scale = 1e-6)
      : dim_(dim),
        epsilon_scale_(epsilon_scale),
        mean_(dim, 0.0),
        comoment_(dim, dim) {}

  // Warm start from known moments (e.g. a reference set fitted offline).
  static MahalanobisState from_moments(std::span<const double> mean,
                                       const util::Matrix& covariance, std::uint64_t count,
                                       double epsilon_scale = 1e-6) {
    MahalanobisState s(mean.size(), epsilon_scale);
    s.count_ = count;
    s.mean_.assign(mean.begin(), mean.end());
    double scale = count >= 2 ? static_cast<double>(count - 1) : 1.0;
    for (std::size_t i = 0; i < s.dim_; ++i)
      for (std::size_t j = 0; j < s.dim_; ++j)
        s.comoment_.at(i, j) = covariance.at(i, j) * scale;
    return s;
  }

  void update(std::span<const double> x) {
    if (x.size() != dim_) throw Error("DimensionMismatch", "vector dimension mismatch");
    for (double v : x)
      if (!std::isfinite(v)) throw Error("NonFiniteNumber", "non-finite component");
    ++count_;
    const double n = static_cast<double>(count_);
    std::vector<double> delta(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      delta[i] = x[i] - mean_[i];
      mean_[i] += delta[i] / n;
    }
    // comoment += delta_old * delta_new^T, symmetric by construction
    for (std::size_t i = 0; i < dim_; ++i) {
      double d_new_i = x[i] - mean_[i];
      for (std::size_t j = 0; j < dim_; ++j) comoment_.at(i, j) += delta[j] * d_new_i;
    }
  }

  std::uint64_t count() const { return count_; }
  std::size_t dim() const { return dim_; }
  const std::vector<double>& mean() const { return mean_; }

  // Sample covariance, divisor n-1.
  util::Matrix covariance() const {
    if (count_ < 2) throw Error("NotReady", "covariance needs at least 2 observations");
    util::Matrix c(dim_, dim_);
    const double scale = 1.0 / static_cast<double>(count_ - 1);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) c.at(i, j) = comoment_.at(i, j) * scale;
    return c;
  }

  bool ready() const { return count_ >= dim_ + 2; }

  // sqrt((x-mean)^T (Sigma + eps*I)^-1 (x-mean)) with eps =
  // epsilon_scale * trace(Sigma)/d, via Cholesky. Scoring is gated until
  // count >= d+2 so the covariance is meaningfully estimated.
  double score(std::span<const double> x) const {
    if (x.size() != dim_) throw Error("DimensionMismatch", "vector dimension mismatch");
    if (!ready())
      throw Error("NotReady", "need at least d+2 observations before scoring");
    util::Matrix sigma = covariance();
    double trace = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) trace += sigma.at(i, i);
    double eps = epsilon_scale_ * trace / static_cast<double>(dim_);
    for (std::size_t i = 0; i < dim_; ++i) sigma.at(i, i) += eps;
    util::Matrix l = detail::cholesky(sigma);
    std::vector<double> centered(dim_);
    for (std::size_t i = 0; i < dim_; ++i) centered[i] = x[i] - mean_[i];
    return std::sqrt(detail::quadratic_form_via_cholesky(l, centered));
  }

 private:
  std::size_t dim_;
  double epsilon_scale_;
  std::uint64_t count_ = 0;
  std::vector<double> mean_;
  util::Matrix comoment_;  // sum of outer products of deviations
};

}  // namespace monitor::outlier
