#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "monitor/core/errors.hpp"

namespace monitor::stats {

// Single-pass moments (Welford update, Chan merge). Merging shards is the
// mechanism for combining accumulators from scaled-out writers.
class MomentAccumulator {
 public:
  void update(double x) {
    ++count_;
    double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
    if (x < min_) min_ = x;
    if (x > max_) max_ = x;
  }

  void merge(const MomentAccumulator& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    double na = static_cast<double>(count_);
    double nb = static_cast<double>(other.count_);
    double delta = other.mean_ - mean_;
    std::uint64_t n = count_ + other.count_;
    mean_ += delta * nb / static_cast<double>(n);
    m2_ += other.m2_ + delta * delta * na * nb / static_cast<double>(n);
    count_ = n;
    if (other.min_ < min_) min_ = other.min_;
    if (other.max_ > max_) max_ = other.max_;
  }

  std::uint64_t count() const { return count_; }

  double mean() const {
    if (count_ == 0) throw Error("EmptySketch", "mean of empty accumulator");
    return mean_;
  }

  // Sample variance, divisor n-1. Undefined below two observations.
  double variance() const {
    if (count_ < 2) throw Error("EmptySketch", "variance needs at least 2 observations");
    return m2_ / static_cast<double>(count_ - 1);
  }

  double stddev() const { return std::sqrt(variance()); }
  double m2() const { return m2_; }

  double min() const {
    if (count_ == 0) throw Error("EmptySketch", "min of empty accumulator");
    return min_;
  }

  double max() const {
    if (count_ == 0) throw Error("EmptySketch", "max of empty accumulator");
    return max_;
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
};

}  // namespace monitor::stats
