#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "monitor/core/errors.hpp"

namespace monitor::stats {

// Approximate online histogram: at most `max_bins` (centroid, count) bins,
// kept sorted; an insert past capacity merges the two closest centroids into
// their count-weighted mean.
class StreamingHistogram {
 public:
  struct Bin {
    double centroid;
    std::uint64_t count;
  };

  explicit StreamingHistogram(std::size_t max_bins = 64) : max_bins_(max_bins) {
    if (max_bins_ == 0) throw Error("BadConfig", "histogram needs at least one bin");
  }

  void update(double x) {
    ++total_;
    auto it = std::lower_bound(bins_.begin(), bins_.end(), x,
                               [](const Bin& b, double v) { return b.centroid < v; });
    if (it != bins_.end() && it->centroid == x) {
      ++it->count;
      return;
    }
    bins_.insert(it, Bin{x, 1});
    if (bins_.size() > max_bins_) merge_closest();
  }

  // Quantile by linear interpolation over the multiset implied by the bins
  // (count_i copies of centroid_i): q=0 gives the lowest centroid, q=1 the
  // highest, monotone in between.
  double quantile(double q) const {
    if (total_ == 0) throw Error("EmptySketch", "quantile of empty histogram");
    if (q <= 0.0) return bins_.front().centroid;
    if (q >= 1.0) return bins_.back().centroid;
    double pos = q * static_cast<double>(total_ - 1);
    auto lo_rank = static_cast<std::uint64_t>(pos);
    double frac = pos - static_cast<double>(lo_rank);
    double lo_val = value_at_rank(lo_rank);
    if (frac == 0.0) return lo_val;
    double hi_val = value_at_rank(lo_rank + 1);
    return lo_val + frac * (hi_val - lo_val);
  }

  const std::vector<Bin>& bins() const { return bins_; }
  std::uint64_t total() const { return total_; }
  std::size_t max_bins() const { return max_bins_; }

 private:
  void merge_closest() {
    std::size_t best = 0;
    double best_gap = bins_[1].centroid - bins_[0].centroid;
    for (std::size_t i = 1; i + 1 < bins_.size(); ++i) {
      double gap = bins_[i + 1].centroid - bins_[i].centroid;
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    Bin& a = bins_[best];
    const Bin& b = bins_[best + 1];
    double total = static_cast<double>(a.count + b.count);
    a.centroid = (a.centroid * static_cast<double>(a.count) +
                  b.centroid * static_cast<double>(b.count)) /
                 total;
    a.count += b.count;
    bins_.erase(bins_.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }

  double value_at_rank(std::uint64_t rank) const {  // 0-based rank in the multiset
    std::uint64_t cum = 0;
    for (const auto& b : bins_) {
      cum += b.count;
      if (rank < cum) return b.centroid;
    }
    return bins_.back().centroid;
  }

  std::size_t max_bins_;
  std::vector<Bin> bins_;
  std::uint64_t total_ = 0;
};

}  // namespace monitor::stats
