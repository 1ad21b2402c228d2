#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "monitor/core/errors.hpp"
#include "monitor/core/reference.hpp"
#include "monitor/util/matrix.hpp"

namespace monitor::outlier {

// Pre-trained exact k-nearest-neighbour distance detector. Fit freezes the
// reference: numerical features are z-scored with reference mean/std
// (zero-variance features drop out of the metric), categorical features are
// one-hot encoded. The score of a point is its mean Euclidean distance to
// the k nearest reference points. Immutable after fit.
class KnnDetector {
 public:
  static KnnDetector fit(const ReferenceSet& reference, std::size_t k) {
    if (k == 0 || reference.size() <= k)
      throw Error("InsufficientReference",
                  "need reference size > k >= 1, got size " +
                      std::to_string(reference.size()) + ", k " + std::to_string(k));
    KnnDetector d;
    d.k_ = k;
    d.schema_ = reference.schema;

    // Per-numerical-feature standardization; zero-variance features keep a
    // flag so they are skipped during encoding.
    for (std::size_t i = 0; i < d.schema_.size(); ++i) {
      if (d.schema_.at(i).kind != FeatureKind::Numerical) continue;
      double mean = 0.0;
      for (const auto& r : reference.records) mean += as_number(r.values[i]);
      mean /= static_cast<double>(reference.size());
      double var = 0.0;
      for (const auto& r : reference.records) {
        double c = as_number(r.values[i]) - mean;
        var += c * c;
      }
      var /= static_cast<double>(reference.size());
      d.num_mean_.push_back(mean);
      d.num_std_.push_back(std::sqrt(var));
    }

    std::size_t dim = 0;
    std::size_t num_idx = 0;
    for (const auto& f : d.schema_.features()) {
      if (f.kind == FeatureKind::Numerical) {
        if (d.num_std_[num_idx] > 0.0) ++dim;
        ++num_idx;
      } else {
        dim += f.categories.size();
      }
    }
    if (dim == 0) throw Error("InsufficientReference", "no usable features after fit");

    d.points_ = util::Matrix(reference.size(), dim);
    for (std::size_t r = 0; r < reference.size(); ++r)
      d.encode(reference.records[r], d.points_.row(r));
    return d;
  }

  std::size_t k() const { return k_; }
  std::size_t reference_size() const { return points_.rows(); }

  double score(const Record& record) const {
    std::vector<double> encoded(points_.cols());
    encode(record, encoded);
    return score_encoded(encoded, points_.rows());
  }

  // Leave-self-out scores of every reference point, for threshold
  // calibration: point r's own row is excluded from its neighbour set.
  std::vector<double> reference_scores_loo() const {
    std::vector<double> scores(points_.rows());
    for (std::size_t r = 0; r < points_.rows(); ++r)
      scores[r] = score_encoded(points_.row(r), r);
    return scores;
  }

 private:
  KnnDetector() = default;

  void encode(const Record& record, std::span<double> out) const {
    if (record.values.size() != schema_.size())
      throw Error("DimensionMismatch", "record arity differs from fitted schema");
    std::size_t j = 0, num_idx = 0;
    for (std::size_t i = 0; i < schema_.size(); ++i) {
      const Feature& f = schema_.at(i);
      if (f.kind == FeatureKind::Numerical) {
        if (num_std_[num_idx] > 0.0)
          out[j++] = (as_number(record.values[i]) - num_mean_[num_idx]) / num_std_[num_idx];
        ++num_idx;
      } else {
        for (std::size_t c = 0; c < f.categories.size(); ++c)
          out[j + c] = f.categories[c] == as_token(record.values[i]) ? 1.0 : 0.0;
        j += f.categories.size();
      }
    }
  }

  // Mean distance to the k nearest reference rows, excluding row
  // `skip_row` (pass rows() to exclude nothing).
  double score_encoded(std::span<const double> x, std::size_t skip_row) const {
    std::vector<double> d2;
    d2.reserve(points_.rows());
    for (std::size_t r = 0; r < points_.rows(); ++r) {
      if (r == skip_row) continue;
      d2.push_back(util::squared_distance(points_.row(r), x));
    }
    std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(k_ - 1), d2.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < k_; ++i) sum += std::sqrt(d2[i]);
    return sum / static_cast<double>(k_);
  }

  std::size_t k_ = 0;
  FeatureSchema schema_;
  std::vector<double> num_mean_;
  std::vector<double> num_std_;
  util::Matrix points_;
};

}  // namespace monitor::outlier
