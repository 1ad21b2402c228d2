#pragma once

#include <cmath>
#include <cstdint>

#include "monitor/core/errors.hpp"
#include "monitor/util/matrix.hpp"
#include "monitor/util/rng.hpp"

namespace monitor::drift {

// Linear random projection: a d x k matrix of i.i.d. Normal(0, 1/k) entries,
// generated once from a seed so reference and test batches share the exact
// same map. The untrained stand-in for a randomly initialized encoder.
class RandomProjection {
 public:
  RandomProjection(std::size_t input_dim, std::size_t output_dim, std::uint64_t seed)
      : input_dim_(input_dim), output_dim_(output_dim), map_(input_dim, output_dim) {
    if (output_dim == 0 || output_dim > input_dim)
      throw Error("DimensionMismatch", "projection dim must be in [1, input dim]");
    util::Rng rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(output_dim));
    for (std::size_t i = 0; i < input_dim; ++i)
      for (std::size_t j = 0; j < output_dim; ++j) map_.at(i, j) = rng.normal() * scale;
  }

  util::Matrix apply(const util::Matrix& input) const {
    if (input.cols() != input_dim_)
      throw Error("DimensionMismatch", "input has " + std::to_string(input.cols()) +
                                           " columns, projection expects " +
                                           std::to_string(input_dim_));
    util::Matrix out(input.rows(), output_dim_);
    for (std::size_t r = 0; r < input.rows(); ++r) {
      auto in_row = input.row(r);
      auto out_row = out.row(r);
      for (std::size_t i = 0; i < input_dim_; ++i) {
        double v = in_row[i];
        if (v == 0.0) continue;
        const double* map_row = map_.row(i).data();
        for (std::size_t j = 0; j < output_dim_; ++j) out_row[j] += v * map_row[j];
      }
    }
    return out;
  }

  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return output_dim_; }

 private:
  std::size_t input_dim_;
  std::size_t output_dim_;
  util::Matrix map_;
};

inline util::Matrix project_random(const util::Matrix& input, std::size_t k,
                                   std::uint64_t seed) {
  return RandomProjection(input.cols(), k, seed).apply(input);
}

}  // namespace monitor::drift
