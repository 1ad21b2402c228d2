#pragma once

#include <vector>

#include "monitor/core/schema.hpp"
#include "monitor/util/matrix.hpp"

namespace monitor::drift {

// Dense encoding of records for the multivariate tests and detectors:
// numerical features pass through in schema order, categorical features
// expand to one-hot indicator columns.
inline std::size_t encoded_dim(const FeatureSchema& schema) {
  std::size_t d = 0;
  for (const auto& f : schema.features())
    d += f.kind == FeatureKind::Numerical ? 1 : f.categories.size();
  return d;
}

inline void encode_record_into(const Record& r, const FeatureSchema& schema,
                               std::span<double> out) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const Feature& f = schema.at(i);
    if (f.kind == FeatureKind::Numerical) {
      out[j++] = as_number(r.values[i]);
    } else {
      for (std::size_t c = 0; c < f.categories.size(); ++c)
        out[j + c] = f.categories[c] == as_token(r.values[i]) ? 1.0 : 0.0;
      j += f.categories.size();
    }
  }
}

inline util::Matrix encode_records(const std::vector<Record>& records,
                                   const FeatureSchema& schema) {
  util::Matrix m(records.size(), encoded_dim(schema));
  for (std::size_t i = 0; i < records.size(); ++i)
    encode_record_into(records[i], schema, m.row(i));
  return m;
}

}  // namespace monitor::drift
