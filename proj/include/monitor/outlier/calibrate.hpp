#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "monitor/core/errors.hpp"
#include "monitor/util/quantile.hpp"

namespace monitor::outlier {

// Threshold = empirical q-quantile (linear interpolation) of the reference
// scores, normally the leave-self-out scores from the fitted detector.
inline double calibrate_threshold(const std::vector<double>& scores, double q) {
  if (scores.empty()) throw Error("EmptyScores", "cannot calibrate on zero scores");
  if (!(q > 0.0 && q < 1.0)) throw Error("BadArgument", "percentile must lie in (0,1)");
  return util::quantile(scores, q);
}

struct OutlierVerdict {
  std::string request_id;
  std::string detector;
  double score = 0.0;
  double threshold = 0.0;
  bool is_outlier = false;

  nlohmann::json to_json() const {
    return nlohmann::json{{"request_id", request_id},
                          {"detector", detector},
                          {"score", score},
                          {"threshold", threshold},
                          {"is_outlier", is_outlier}};
  }
};

inline OutlierVerdict make_verdict(std::string request_id, std::string detector, double score,
                                   double threshold) {
  return OutlierVerdict{std::move(request_id), std::move(detector), score, threshold,
                        score > threshold};
}

}  // namespace monitor::outlier
