#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "monitor/core/reference.hpp"
#include "monitor/model/client.hpp"

namespace monitor::explain {

using json = nlohmann::json;

// One feature condition that holds for the instance being explained:
// membership in a reference-quartile bin for numerical features, token
// equality for categorical ones.
struct Predicate {
  std::size_t feature = 0;
  std::string feature_name;
  bool categorical = false;
  std::string token;                                      // categorical
  double lower = -std::numeric_limits<double>::infinity();  // numerical: [lower, upper)
  double upper = std::numeric_limits<double>::infinity();

  bool holds(const Record& r) const {
    if (categorical) return as_token(r.values[feature]) == token;
    double v = as_number(r.values[feature]);
    return v >= lower && v < upper;
  }

  json to_json() const;
};

struct AnchorExplanation {
  std::vector<Predicate> predicates;
  double precision = 0.0;
  std::size_t precision_samples = 0;
  double coverage = 0.0;
  int predicted_class = 0;
  std::size_t queries_used = 0;
  bool converged = false;

  json to_json() const;
};

struct AnchorConfig {
  double precision_target = 0.95;
  std::size_t samples_per_eval = 200;
  std::size_t query_budget = 10000;
  std::uint64_t seed = 0;
};

// One candidate predicate per feature: the quartile bin (from reference
// Q1/Q2/Q3) containing the instance's value, or equality with its token.
// A constant reference feature yields one degenerate all-covering bin.
std::vector<Predicate> discretize(const Record& instance, const ReferenceSet& reference);

// Monte Carlo precision: perturb the instance n_samples times (anchored
// features pinned, free features resampled per-feature from uniformly
// chosen reference rows) and measure how often the model keeps the
// instance's predicted class. Seeded and reproducible.
struct PrecisionEstimate {
  double precision = 0.0;
  std::size_t samples = 0;
};
PrecisionEstimate estimate_precision(const std::vector<Predicate>& anchor,
                                     const Record& instance, int instance_class,
                                     model::ModelClient& client, const ReferenceSet& reference,
                                     std::size_t n_samples, std::uint64_t seed);

// Exact fraction of reference rows satisfying every predicate.
double coverage(const std::vector<Predicate>& anchor, const ReferenceSet& reference);

// Greedy forward selection: starting from the empty anchor, repeatedly add
// the candidate that maximizes estimated precision (ties go to the lower
// feature index) until the target is met, candidates run out or the query
// budget is spent. A non-converged result carries the best partial anchor.
AnchorExplanation anchor_search(const Record& instance, model::ModelClient& client,
                                const ReferenceSet& reference, const AnchorConfig& config);

}  // namespace monitor::explain
