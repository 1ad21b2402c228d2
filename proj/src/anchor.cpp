#include "monitor/explain/anchor.hpp"

#include <algorithm>
#include <cmath>

#include "monitor/core/events.hpp"
#include "monitor/util/quantile.hpp"
#include "monitor/util/rng.hpp"

namespace monitor::explain {

json Predicate::to_json() const {
  json condition;
  if (categorical) {
    condition = json{{"equals", token}};
  } else {
    condition = json{{"in_bin", json::array({std::isinf(lower) ? json() : json(lower),
                                             std::isinf(upper) ? json() : json(upper)})}};
  }
  return json{{"feature", feature_name}, {"condition", condition}};
}

json AnchorExplanation::to_json() const {
  json preds = json::array();
  for (const auto& p : predicates) preds.push_back(p.to_json());
  return json{{"predicates", preds},
              {"precision", precision},
              {"precision_samples", precision_samples},
              {"coverage", coverage},
              {"predicted_class", predicted_class},
              {"queries_used", queries_used},
              {"converged", converged}};
}

std::vector<Predicate> discretize(const Record& instance, const ReferenceSet& reference) {
  if (reference.records.empty()) throw Error("EmptySample", "reference set is empty");
  const auto& schema = reference.schema;
  std::vector<Predicate> candidates;
  candidates.reserve(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    Predicate p;
    p.feature = i;
    p.feature_name = schema.at(i).name;
    if (schema.at(i).kind == FeatureKind::Categorical) {
      p.categorical = true;
      p.token = as_token(instance.values[i]);
    } else {
      std::vector<double> col;
      col.reserve(reference.size());
      for (const auto& r : reference.records) col.push_back(as_number(r.values[i]));
      std::sort(col.begin(), col.end());
      double q1 = util::quantile_sorted(col, 0.25);
      double q2 = util::quantile_sorted(col, 0.50);
      double q3 = util::quantile_sorted(col, 0.75);
      double v = as_number(instance.values[i]);
      if (q1 == q3) {
        // constant reference feature: one bin covering everything
      } else if (v < q1) {
        p.upper = q1;
      } else if (v < q2) {
        p.lower = q1;
        p.upper = q2;
      } else if (v < q3) {
        p.lower = q2;
        p.upper = q3;
      } else {
        p.lower = q3;
      }
    }
    candidates.push_back(std::move(p));
  }
  return candidates;
}

namespace {

std::vector<Record> perturb(const std::vector<Predicate>& anchor, const Record& instance,
                            const ReferenceSet& reference, std::size_t n_samples,
                            util::Rng& rng) {
  std::vector<bool> anchored(instance.values.size(), false);
  for (const auto& p : anchor) anchored[p.feature] = true;
  std::vector<Record> samples;
  samples.reserve(n_samples);
  const std::size_t n_ref = reference.size();
  for (std::size_t s = 0; s < n_samples; ++s) {
    Record r;
    r.values.reserve(instance.values.size());
    // One row draw per feature, consumed whether the feature is anchored or
    // not, so estimates with the same seed stay coupled across anchors.
    for (std::size_t f = 0; f < instance.values.size(); ++f) {
      std::size_t row = static_cast<std::size_t>(rng.bounded(n_ref));
      r.values.push_back(anchored[f] ? instance.values[f]
                                     : reference.records[row].values[f]);
    }
    samples.push_back(std::move(r));
  }
  return samples;
}

int predicted_class_of(model::ModelClient& client, const Record& r) {
  auto out = client.predict({r});
  if (out.empty() || out.front().empty())
    throw Error("ModelUnavailable", "model returned no output");
  return argmax_label(out.front());
}

}  // namespace

PrecisionEstimate estimate_precision(const std::vector<Predicate>& anchor,
                                     const Record& instance, int instance_class,
                                     model::ModelClient& client, const ReferenceSet& reference,
                                     std::size_t n_samples, std::uint64_t seed) {
  util::Rng rng(seed);
  auto samples = perturb(anchor, instance, reference, n_samples, rng);
  auto outputs = client.predict(samples);
  std::size_t hits = 0;
  for (const auto& out : outputs)
    if (argmax_label(out) == instance_class) ++hits;
  return PrecisionEstimate{static_cast<double>(hits) / static_cast<double>(n_samples),
                           n_samples};
}

double coverage(const std::vector<Predicate>& anchor, const ReferenceSet& reference) {
  if (reference.records.empty()) return 0.0;
  std::size_t covered = 0;
  for (const auto& r : reference.records) {
    bool all = true;
    for (const auto& p : anchor)
      if (!p.holds(r)) {
        all = false;
        break;
      }
    if (all) ++covered;
  }
  return static_cast<double>(covered) / static_cast<double>(reference.size());
}

AnchorExplanation anchor_search(const Record& instance, model::ModelClient& client,
                                const ReferenceSet& reference, const AnchorConfig& config) {
  if (config.samples_per_eval == 0)
    throw Error("BadArgument", "samples_per_eval must be positive");
  if (config.query_budget < config.samples_per_eval + 1)
    throw Error("BadArgument", "query budget below one evaluation");

  AnchorExplanation result;
  std::size_t queries = 0;

  result.predicted_class = predicted_class_of(client, instance);
  queries += 1;

  auto candidates = discretize(instance, reference);
  std::vector<bool> used(candidates.size(), false);

  // Each evaluation re-seeds from the configured seed and an evaluation
  // counter, so the whole search is replayable.
  std::size_t eval_counter = 0;
  auto evaluate = [&](const std::vector<Predicate>& anchor) {
    auto est = estimate_precision(anchor, instance, result.predicted_class, client, reference,
                                  config.samples_per_eval,
                                  util::derive_seed(config.seed, eval_counter++));
    queries += est.samples;
    return est;
  };

  auto initial = evaluate(result.predicates);
  result.precision = initial.precision;
  result.precision_samples = initial.samples;

  // A selection step commits only when every remaining candidate could be
  // evaluated within budget; otherwise the search stops at the last
  // committed anchor.
  while (result.precision < config.precision_target &&
         std::any_of(used.begin(), used.end(), [](bool u) { return !u; })) {
    int best_index = -1;
    PrecisionEstimate best_est;
    bool budget_hit = false;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      if (queries + config.samples_per_eval > config.query_budget) {
        budget_hit = true;
        break;
      }
      auto trial = result.predicates;
      trial.push_back(candidates[c]);
      auto est = evaluate(trial);
      if (best_index < 0 || est.precision > best_est.precision) {
        best_index = static_cast<int>(c);
        best_est = est;
      }
    }
    if (budget_hit || best_index < 0) break;
    used[static_cast<std::size_t>(best_index)] = true;
    result.predicates.push_back(candidates[static_cast<std::size_t>(best_index)]);
    result.precision = best_est.precision;
    result.precision_samples = best_est.samples;
  }

  result.converged = result.precision >= config.precision_target;
  result.coverage = coverage(result.predicates, reference);
  result.queries_used = queries;
  return result;
}

}  // namespace monitor::explain
