#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "monitor/core/schema.hpp"

namespace monitor {

using json = nlohmann::json;

// UTC milliseconds since epoch. Stamped by the gateway at ingress; replay
// uses the stamps recorded in the event log.
using TimestampMs = std::int64_t;

struct PredictionEvent {
  std::string request_id;
  TimestampMs timestamp = 0;
  Record record;
  std::vector<double> model_output;
  std::optional<int> predicted_label;
};

struct FeedbackEvent {
  std::optional<std::string> request_id;
  std::optional<Record> record;
  // Classification feedback carries label indices, regression real values.
  std::optional<double> predicted;
  double truth = 0.0;
  TimestampMs timestamp = 0;
};

inline json value_to_json(const Value& v) {
  if (is_number(v)) return as_number(v);
  return as_token(v);
}

inline json record_to_json(const Record& r) {
  json a = json::array();
  for (const auto& v : r.values) a.push_back(value_to_json(v));
  return a;
}

inline std::vector<RawValue> raw_values_from_json(const json& a) {
  if (!a.is_array()) throw Error("BadPayload", "instance must be an array");
  std::vector<RawValue> raw;
  raw.reserve(a.size());
  for (const auto& v : a) {
    if (v.is_number())
      raw.emplace_back(v.get<double>());
    else if (v.is_string())
      raw.emplace_back(v.get<std::string>());
    else
      throw Error("BadPayload", "instance values must be numbers or strings");
  }
  return raw;
}

inline Record record_from_json(const json& a, const FeatureSchema& schema) {
  return validate_record(raw_values_from_json(a), schema);
}

inline json prediction_to_json(const PredictionEvent& e) {
  json j{{"request_id", e.request_id},
         {"timestamp", e.timestamp},
         {"instance", record_to_json(e.record)},
         {"model_output", e.model_output}};
  if (e.predicted_label) j["predicted_label"] = *e.predicted_label;
  return j;
}

inline PredictionEvent prediction_from_json(const json& j, const FeatureSchema& schema) {
  PredictionEvent e;
  e.request_id = j.at("request_id").get<std::string>();
  e.timestamp = j.at("timestamp").get<TimestampMs>();
  e.record = record_from_json(j.at("instance"), schema);
  e.model_output = j.at("model_output").get<std::vector<double>>();
  if (j.contains("predicted_label") && !j["predicted_label"].is_null())
    e.predicted_label = j["predicted_label"].get<int>();
  return e;
}

inline json feedback_to_json(const FeedbackEvent& e) {
  json j{{"truth", e.truth}, {"timestamp", e.timestamp}};
  if (e.request_id) j["request_id"] = *e.request_id;
  if (e.record) j["instance"] = record_to_json(*e.record);
  if (e.predicted) j["predicted"] = *e.predicted;
  return j;
}

inline FeedbackEvent feedback_from_json(const json& j, const FeatureSchema& schema) {
  FeedbackEvent e;
  if (j.contains("request_id") && !j["request_id"].is_null())
    e.request_id = j["request_id"].get<std::string>();
  if (j.contains("instance") && !j["instance"].is_null())
    e.record = record_from_json(j["instance"], schema);
  if (j.contains("predicted") && !j["predicted"].is_null())
    e.predicted = j["predicted"].get<double>();
  e.truth = j.at("truth").get<double>();
  if (j.contains("timestamp")) e.timestamp = j["timestamp"].get<TimestampMs>();
  if (!e.request_id && !(e.record && e.predicted))
    throw Error("Unresolvable",
                "feedback needs a request_id or an inline (instance, predicted) pair");
  return e;
}

// Probability-vector check used by PredictionEvent validation: entries
// nonnegative and summing to 1 within 1e-6.
inline bool is_probability_vector(const std::vector<double>& v) {
  if (v.empty()) return false;
  double sum = 0.0;
  for (double x : v) {
    if (!(x >= 0.0)) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= 1e-6;
}

inline int argmax_label(const std::vector<double>& output) {
  int best = 0;
  for (std::size_t i = 1; i < output.size(); ++i)
    if (output[i] > output[best]) best = static_cast<int>(i);
  return best;
}

}  // namespace monitor
