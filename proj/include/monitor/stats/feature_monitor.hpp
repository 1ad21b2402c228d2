#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "monitor/core/events.hpp"
#include "monitor/core/schema.hpp"
#include "monitor/stats/frequency.hpp"
#include "monitor/stats/histogram.hpp"
#include "monitor/stats/moments.hpp"
#include "monitor/stats/window.hpp"

namespace monitor::stats {

// Sketch state for one feature: moments + histogram for numerical features,
// frequencies for categorical ones.
struct FeatureSketch {
  MomentAccumulator moments;
  StreamingHistogram histogram{64};
  FrequencyTable frequencies;
  bool categorical = false;

  void update(const Value& v) {
    if (categorical)
      frequencies.update(as_token(v));
    else {
      moments.update(as_number(v));
      histogram.update(as_number(v));
    }
  }

  json snapshot() const {
    json j;
    if (categorical) {
      j["count"] = frequencies.total();
      json freq = json::object();
      for (std::size_t i = 0; i < frequencies.categories().size(); ++i)
        freq[frequencies.categories()[i]] = frequencies.counts()[i];
      j["frequencies"] = freq;
    } else {
      j["count"] = moments.count();
      j["mean"] = moments.count() >= 1 ? json(moments.mean()) : json();
      j["variance"] = moments.count() >= 2 ? json(moments.variance()) : json();
      j["min"] = moments.count() >= 1 ? json(moments.min()) : json();
      j["max"] = moments.count() >= 1 ? json(moments.max()) : json();
      json bins = json::array();
      for (const auto& b : histogram.bins()) bins.push_back({b.centroid, b.count});
      j["histogram"] = bins;
    }
    return j;
  }
};

// All features of one schema, advanced together so every feature shares one
// window clock.
class SchemaSketch {
 public:
  SchemaSketch() = default;
  explicit SchemaSketch(const FeatureSchema& schema, std::size_t histogram_bins = 64) {
    features_.reserve(schema.size());
    for (const auto& f : schema.features()) {
      FeatureSketch s;
      s.histogram = StreamingHistogram(histogram_bins);
      if (f.kind == FeatureKind::Categorical) {
        s.categorical = true;
        s.frequencies = FrequencyTable(f.categories);
      }
      features_.push_back(std::move(s));
    }
  }

  void update(const Record& r) {
    for (std::size_t i = 0; i < features_.size(); ++i) features_[i].update(r.values[i]);
  }

  const FeatureSketch& feature(std::size_t i) const { return features_[i]; }
  std::size_t size() const { return features_.size(); }

 private:
  std::vector<FeatureSketch> features_;
};

// Lifetime sketch plus one configured tumbling window over the live record
// stream. Single writer; snapshots are plain copies taken by the caller.
class FeatureMonitor {
 public:
  FeatureMonitor() = default;
  FeatureMonitor(const FeatureSchema& schema, WindowScope scope, std::size_t histogram_bins = 64)
      : schema_(schema),
        lifetime_(WindowScope::lifetime(), SchemaSketch(schema, histogram_bins)),
        windowed_(scope, SchemaSketch(schema, histogram_bins)) {}

  void observe(TimestampMs ts, const Record& r) {
    lifetime_.observe(ts, [&](SchemaSketch& s) { s.update(r); });
    windowed_.observe(ts, [&](SchemaSketch& s) { s.update(r); });
  }

  // Snapshot of one feature across the three scopes the gateway serves.
  json feature_snapshot(std::size_t index) const {
    json j;
    j["feature"] = schema_.at(index).name;
    j["lifetime"] = lifetime_.current().feature(index).snapshot();
    json current = windowed_.current().feature(index).snapshot();
    current["window"] = windowed_.sequence();
    j["current_window"] = current;
    if (windowed_.last_completed()) {
      json last = windowed_.last_completed()->feature(index).snapshot();
      last["window"] = windowed_.last_completed_sequence();
      j["last_window"] = last;
    } else {
      j["last_window"] = nullptr;
    }
    return j;
  }

  json snapshot() const {
    json features = json::array();
    for (std::size_t i = 0; i < schema_.size(); ++i) features.push_back(feature_snapshot(i));
    return json{{"features", features}};
  }

  const FeatureSchema& schema() const { return schema_; }
  std::uint64_t window_sequence() const { return windowed_.sequence(); }

 private:
  FeatureSchema schema_;
  Windowed<SchemaSketch> lifetime_{WindowScope::lifetime()};
  Windowed<SchemaSketch> windowed_{WindowScope::lifetime()};
};

}  // namespace monitor::stats
