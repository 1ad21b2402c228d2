#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "monitor/core/errors.hpp"
#include "monitor/core/events.hpp"
#include "monitor/stats/window.hpp"

namespace monitor::perf {

using json = nlohmann::json;

// Counts indexed [true class][predicted class].
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t classes)
      : classes_(classes), cells_(classes * classes, 0) {}

  void ingest(int predicted, int truth) {
    if (predicted < 0 || truth < 0 || static_cast<std::size_t>(predicted) >= classes_ ||
        static_cast<std::size_t>(truth) >= classes_)
      throw Error("LabelOutOfRange", "label outside [0, " + std::to_string(classes_) + ")");
    ++cells_[static_cast<std::size_t>(truth) * classes_ + static_cast<std::size_t>(predicted)];
    ++total_;
  }

  std::uint64_t cell(std::size_t truth, std::size_t predicted) const {
    return cells_[truth * classes_ + predicted];
  }
  std::uint64_t total() const { return total_; }
  std::size_t classes() const { return classes_; }

  std::uint64_t row_sum(std::size_t truth) const {
    std::uint64_t s = 0;
    for (std::size_t p = 0; p < classes_; ++p) s += cell(truth, p);
    return s;
  }

  std::uint64_t col_sum(std::size_t predicted) const {
    std::uint64_t s = 0;
    for (std::size_t t = 0; t < classes_; ++t) s += cell(t, predicted);
    return s;
  }

  std::uint64_t trace() const {
    std::uint64_t s = 0;
    for (std::size_t c = 0; c < classes_; ++c) s += cell(c, c);
    return s;
  }

 private:
  std::size_t classes_ = 0;
  std::vector<std::uint64_t> cells_;
  std::uint64_t total_ = 0;
};

struct RegressionErrorState {
  std::uint64_t count = 0;
  double sum_abs_error = 0.0;
  double sum_sq_error = 0.0;

  void ingest(double predicted, double truth) {
    if (!std::isfinite(predicted) || !std::isfinite(truth))
      throw Error("TaskMismatch", "regression feedback must be finite reals");
    double e = predicted - truth;
    sum_abs_error += std::abs(e);
    sum_sq_error += e * e;
    ++count;
  }

  double mae() const { return sum_abs_error / static_cast<double>(count); }
  double rmse() const { return std::sqrt(sum_sq_error / static_cast<double>(count)); }
};

// Named metric values for one window. Metrics whose denominator is empty
// (class never predicted / never true) are null and excluded from macro
// averages.
struct MetricSnapshot {
  std::uint64_t window = 0;
  std::uint64_t count = 0;
  json metrics = json::object();

  json to_json() const { return json{{"window", window}, {"count", count}, {"metrics", metrics}}; }
};

// accuracy, per-class precision/recall/F1 and macro-F1 from the matrix.
inline MetricSnapshot classification_report(const ConfusionMatrix& m, std::uint64_t window) {
  if (m.total() == 0) throw Error("EmptyState", "no feedback ingested");
  MetricSnapshot snap;
  snap.window = window;
  snap.count = m.total();
  snap.metrics["accuracy"] =
      static_cast<double>(m.trace()) / static_cast<double>(m.total());
  double f1_sum = 0.0;
  std::size_t f1_classes = 0;
  for (std::size_t c = 0; c < m.classes(); ++c) {
    auto col = m.col_sum(c);
    auto row = m.row_sum(c);
    std::optional<double> precision, recall, f1;
    if (col > 0) precision = static_cast<double>(m.cell(c, c)) / static_cast<double>(col);
    if (row > 0) recall = static_cast<double>(m.cell(c, c)) / static_cast<double>(row);
    if (precision && recall) {
      double denom = *precision + *recall;
      f1 = denom > 0.0 ? 2.0 * *precision * *recall / denom : 0.0;
      f1_sum += *f1;
      ++f1_classes;
    }
    std::string suffix = "_" + std::to_string(c);
    snap.metrics["precision" + suffix] = precision ? json(*precision) : json();
    snap.metrics["recall" + suffix] = recall ? json(*recall) : json();
    snap.metrics["f1" + suffix] = f1 ? json(*f1) : json();
  }
  snap.metrics["macro_f1"] =
      f1_classes > 0 ? json(f1_sum / static_cast<double>(f1_classes)) : json();
  return snap;
}

inline MetricSnapshot classification_report(const ConfusionMatrix& m) {
  return classification_report(m, 0);
}

inline MetricSnapshot regression_report(const RegressionErrorState& s, std::uint64_t window = 0) {
  if (s.count == 0) throw Error("EmptyState", "no feedback ingested");
  MetricSnapshot snap;
  snap.window = window;
  snap.count = s.count;
  snap.metrics["mae"] = s.mae();
  snap.metrics["rmse"] = s.rmse();
  return snap;
}

struct AlertRule {
  std::string metric;
  char comparator = '<';  // alert when value < threshold ('<') or > ('>')
  double threshold = 0.0;
  std::uint64_t min_count = 1;
};

struct Alert {
  std::string rule;
  std::string metric;
  double value = 0.0;
  double threshold = 0.0;
  std::uint64_t window = 0;
  TimestampMs timestamp = 0;

  json to_json() const {
    return json{{"rule", rule},         {"metric", metric}, {"value", value},
                {"threshold", threshold}, {"window", window}, {"timestamp", timestamp}};
  }
};

// One Alert per violated rule. Rules gated by min_count are skipped. Null
// metric values never violate. Unknown metric names are a config error.
inline std::vector<Alert> evaluate_alert_rules(const MetricSnapshot& snapshot,
                                               const std::vector<AlertRule>& rules,
                                               TimestampMs now = 0) {
  std::vector<Alert> alerts;
  for (const auto& rule : rules) {
    if (!snapshot.metrics.contains(rule.metric))
      throw Error("UnknownMetricName", "no metric named '" + rule.metric + "'");
    if (snapshot.count < rule.min_count) continue;
    const json& v = snapshot.metrics[rule.metric];
    if (v.is_null()) continue;
    double value = v.get<double>();
    bool violated = rule.comparator == '<' ? value < rule.threshold : value > rule.threshold;
    if (violated) {
      alerts.push_back(Alert{rule.metric + std::string(1, rule.comparator) +
                                 std::to_string(rule.threshold),
                             rule.metric, value, rule.threshold, snapshot.window, now});
    }
  }
  return alerts;
}

enum class Task { Classification, Regression };

// Stateful feedback consumer: windowed confusion matrix or regression error
// sums, with edge-triggered alerting (a rule fires at most once per window).
class PerformanceTracker {
 public:
  PerformanceTracker() = default;
  PerformanceTracker(Task task, std::size_t classes, stats::WindowScope scope,
                     std::vector<AlertRule> rules)
      : task_(task),
        rules_(std::move(rules)),
        matrix_(scope, ConfusionMatrix(task == Task::Classification ? classes : 0)),
        regression_(scope) {}

  // Ingests one (predicted, truth) pair and returns any newly fired alerts.
  std::vector<Alert> ingest(double predicted, double truth, TimestampMs ts) {
    if (task_ == Task::Classification) {
      double pi, ti;
      if (std::modf(predicted, &pi) != 0.0 || std::modf(truth, &ti) != 0.0)
        throw Error("TaskMismatch", "classification feedback must carry integer labels");
      matrix_.observe(ts, [&](ConfusionMatrix& m) {
        m.ingest(static_cast<int>(predicted), static_cast<int>(truth));
      });
    } else {
      regression_.observe(ts, [&](RegressionErrorState& s) { s.ingest(predicted, truth); });
    }
    ++ingested_;
    return evaluate(ts);
  }

  MetricSnapshot current_report() const {
    if (task_ == Task::Classification)
      return classification_report(matrix_.current(), matrix_.sequence());
    return regression_report(regression_.current(), regression_.sequence());
  }

  std::optional<MetricSnapshot> last_window_report() const {
    if (task_ == Task::Classification) {
      if (!matrix_.last_completed()) return std::nullopt;
      return classification_report(*matrix_.last_completed(), matrix_.last_completed_sequence());
    }
    if (!regression_.last_completed()) return std::nullopt;
    return regression_report(*regression_.last_completed(), regression_.last_completed_sequence());
  }

  std::uint64_t ingested() const { return ingested_; }
  Task task() const { return task_; }

 private:
  std::vector<Alert> evaluate(TimestampMs ts) {
    std::vector<Alert> fired;
    if (rules_.empty()) return fired;
    MetricSnapshot snap = current_report();
    for (auto& a : evaluate_alert_rules(snap, rules_, ts)) {
      auto key = a.rule;
      auto it = fired_window_.find(key);
      if (it != fired_window_.end() && it->second == snap.window) continue;
      fired_window_[key] = snap.window;
      fired.push_back(std::move(a));
    }
    return fired;
  }

  Task task_ = Task::Classification;
  std::vector<AlertRule> rules_;
  stats::Windowed<ConfusionMatrix> matrix_{stats::WindowScope::lifetime()};
  stats::Windowed<RegressionErrorState> regression_{stats::WindowScope::lifetime()};
  std::uint64_t ingested_ = 0;
  std::map<std::string, std::uint64_t> fired_window_;
};

}  // namespace monitor::perf
