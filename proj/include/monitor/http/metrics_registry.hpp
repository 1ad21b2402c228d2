#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace monitor::http {

// Minimal Prometheus-style instrumentation of the monitor itself: named
// counters and one-shot latency histograms, rendered in the text exposition
// format.
class MetricsRegistry {
 public:
  class Counter {
   public:
    void inc(std::uint64_t by = 1) { value_.fetch_add(by, std::memory_order_relaxed); }
    std::uint64_t value() const { return value_.load(std::memory_order_relaxed); }

   private:
    std::atomic<std::uint64_t> value_{0};
  };

  class Histogram {
   public:
    explicit Histogram(std::vector<double> bounds) : bounds_(std::move(bounds)) {
      counts_ = std::vector<std::atomic<std::uint64_t>>(bounds_.size() + 1);
    }

    void observe(double v) {
      std::size_t i = 0;
      while (i < bounds_.size() && v > bounds_[i]) ++i;
      counts_[i].fetch_add(1, std::memory_order_relaxed);
      double expected = sum_.load(std::memory_order_relaxed);
      while (!sum_.compare_exchange_weak(expected, expected + v)) {
      }
    }

    const std::vector<double>& bounds() const { return bounds_; }
    std::uint64_t bucket(std::size_t i) const { return counts_[i].load(); }
    double sum() const { return sum_.load(); }

   private:
    std::vector<double> bounds_;
    std::vector<std::atomic<std::uint64_t>> counts_;
    std::atomic<double> sum_{0.0};
  };

  Counter& counter(const std::string& name, const std::string& help) {
    std::lock_guard lock(mutex_);
    auto& slot = counters_[name];
    if (!slot.counter) slot = {std::make_unique<Counter>(), help};
    return *slot.counter;
  }

  Histogram& histogram(const std::string& name, const std::string& help,
                       std::vector<double> bounds) {
    std::lock_guard lock(mutex_);
    auto& slot = histograms_[name];
    if (!slot.histogram) slot = {std::make_unique<Histogram>(std::move(bounds)), help};
    return *slot.histogram;
  }

  std::string expose() const;

 private:
  struct CounterSlot {
    std::unique_ptr<Counter> counter;
    std::string help;
  };
  struct HistogramSlot {
    std::unique_ptr<Histogram> histogram;
    std::string help;
  };

  mutable std::mutex mutex_;
  std::map<std::string, CounterSlot> counters_;
  std::map<std::string, HistogramSlot> histograms_;
};

// Latency buckets in milliseconds for the prediction path.
std::vector<double> default_latency_buckets_ms();

}  // namespace monitor::http
