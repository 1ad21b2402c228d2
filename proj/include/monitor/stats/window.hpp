#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "monitor/core/errors.hpp"

namespace monitor::stats {

// Window scope: the whole deployment lifetime, or tumbling windows by
// observation count or by event-time duration.
struct WindowScope {
  enum class Kind { Lifetime, TumblingCount, TumblingDuration };
  Kind kind = Kind::Lifetime;
  std::uint64_t count = 0;        // TumblingCount
  std::int64_t duration_ms = 0;   // TumblingDuration

  static WindowScope lifetime() { return {}; }
  static WindowScope tumbling_count(std::uint64_t n) {
    if (n == 0) throw Error("BadConfig", "window count must be positive");
    return {Kind::TumblingCount, n, 0};
  }
  static WindowScope tumbling_duration(std::int64_t ms) {
    if (ms <= 0) throw Error("BadConfig", "window duration must be positive");
    return {Kind::TumblingDuration, 0, ms};
  }
};

// Wraps a sketch with tumbling-window rotation. Rotation happens on the
// first observation past the boundary; idle periods emit no empty windows
// but the sequence number advances over them, so gaps stay visible.
template <typename Sketch>
class Windowed {
 public:
  explicit Windowed(WindowScope scope, Sketch empty = Sketch())
      : scope_(scope), empty_(empty), current_(empty) {}

  // Applies `insert` to the current window's sketch, rotating first if this
  // observation crosses the window boundary. Duration windows tile a fixed
  // grid anchored at the first observation. Timestamps must be
  // non-decreasing up to a 1s regression tolerance.
  template <typename InsertFn>
  void observe(std::int64_t timestamp_ms, InsertFn&& insert) {
    if (has_time_ && timestamp_ms < last_ts_ - 1000)
      throw Error("ClockRegression", "timestamp moved backwards by more than 1s");
    if (!has_time_) window_start_ = timestamp_ms;
    maybe_rotate(timestamp_ms);
    if (!has_time_ || timestamp_ms > last_ts_) last_ts_ = timestamp_ms;
    has_time_ = true;
    insert(current_);
    ++count_in_window_;
  }

  const Sketch& current() const { return current_; }
  const std::optional<Sketch>& last_completed() const { return last_; }
  std::uint64_t sequence() const { return sequence_; }
  std::uint64_t last_completed_sequence() const { return last_sequence_; }
  std::uint64_t count_in_window() const { return count_in_window_; }

 private:
  void maybe_rotate(std::int64_t timestamp_ms) {
    switch (scope_.kind) {
      case WindowScope::Kind::Lifetime:
        return;
      case WindowScope::Kind::TumblingCount:
        if (count_in_window_ >= scope_.count) rotate(1, timestamp_ms);
        return;
      case WindowScope::Kind::TumblingDuration:
        if (has_time_ && timestamp_ms >= window_start_ + scope_.duration_ms) {
          auto skipped = static_cast<std::uint64_t>(
              (timestamp_ms - window_start_) / scope_.duration_ms);
          rotate(skipped, window_start_ + static_cast<std::int64_t>(skipped) *
                                              scope_.duration_ms);
        }
        return;
    }
  }

  void rotate(std::uint64_t steps, std::int64_t new_start) {
    last_ = std::move(current_);
    last_sequence_ = sequence_;
    current_ = empty_;
    sequence_ += steps;
    count_in_window_ = 0;
    window_start_ = new_start;
  }

  WindowScope scope_;
  Sketch empty_;
  Sketch current_;
  std::optional<Sketch> last_;
  std::uint64_t sequence_ = 0;
  std::uint64_t last_sequence_ = 0;
  std::uint64_t count_in_window_ = 0;
  std::int64_t window_start_ = 0;
  std::int64_t last_ts_ = 0;
  bool has_time_ = false;
};

}  // namespace monitor::stats
