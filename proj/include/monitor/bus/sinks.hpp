#pragma once

#include <atomic>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "monitor/bus/broker.hpp"

namespace monitor::bus {

// Appends one JSON document per matching event. Write failures increment an
// error counter and never propagate into the broker.
class JsonlSink {
 public:
  explicit JsonlSink(const std::string& path) : state_(std::make_shared<State>()) {
    state_->out.open(path, std::ios::app);
    state_->path = path;
  }

  void operator()(const Event& e) {
    if (!state_->out) {
      ++state_->errors;
      return;
    }
    state_->out << e.to_json().dump() << '\n';
    state_->out.flush();
    if (!state_->out) ++state_->errors;
  }

  std::uint64_t errors() const { return state_->errors; }
  const std::string& path() const { return state_->path; }

 private:
  struct State {
    std::ofstream out;
    std::string path;
    std::atomic<std::uint64_t> errors{0};
  };
  std::shared_ptr<State> state_;
};

class StdoutSink {
 public:
  void operator()(const Event& e) { std::cout << e.to_json().dump() << '\n'; }
};

// Feeds matching events onward to a file, reusing the trigger machinery.
// Returns the trigger id; the caller keeps the sink handle to read its
// error counter.
inline std::size_t chain_sink(Broker& broker, std::string name, TriggerFilter filter,
                              JsonlSink sink, std::size_t queue_capacity = 4096) {
  return broker.register_trigger(std::move(name), std::move(filter), std::move(sink),
                                 queue_capacity);
}

}  // namespace monitor::bus
