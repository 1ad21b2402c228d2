#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "monitor/core/errors.hpp"
#include "monitor/core/events.hpp"

namespace monitor::bus {

using json = nlohmann::json;

// The broker's currency: request/response payloads and everything derived
// from them, addressed by (topic, type).
struct Event {
  std::string id;
  std::string topic;
  std::string type;  // "prediction", "feedback", "drift-report", "outlier-verdict", "alert"
  TimestampMs timestamp = 0;
  json payload;

  json to_json() const {
    return json{{"id", id},
                {"topic", topic},
                {"type", type},
                {"timestamp", timestamp},
                {"payload", payload}};
  }

  static Event from_json(const json& j) {
    Event e;
    e.id = j.at("id").get<std::string>();
    e.topic = j.at("topic").get<std::string>();
    e.type = j.at("type").get<std::string>();
    e.timestamp = j.at("timestamp").get<TimestampMs>();
    e.payload = j.at("payload");
    return e;
  }
};

// Matches on topic and/or type; empty fields match anything.
struct TriggerFilter {
  std::string topic;
  std::string type;

  bool matches(const Event& e) const {
    return (topic.empty() || topic == e.topic) && (type.empty() || type == e.type);
  }
};

using Handler = std::function<void(const Event&)>;

struct TriggerCounters {
  std::string name;
  std::uint64_t matched = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t handler_errors = 0;
};

struct BrokerStats {
  std::uint64_t published = 0;
  std::vector<TriggerCounters> triggers;
};

// In-process broker: publish enqueues onto each matching trigger's bounded
// queue and returns; every trigger drains its queue on its own thread, so a
// slow or blocked handler never backs up into the publisher. Overflow drops
// the oldest queued event and counts the drop. Delivery is at-most-once, in
// publish order per trigger.
class Broker {
 public:
  Broker() = default;
  ~Broker() { stop(); }

  Broker(const Broker&) = delete;
  Broker& operator=(const Broker&) = delete;

  // Enqueue-only; returns before any handler runs. Assigns an id when the
  // event carries none.
  void publish(Event event);

  // The handler only ever sees events published after registration.
  std::size_t register_trigger(std::string name, TriggerFilter filter, Handler handler,
                               std::size_t queue_capacity = 1024);

  // Blocks until every queue is empty and every handler idle, or the
  // timeout expires (DrainTimeout). Returns counters consistent with that
  // quiescent point.
  BrokerStats drain(std::chrono::milliseconds timeout = std::chrono::seconds(30));

  // Stops accepting publishes, lets workers finish their queues, joins.
  void stop();

  BrokerStats stats();

 private:
  struct Trigger {
    std::string name;
    TriggerFilter filter;
    Handler handler;
    std::size_t capacity;

    std::mutex mutex;
    std::condition_variable wake;   // worker wakeup
    std::condition_variable settled;  // drain wakeup
    std::deque<Event> queue;
    bool in_flight = false;
    bool stopping = false;
    std::uint64_t matched = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t handler_errors = 0;
    std::thread worker;
  };

  void worker_loop(Trigger& t);

  std::mutex registry_mutex_;
  std::vector<std::shared_ptr<Trigger>> triggers_;
  std::uint64_t published_ = 0;
  std::uint64_t next_id_ = 0;
  bool stopped_ = false;
};

}  // namespace monitor::bus
