#include "monitor/bus/broker.hpp"

namespace monitor::bus {

void Broker::publish(Event event) {
  std::vector<std::shared_ptr<Trigger>> targets;
  {
    std::lock_guard lock(registry_mutex_);
    if (stopped_) throw Error("BrokerStopped", "publish after stop");
    ++published_;
    if (event.id.empty()) event.id = "evt-" + std::to_string(next_id_++);
    targets = triggers_;
  }
  for (auto& t : targets) {
    if (!t->filter.matches(event)) continue;
    {
      std::lock_guard lock(t->mutex);
      ++t->matched;
      if (t->queue.size() >= t->capacity) {
        t->queue.pop_front();
        ++t->dropped;
      }
      t->queue.push_back(event);
    }
    t->wake.notify_one();
  }
}

std::size_t Broker::register_trigger(std::string name, TriggerFilter filter, Handler handler,
                                     std::size_t queue_capacity) {
  if (queue_capacity == 0) throw Error("BadConfig", "trigger queue capacity must be positive");
  auto t = std::make_shared<Trigger>();
  t->name = std::move(name);
  t->filter = std::move(filter);
  t->handler = std::move(handler);
  t->capacity = queue_capacity;
  t->worker = std::thread([this, raw = t.get()] { worker_loop(*raw); });
  std::lock_guard lock(registry_mutex_);
  if (stopped_) {
    {
      std::lock_guard tl(t->mutex);
      t->stopping = true;
    }
    t->wake.notify_all();
    t->worker.join();
    throw Error("BrokerStopped", "register after stop");
  }
  triggers_.push_back(t);
  return triggers_.size() - 1;
}

void Broker::worker_loop(Trigger& t) {
  for (;;) {
    std::unique_lock lock(t.mutex);
    t.wake.wait(lock, [&] { return t.stopping || !t.queue.empty(); });
    if (t.queue.empty()) {
      if (t.stopping) return;
      continue;
    }
    Event e = std::move(t.queue.front());
    t.queue.pop_front();
    t.in_flight = true;
    lock.unlock();
    try {
      t.handler(e);
    } catch (...) {
      std::lock_guard g(t.mutex);
      ++t.handler_errors;
    }
    lock.lock();
    t.in_flight = false;
    ++t.delivered;
    if (t.queue.empty()) t.settled.notify_all();
  }
}

BrokerStats Broker::drain(std::chrono::milliseconds timeout) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  std::vector<std::shared_ptr<Trigger>> targets;
  {
    std::lock_guard lock(registry_mutex_);
    targets = triggers_;
  }
  for (auto& t : targets) {
    std::unique_lock lock(t->mutex);
    bool ok = t->settled.wait_until(lock, deadline,
                                    [&] { return t->queue.empty() && !t->in_flight; });
    if (!ok) throw Error("DrainTimeout", "trigger '" + t->name + "' did not settle");
  }
  return stats();
}

void Broker::stop() {
  std::vector<std::shared_ptr<Trigger>> targets;
  {
    std::lock_guard lock(registry_mutex_);
    if (stopped_) return;
    stopped_ = true;
    targets = triggers_;
  }
  for (auto& t : targets) {
    {
      std::lock_guard lock(t->mutex);
      t->stopping = true;
    }
    t->wake.notify_all();
  }
  for (auto& t : targets)
    if (t->worker.joinable()) t->worker.join();
}

BrokerStats Broker::stats() {
  BrokerStats s;
  std::vector<std::shared_ptr<Trigger>> targets;
  {
    std::lock_guard lock(registry_mutex_);
    s.published = published_;
    targets = triggers_;
  }
  for (auto& t : targets) {
    std::lock_guard lock(t->mutex);
    s.triggers.push_back(
        TriggerCounters{t->name, t->matched, t->delivered, t->dropped, t->handler_errors});
  }
  return s;
}

}  // namespace monitor::bus
