#include "topogas/live/session.hpp"

#include "topogas/errors.hpp"

#include <chrono>
#include <cmath>

namespace topogas::live {

RateLimiter::RateLimiter(double max_hz) : max_hz_(max_hz) {
  if (!(std::isfinite(max_hz) && max_hz >= 0.0)) throw ConfigError("max input rate must be >= 0");
}

bool RateLimiter::admit(DemonstratorId demo, double now_s) {
  if (max_hz_ == 0.0) return true;
  auto &window = accepted_[demo];
  while (!window.empty() && window.front() <= now_s - 1.0) window.pop_front();
  if (static_cast<double>(window.size()) + 1.0 > max_hz_) return false;
  window.push_back(now_s);
  return true;
}

Session::Session(std::string id, WorldMap map, const Params &params, double max_input_hz)
    : id_(std::move(id)), map_(std::move(map)), gas_(params), limiter_(max_input_hz) {
  publish();
}

InputAck Session::handle_input(DemonstratorId demo, double x, double y, double now_s) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw InputError("input position must be finite");
  std::lock_guard lock(write_mutex_);
  if (closed_) throw PreconditionError("session " + id_ + " is closed");
  InputAck ack;
  if (limiter_.admit(demo, now_s)) {
    gas_.step({x, y, 0.0}, demo);
    publish();
    ack.accepted = true;
  } else {
    ++dropped_;
  }
  ack.tick = gas_.tick();
  ack.dropped = dropped_;
  return ack;
}

void Session::set_params(const Params &params) {
  std::lock_guard lock(write_mutex_);
  if (closed_) throw PreconditionError("session " + id_ + " is closed");
  gas_.set_params(params);
  publish();
}

Params Session::params() const {
  std::lock_guard lock(write_mutex_);
  return gas_.params();
}

void Session::publish() {
  auto next = gas_.snapshot();
  std::lock_guard lock(publish_mutex_);
  published_ = std::move(next);
}

Snapshot Session::snapshot() const {
  std::lock_guard lock(publish_mutex_);
  return published_;
}

std::uint64_t Session::dropped() const {
  std::lock_guard lock(write_mutex_);
  return dropped_;
}

std::size_t Session::attach() {
  std::lock_guard lock(write_mutex_);
  return ++clients_;
}

std::size_t Session::detach() {
  std::lock_guard lock(write_mutex_);
  if (clients_ > 0) --clients_;
  return clients_;
}

std::size_t Session::clients() const {
  std::lock_guard lock(write_mutex_);
  return clients_;
}

void Session::close() {
  std::lock_guard lock(write_mutex_);
  closed_ = true;
}

bool Session::closed() const {
  std::lock_guard lock(write_mutex_);
  return closed_;
}

SessionManager::SessionManager(double max_input_hz, Clock clock) : max_input_hz_(max_input_hz), clock_(std::move(clock)) {
  RateLimiter check(max_input_hz);
  if (!clock_) {
    const auto origin = std::chrono::steady_clock::now();
    clock_ = [origin] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - origin).count(); };
  }
}

std::shared_ptr<Session> SessionManager::open(const std::string &map_name, const Params &params) {
  params.validate();
  WorldMap map = builtin_map(map_name);
  std::lock_guard lock(mutex_);
  const std::string id = "s" + std::to_string(next_id_++);
  auto session = std::make_shared<Session>(id, std::move(map), params, max_input_hz_);
  sessions_.emplace(id, session);
  return session;
}

std::shared_ptr<Session> SessionManager::find(const std::string &id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void SessionManager::close(const std::string &id) {
  std::shared_ptr<Session> session;
  {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return;
    session = std::move(it->second);
    sessions_.erase(it);
  }
  session->close();
}

std::size_t SessionManager::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

double SessionManager::now() const { return clock_(); }

} // namespace topogas::live
