#pragma once

#include "topogas/gas.hpp"
#include "topogas/world_map.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace topogas::live {

/// Immutable published state; readers never see a half-applied step.
using Snapshot = std::shared_ptr<const Gas>;

/// Sliding one-second window per demonstrator. A cap of 0 admits everything.
class RateLimiter {
public:
  explicit RateLimiter(double max_hz = 100.0);

  /// Records and admits the input at `now_s` unless the trailing second is already full.
  bool admit(DemonstratorId demo, double now_s);
  double max_hz() const { return max_hz_; }

private:
  double max_hz_;
  std::map<DemonstratorId, std::deque<double>> accepted_;
};

struct InputAck {
  bool accepted = false;
  std::uint64_t tick = 0;    ///< gas tick after the call
  std::uint64_t dropped = 0; ///< inputs dropped by the rate cap so far in this session
};

/// One gas learning from live inputs. All mutators serialize on one lock, so
/// inputs reaching a session are applied in call order.
class Session {
public:
  Session(std::string id, WorldMap map, const Params &params, double max_input_hz);

  const std::string &id() const { return id_; }
  const WorldMap &map() const { return map_; }

  /// Steps the gas with (x, y, 0). Throws InputError for non-finite
  /// coordinates and PreconditionError once the session is closed.
  InputAck handle_input(DemonstratorId demo, double x, double y, double now_s);

  /// Replaces the learning parameters; throws ConfigError when invalid.
  void set_params(const Params &params);
  Params params() const;

  Snapshot snapshot() const;
  std::uint64_t dropped() const;

  std::size_t attach();
  /// Returns the remaining client count.
  std::size_t detach();
  std::size_t clients() const;

  void close();
  bool closed() const;

private:
  void publish();

  const std::string id_;
  const WorldMap map_;

  mutable std::mutex write_mutex_;
  Gas gas_;
  RateLimiter limiter_;
  std::uint64_t dropped_ = 0;
  std::size_t clients_ = 0;
  bool closed_ = false;

  mutable std::mutex publish_mutex_;
  Snapshot published_;
};

/// Registry of live sessions. Thread-safe.
class SessionManager {
public:
  using Clock = std::function<double()>;

  explicit SessionManager(double max_input_hz = 100.0, Clock clock = {});

  /// Opens a session on a built-in map. Throws ConfigError for unknown maps or bad params.
  std::shared_ptr<Session> open(const std::string &map_name, const Params &params = {});
  /// nullptr when no such open session exists.
  std::shared_ptr<Session> find(const std::string &id) const;
  /// Closes and forgets the session; later inputs to it are rejected.
  void close(const std::string &id);
  std::size_t size() const;

  /// Seconds on the manager clock (steady clock by default).
  double now() const;

private:
  double max_input_hz_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::uint64_t next_id_ = 1;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

} // namespace topogas::live
