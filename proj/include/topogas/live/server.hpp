#pragma once

#include "topogas/live/session.hpp"

#include <memory>
#include <ostream>
#include <string>

namespace topogas::live {

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8765;
  int snapshot_interval_ms = 100;
  double max_input_hz = 100.0; ///< per demonstrator; 0 disables the cap
  int threads = 1;
};

/// WebSocket server speaking the live protocol (see protocol.hpp). Binds in
/// the constructor, so port() is valid before run().
class Server {
public:
  explicit Server(const ServerOptions &options, SessionManager::Clock clock = {});
  ~Server();
  Server(const Server &) = delete;
  Server &operator=(const Server &) = delete;

  unsigned short port() const;
  SessionManager &sessions();

  /// Serves until stop() (or SIGINT/SIGTERM when `stop_on_signals`).
  void run(bool stop_on_signals = false);
  /// Safe to call from any thread.
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Blocking entry point for the `serve` command.
int run_server(const ServerOptions &options, std::ostream &out);

} // namespace topogas::live
