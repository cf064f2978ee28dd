#pragma once

#include "televiz/scenario.hpp"

#include <memory>
#include <string>

namespace televiz {

struct ServeOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  double snapshot_rate_hz = 20.0;
  double speed = 1.0;  // simulated seconds per wall-clock second
  bool loop = false;   // restart the scenario when it ends
};

/// Live engine behind a websocket endpoint. One viewer at a time; a new
/// connection replaces the old one. Snapshots go out at `snapshot_rate_hz`
/// and on every tick that applies a calibration.
class Server {
 public:
  /// Binds immediately, so port() is valid before run().
  Server(ScenarioConfig config, ServeOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  unsigned short port() const;

  /// Blocks until stop().
  void run();
  /// Safe to call from any thread.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace televiz
