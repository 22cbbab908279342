#pragma once

// Real-time service: advances a LiveSession against the wall clock and
// exposes it over HTTP + WebSocket.
//
//   GET /ws      WebSocket, JSON messages (see live.hpp)
//   GET /config  active SessionConfig as JSON
//   GET /...     static files from ServerOptions::static_dir

#include <filesystem>
#include <memory>
#include <string>

#include "tactile/session.hpp"

namespace tactile::app {

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8080;  // 0 picks a free port
  std::filesystem::path static_dir = "ui/dist";
};

class Server {
public:
  /// Binds immediately; throws std::runtime_error if the address is unusable.
  Server(session::SessionConfig cfg, ServerOptions options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  unsigned short port() const;

  /// Runs the network and simulation threads; blocks until stop().
  void run();
  /// Runs in background threads and returns immediately.
  void start();
  /// Idempotent, safe from any thread.
  void stop();

  struct Impl;  // opaque; defined in server.cpp

private:
  std::unique_ptr<Impl> impl_;
};

/// "host:port" -> options.address / options.port. Throws ConfigError("--bind").
void parse_bind(const std::string& bind, ServerOptions& options);

}  // namespace tactile::app
