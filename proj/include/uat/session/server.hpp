// SPDX-License-Identifier: Apache-2.0

// HTTP/websocket front end: /ws speaks the session protocol, /health
// reports service status.

#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "uat/session/service.hpp"

namespace uat::session {

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8080;  // 0 picks a free port
  int io_threads = 2;
  // Blocking work (model calls, tools) runs here, off the network threads.
  int worker_threads = 4;
  std::chrono::milliseconds tick_interval{1000};
};

class Server {
 public:
  Server(SessionService& service, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts serving in background threads.
  void start();
  void stop();
  /// The bound port, valid after start().
  unsigned short port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace uat::session
