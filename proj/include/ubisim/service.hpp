#pragma once

#include <functional>
#include <memory>
#include <string>

#include "ubisim/engine.hpp"

namespace ubisim {

struct HttpReply {
  int status = 200;
  std::string body;  // JSON
};

// Stateless request handling over a shared engine:
//   GET /health, GET /baseline, GET /presets, POST /simulate.
class Service {
 public:
  explicit Service(const Engine& engine) : engine_(engine) {}

  HttpReply handle(const std::string& method, const std::string& path, const std::string& body) const;

  // Blocks serving on host:port. `on_ready` receives the bound port (useful
  // with port 0) and a stop callback.
  void listen(const std::string& host, int port,
              const std::function<void(int, std::function<void()>)>& on_ready = {}) const;

 private:
  HttpReply simulate(const std::string& body) const;
  const Engine& engine_;
};

}  // namespace ubisim
