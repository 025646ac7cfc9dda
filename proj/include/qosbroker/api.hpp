#pragma once

#include <functional>
#include <memory>
#include <string>

#include "qosbroker/error.hpp"
#include "qosbroker/registry.hpp"

namespace httplib {
class Server;
}

namespace qosbroker {

/// HTTP status for a module error code. Each code maps to exactly one status.
int http_status(Errc code) noexcept;

/// Feedback note attached to a match response that found no functional match.
inline constexpr const char* kNoFunctionalMatch =
    "no registered service satisfies the functional requirements";

/// Registry + matchmaking over HTTP/1.1 with JSON bodies.
///
///   POST   /services        register, 201 + Location
///   GET    /services        list in registration order
///   GET    /services/{id}
///   PUT    /services/{id}   replace
///   DELETE /services/{id}
///   POST   /match           rank candidates, never mutates
///   GET    /health          revision + service count
///
/// Mutations are serialized through SharedRegistry. `persist` runs inside the
/// writer lock on the candidate store; if it throws, the mutation is dropped.
class ApiServer {
 public:
  using Persist = std::function<void(const RegistryStore&)>;

  ApiServer(std::shared_ptr<SharedRegistry> registry, Persist persist = {});
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds without serving. Port 0 picks an ephemeral port. Returns false on failure.
  bool bind(const std::string& host, int port);
  int port() const noexcept { return port_; }

  /// Blocks until stop() is called.
  bool listen();
  void stop();
  void wait_until_ready() const;

  const SharedRegistry& registry() const noexcept { return *registry_; }

 private:
  void install_routes();

  std::shared_ptr<SharedRegistry> registry_;
  Persist persist_;
  std::unique_ptr<httplib::Server> server_;
  int port_ = -1;
};

}  // namespace qosbroker
