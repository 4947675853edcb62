#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace uim::server {

class Server;

/// Loopback HTTP/JSON surface over the session registry and snapshot store.
class AdminApi {
 public:
  explicit AdminApi(Server& server);
  ~AdminApi();
  AdminApi(const AdminApi&) = delete;
  AdminApi& operator=(const AdminApi&) = delete;

  /// Binds and starts serving; port 0 picks a free port. Returns the bound port.
  std::uint16_t start(const std::string& address, std::uint16_t port);
  void stop();

 private:
  void routes();

  Server& server_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
};

}  // namespace uim::server
