#pragma once

// Telnet application server: accept loop, one handler thread per connection,
// the shared snapshot store, the journal and the admin HTTP API.

#include <atomic>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <thread>

#include "uim/repo/repository.hpp"
#include "uim/server/config.hpp"
#include "uim/server/journal.hpp"
#include "uim/server/registry.hpp"

namespace uim::server {

class AdminApi;

class Server {
 public:
  explicit Server(ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Loads the repository and binds both listeners. Throws on failure
  /// (repo::LoadError, std::system_error).
  void start();
  /// Closes every session with a goodbye frame and joins all threads.
  void stop();

  std::uint16_t telnet_port() const noexcept { return telnet_port_; }
  std::uint16_t admin_port() const noexcept { return admin_port_; }

  const ServerConfig& config() const noexcept { return config_; }
  SessionRegistry& registry() noexcept { return registry_; }
  repo::SnapshotStore& store() noexcept { return store_; }
  Journal& journal() noexcept { return *journal_; }
  bool stopping() const noexcept { return stopping_.load(); }

 private:
  struct Worker {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };

  void accept_loop();
  void reap_workers(bool all);

  ServerConfig config_;
  repo::SnapshotStore store_;
  SessionRegistry registry_;
  std::unique_ptr<Journal> journal_;
  std::unique_ptr<AdminApi> admin_;

  int listen_fd_ = -1;
  std::uint16_t telnet_port_ = 0;
  std::uint16_t admin_port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> next_session_{1};
  std::thread acceptor_;
  std::mutex workers_mutex_;
  std::list<Worker> workers_;
};

}  // namespace uim::server
