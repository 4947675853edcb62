#include "uim/server/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <system_error>

#include <spdlog/spdlog.h>

#include "admin_api.hpp"
#include "connection.hpp"

namespace uim::server {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::system_error(errno, std::generic_category(), what);
}

int listen_on(const std::string& address, std::uint16_t port, std::uint16_t& bound) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, address.c_str(), &addr.sin_addr) != 1) {
    errno = EINVAL;
    fail("bad bind address " + address);
  }
  const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) fail("socket");
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    const int e = errno;
    ::close(fd);
    errno = e;
    fail("bind " + address + ":" + std::to_string(port));
  }
  if (::listen(fd, 128) != 0) {
    const int e = errno;
    ::close(fd);
    errno = e;
    fail("listen");
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  bound = ntohs(addr.sin_port);
  return fd;
}

std::string peer_name(const sockaddr_in& addr) {
  char buf[INET_ADDRSTRLEN] = {};
  ::inet_ntop(AF_INET, &addr.sin_addr, buf, sizeof buf);
  return std::string(buf) + ":" + std::to_string(ntohs(addr.sin_port));
}

}  // namespace

Server::Server(ServerConfig config) : config_(std::move(config)), store_(config_.repository) {}

Server::~Server() { stop(); }

void Server::start() {
  check(config_);
  store_.load();
  journal_ = std::make_unique<Journal>(config_.journal_path, config_.journal_fsync);
  listen_fd_ = listen_on(config_.bind_address, config_.telnet_port, telnet_port_);
  if (config_.admin_enabled) {
    admin_ = std::make_unique<AdminApi>(*this);
    try {
      admin_port_ = admin_->start(config_.admin_address, config_.admin_port);
    } catch (...) {
      ::close(listen_fd_);
      listen_fd_ = -1;
      admin_.reset();
      throw;
    }
  }
  acceptor_ = std::thread([this] { accept_loop(); });
  spdlog::info("telnet listening on {}:{}", config_.bind_address, telnet_port_);
  if (admin_) spdlog::info("admin api on {}:{}", config_.admin_address, admin_port_);
}

void Server::stop() {
  stopping_ = true;
  if (acceptor_.joinable()) acceptor_.join();
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  reap_workers(true);
  if (admin_) {
    admin_->stop();
    admin_.reset();
  }
}

void Server::accept_loop() {
  while (!stopping_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int r = ::poll(&pfd, 1, 200);
    reap_workers(false);
    if (r <= 0) continue;
    sockaddr_in peer{};
    socklen_t len = sizeof peer;
    const int fd = ::accept4(listen_fd_, reinterpret_cast<sockaddr*>(&peer), &len, SOCK_CLOEXEC);
    if (fd < 0) {
      if (errno != EINTR && errno != EAGAIN && errno != ECONNABORTED) {
        spdlog::warn("accept failed: {}", std::strerror(errno));
      }
      continue;
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    timeval tv{5, 0};
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);

    auto conn = std::make_shared<Connection>(*this, fd, peer_name(peer), "s" + std::to_string(next_session_++));
    auto done = std::make_shared<std::atomic<bool>>(false);
    std::lock_guard lock(workers_mutex_);
    workers_.push_back(Worker{std::thread([conn, done] {
                                try {
                                  conn->run();
                                } catch (const std::exception& e) {
                                  spdlog::error("connection handler failed: {}", e.what());
                                }
                                done->store(true);
                              }),
                              done});
  }
}

void Server::reap_workers(bool all) {
  std::list<Worker> finished;
  {
    std::lock_guard lock(workers_mutex_);
    for (auto it = workers_.begin(); it != workers_.end();) {
      if (all || it->done->load()) {
        auto next = std::next(it);
        finished.splice(finished.end(), workers_, it);
        it = next;
      } else {
        ++it;
      }
    }
  }
  for (auto& w : finished) {
    if (w.thread.joinable()) w.thread.join();
  }
}

}  // namespace uim::server
