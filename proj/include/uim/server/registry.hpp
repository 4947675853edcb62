#pragma once

// Live-session registry shared between connection handlers and the admin API.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "uim/render/frame.hpp"

namespace uim::server {

struct SessionInfo {
  std::string session_id;
  std::string remote;
  std::string terminal;
  std::chrono::system_clock::time_point connected_at;
  std::string screen;
  std::uint64_t version = 0;
  std::chrono::system_clock::time_point last_activity;
};

/// JSON object with keys session_id, remote, terminal, connected_at, screen,
/// version, last_activity.
std::string to_json(const SessionInfo& info);

/// Mirror event payload for one presented frame.
std::string mirror_event_json(const SessionInfo& info, const render::Frame& frame, std::uint64_t seq);

/// One subscriber's unbounded event queue.
class MirrorSubscription {
 public:
  void push(std::string event);
  void close();
  /// Next event, or nullopt on timeout or once closed and drained.
  std::optional<std::string> next(std::chrono::milliseconds timeout);
  bool closed() const;

 private:
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<std::string> events_;
  bool closed_ = false;
};

/// State one connection shares with the outside world.
class SessionHandle {
 public:
  explicit SessionHandle(SessionInfo info);

  SessionInfo info() const;
  template <typename Fn>
  void update(Fn fn) {
    std::lock_guard lock(mutex_);
    fn(info_);
  }

  void request_disconnect() noexcept { disconnect_.store(true); }
  bool disconnect_requested() const noexcept { return disconnect_.load(); }

  /// Publishes a presented frame to every subscriber.
  void publish(const render::Frame& frame);
  /// New subscriber; it first receives the most recent frame, if any.
  std::shared_ptr<MirrorSubscription> subscribe();
  /// Ends every subscription (session closed).
  void close_mirrors();

 private:
  mutable std::mutex mutex_;
  SessionInfo info_;
  std::atomic<bool> disconnect_{false};
  std::optional<render::Frame> last_frame_;
  std::uint64_t seq_ = 0;
  bool closed_ = false;
  std::vector<std::weak_ptr<MirrorSubscription>> subscribers_;
};

class SessionRegistry {
 public:
  /// Registers a session unless `limit` sessions are already live.
  std::shared_ptr<SessionHandle> try_add(SessionInfo info, std::size_t limit);
  void remove(const std::string& session_id);
  std::shared_ptr<SessionHandle> find(const std::string& session_id) const;
  std::vector<SessionInfo> list() const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<SessionHandle>> sessions_;
};

}  // namespace uim::server
