#include "uim/server/registry.hpp"

#include <algorithm>

#include <json.hpp>

#include "uim/server/journal.hpp"

namespace uim::server {

std::string to_json(const SessionInfo& info) {
  nlohmann::ordered_json j;
  j["session_id"] = info.session_id;
  j["remote"] = info.remote;
  j["terminal"] = info.terminal;
  j["connected_at"] = iso8601(info.connected_at);
  j["screen"] = info.screen;
  j["version"] = info.version;
  j["last_activity"] = iso8601(info.last_activity);
  return j.dump();
}

std::string mirror_event_json(const SessionInfo& info, const render::Frame& frame, std::uint64_t seq) {
  nlohmann::ordered_json j;
  j["session_id"] = info.session_id;
  j["seq"] = seq;
  j["screen"] = info.screen;
  j["width"] = frame.width();
  j["height"] = frame.height();
  j["rows"] = frame.rows;
  j["cursor"] = {{"row", frame.cursor.row}, {"col", frame.cursor.col}};
  return j.dump();
}

void MirrorSubscription::push(std::string event) {
  {
    std::lock_guard lock(mutex_);
    if (closed_) return;
    events_.push_back(std::move(event));
  }
  cv_.notify_all();
}

void MirrorSubscription::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::optional<std::string> MirrorSubscription::next(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [&] { return closed_ || !events_.empty(); });
  if (events_.empty()) return std::nullopt;
  auto e = std::move(events_.front());
  events_.pop_front();
  return e;
}

bool MirrorSubscription::closed() const {
  std::lock_guard lock(mutex_);
  return closed_ && events_.empty();
}

SessionHandle::SessionHandle(SessionInfo info) : info_(std::move(info)) {}

SessionInfo SessionHandle::info() const {
  std::lock_guard lock(mutex_);
  return info_;
}

void SessionHandle::publish(const render::Frame& frame) {
  std::lock_guard lock(mutex_);
  last_frame_ = frame;
  const auto event = mirror_event_json(info_, frame, ++seq_);
  std::erase_if(subscribers_, [&](const std::weak_ptr<MirrorSubscription>& w) {
    auto s = w.lock();
    if (!s) return true;
    s->push(event);
    return false;
  });
}

std::shared_ptr<MirrorSubscription> SessionHandle::subscribe() {
  auto sub = std::make_shared<MirrorSubscription>();
  std::lock_guard lock(mutex_);
  if (last_frame_) sub->push(mirror_event_json(info_, *last_frame_, seq_));
  if (closed_) {
    sub->close();
  } else {
    subscribers_.push_back(sub);
  }
  return sub;
}

void SessionHandle::close_mirrors() {
  std::lock_guard lock(mutex_);
  closed_ = true;
  for (auto& w : subscribers_) {
    if (auto s = w.lock()) s->close();
  }
  subscribers_.clear();
}

std::shared_ptr<SessionHandle> SessionRegistry::try_add(SessionInfo info, std::size_t limit) {
  std::lock_guard lock(mutex_);
  if (sessions_.size() >= limit) return nullptr;
  auto handle = std::make_shared<SessionHandle>(info);
  sessions_.emplace(info.session_id, handle);
  return handle;
}

void SessionRegistry::remove(const std::string& session_id) {
  std::lock_guard lock(mutex_);
  sessions_.erase(session_id);
}

std::shared_ptr<SessionHandle> SessionRegistry::find(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(session_id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::vector<SessionInfo> SessionRegistry::list() const {
  std::vector<std::shared_ptr<SessionHandle>> handles;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [id, h] : sessions_) handles.push_back(h);
  }
  std::vector<SessionInfo> out;
  for (const auto& h : handles) out.push_back(h->info());
  return out;
}

std::size_t SessionRegistry::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace uim::server
