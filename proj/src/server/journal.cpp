#include "uim/server/journal.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <ctime>

#include <fmt/format.h>
#include <json.hpp>

namespace uim::server {

std::string iso8601(std::chrono::system_clock::time_point t) {
  using namespace std::chrono;
  const auto ms = duration_cast<milliseconds>(t.time_since_epoch()).count() % 1000;
  const std::time_t secs = system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  return fmt::format("{}.{:03}Z", buf, ms);
}

std::string to_json_line(const shell::DataRecord& record) {
  nlohmann::ordered_json j;
  j["session_id"] = record.session_id;
  j["timestamp"] = iso8601(record.timestamp);
  j["flow"] = record.flow;
  j["screen"] = record.screen;
  auto& b = j["bindings"] = nlohmann::ordered_json::object();
  for (const auto& [name, value] : record.bindings) b[name] = value;
  return j.dump() + "\n";
}

Journal::Journal(std::filesystem::path path, bool fsync_each) : path_(std::move(path)), fsync_each_(fsync_each) {
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) open_error_ = fmt::format("cannot open {}: {}", path_.string(), std::strerror(errno));
  writer_ = std::thread([this] { run(); });
}

Journal::~Journal() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  writer_.join();
  if (fd_ >= 0) ::close(fd_);
}

std::future<Receipt> Journal::submit(const shell::DataRecord& record) {
  Job job{to_json_line(record), {}};
  auto fut = job.done.get_future();
  {
    std::lock_guard lock(mutex_);
    queue_.push_back(std::move(job));
  }
  cv_.notify_one();
  return fut;
}

Receipt Journal::append(const shell::DataRecord& record) { return submit(record).get(); }

void Journal::run() {
  for (;;) {
    Job job;
    {
      std::unique_lock lock(mutex_);
      cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      job = std::move(queue_.front());
      queue_.pop_front();
    }
    job.done.set_value(write_line(job.line));
  }
}

Receipt Journal::write_line(const std::string& line) {
  if (fd_ < 0) return {false, 0, open_error_};
  // A short write leaves a torn line; cut it back so the file stays line-clean.
  const off_t start = ::lseek(fd_, 0, SEEK_END);
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string err = std::strerror(errno);
      if (done > 0 && start >= 0 && ::ftruncate(fd_, start) != 0) {
        // nothing more to do; the error below is what matters
      }
      return {false, 0, err};
    }
    done += static_cast<std::size_t>(n);
  }
  if (fsync_each_ && ::fsync(fd_) != 0) return {false, 0, std::strerror(errno)};
  return {true, ++written_, {}};
}

}  // namespace uim::server
