#pragma once

// Append-only journal of data records, one JSON object per line. A single
// writer thread owns the file; sessions enqueue and wait for the receipt.

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <future>
#include <mutex>
#include <string>
#include <thread>

#include "uim/shell/session.hpp"

namespace uim::server {

/// Stable key order: session_id, timestamp, flow, screen, bindings.
std::string to_json_line(const shell::DataRecord& record);

std::string iso8601(std::chrono::system_clock::time_point t);

struct Receipt {
  bool ok = false;
  std::uint64_t sequence = 0;  // 1-based line number written by this process
  std::string error;
};

class Journal {
 public:
  Journal(std::filesystem::path path, bool fsync_each);
  ~Journal();
  Journal(const Journal&) = delete;
  Journal& operator=(const Journal&) = delete;

  std::future<Receipt> submit(const shell::DataRecord& record);
  /// submit() and wait.
  Receipt append(const shell::DataRecord& record);

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  struct Job {
    std::string line;
    std::promise<Receipt> done;
  };

  void run();
  Receipt write_line(const std::string& line);

  std::filesystem::path path_;
  bool fsync_each_;
  int fd_ = -1;
  std::string open_error_;
  std::uint64_t written_ = 0;

  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<Job> queue_;
  bool stopping_ = false;
  std::thread writer_;
};

}  // namespace uim::server
