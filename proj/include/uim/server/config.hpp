#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "uim/render/frame.hpp"
#include "uim/repo/repository.hpp"

namespace uim::server {

/// How the terminal kind is chosen for a session.
enum class TerminalMode { Auto, Ansi, Dumb };

struct ServerConfig {
  std::string bind_address = "0.0.0.0";
  std::uint16_t telnet_port = 2323;
  std::string admin_address = "127.0.0.1";
  std::uint16_t admin_port = 8080;
  bool admin_enabled = true;
  repo::Backend repository;
  render::TerminalProfile default_profile;
  TerminalMode terminal_mode = TerminalMode::Auto;
  std::chrono::seconds idle_timeout{900};
  std::size_t max_sessions = 256;
  std::filesystem::path journal_path = "journal.ndjson";
  bool journal_fsync = false;
  /// Longest wait for window size / terminal type answers before the first frame.
  std::chrono::milliseconds negotiation_wait{500};
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` text; '#' starts a comment. Relative paths resolve
/// against `base_dir`. Throws ConfigError.
ServerConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ServerConfig load_config(const std::filesystem::path& file);

/// Throws ConfigError on violated invariants (distinct ports, max_sessions >= 1).
void check(const ServerConfig& config);

/// Ansi unless the mode or the reported terminal name says otherwise.
render::TerminalKind terminal_kind_for(TerminalMode mode, std::string_view terminal_name);

}  // namespace uim::server
