#include "uim/server/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace uim::server {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T number(std::string_view key, std::string_view value, T lo, T hi) {
  T out{};
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || p != value.data() + value.size() || out < lo || out > hi) {
    throw ConfigError(fmt::format("{}: expected an integer in {}..{}, got '{}'", key, lo, hi, value));
  }
  return out;
}

bool boolean(std::string_view key, std::string_view value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  throw ConfigError(fmt::format("{}: expected true or false, got '{}'", key, value));
}

fs::path resolve(const fs::path& base, std::string_view value) {
  fs::path p(value);
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

ServerConfig parse_config(std::string_view text, const fs::path& base_dir) {
  ServerConfig cfg;
  std::uint16_t rf_width = 20, rf_height = 16;
  std::string profile = "standard";
  bool have_repo = false;

  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("line {}: expected key = value", line_no));
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));

    if (key == "telnet_port") cfg.telnet_port = number<std::uint16_t>(key, value, 0, 65535);
    else if (key == "admin_port") cfg.admin_port = number<std::uint16_t>(key, value, 0, 65535);
    else if (key == "bind_address") cfg.bind_address = value;
    else if (key == "admin_address") cfg.admin_address = value;
    else if (key == "admin_enabled") cfg.admin_enabled = boolean(key, value);
    else if (key == "repository") {
      auto backend = repo::Backend::from_string(value);
      backend.path = resolve(base_dir, backend.path.string());
      if (!value.starts_with("xml_dir:") && !value.starts_with("tabular:")) backend = repo::Backend::detect(backend.path);
      cfg.repository = std::move(backend);
      have_repo = true;
    } else if (key == "profile") {
      if (value != "standard" && value != "rf") throw ConfigError(fmt::format("profile: expected standard or rf, got '{}'", value));
      profile = value;
    } else if (key == "rf_width") rf_width = number<std::uint16_t>(key, value, render::TerminalProfile::kMinWidth, 1000);
    else if (key == "rf_height") rf_height = number<std::uint16_t>(key, value, render::TerminalProfile::kMinHeight, 1000);
    else if (key == "terminal") {
      if (value == "auto") cfg.terminal_mode = TerminalMode::Auto;
      else if (value == "ansi") cfg.terminal_mode = TerminalMode::Ansi;
      else if (value == "dumb") cfg.terminal_mode = TerminalMode::Dumb;
      else throw ConfigError(fmt::format("terminal: expected auto, ansi or dumb, got '{}'", value));
    } else if (key == "idle_timeout_secs") cfg.idle_timeout = std::chrono::seconds(number<long>(key, value, 1, 86400 * 7));
    else if (key == "max_sessions") cfg.max_sessions = number<std::size_t>(key, value, 1, 100000);
    else if (key == "journal_path") cfg.journal_path = resolve(base_dir, value);
    else if (key == "journal_fsync") cfg.journal_fsync = boolean(key, value);
    else if (key == "negotiation_wait_ms") cfg.negotiation_wait = std::chrono::milliseconds(number<long>(key, value, 0, 10000));
    else throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, key));
  }
  if (!have_repo) throw ConfigError("repository is required");
  cfg.default_profile = profile == "rf" ? render::TerminalProfile::rf(rf_width, rf_height) : render::TerminalProfile::standard();
  check(cfg);
  return cfg;
}

ServerConfig load_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(fmt::format("cannot read config file {}", file.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), file.parent_path());
}

void check(const ServerConfig& config) {
  if (config.admin_enabled && config.telnet_port != 0 && config.telnet_port == config.admin_port) {
    throw ConfigError("telnet_port and admin_port must differ");
  }
  if (config.max_sessions < 1) throw ConfigError("max_sessions must be at least 1");
  if (!config.default_profile.valid()) throw ConfigError("default profile below the minimum terminal size");
}

render::TerminalKind terminal_kind_for(TerminalMode mode, std::string_view name) {
  switch (mode) {
    case TerminalMode::Ansi: return render::TerminalKind::Ansi;
    case TerminalMode::Dumb: return render::TerminalKind::Dumb;
    case TerminalMode::Auto: break;
  }
  return name == "dumb" || name == "unknown" || name == "network" ? render::TerminalKind::Dumb
                                                                   : render::TerminalKind::Ansi;
}

}  // namespace uim::server
