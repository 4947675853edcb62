#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uim/render/frame.hpp"
#include "uim/server/line_editor.hpp"
#include "uim/server/registry.hpp"
#include "uim/shell/session.hpp"
#include "uim/telnet/protocol.hpp"

namespace uim::server {

class Server;

/// Drives one Telnet connection from handshake to close. Runs on its own thread.
class Connection {
 public:
  Connection(Server& server, int fd, std::string remote, std::string session_id);
  ~Connection();
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  void run();

 private:
  using Clock = std::chrono::steady_clock;

  bool send(std::string_view bytes);
  /// Waits for input; returns bytes read, empty on timeout, nullopt on EOF/error.
  std::optional<std::string> receive(std::chrono::milliseconds timeout);
  void process(std::string_view bytes);
  void handle_token(const telnet::InputToken& token);
  void handle_line(const std::string& line);
  void present(shell::ShellEffect fx);
  void show(const render::Frame& frame);
  void close(std::string_view reason);
  bool retry_pending();
  render::TerminalKind kind() const;
  const render::TerminalProfile& screen_profile() const;
  void cleanup();

  Server& server_;
  int fd_;
  std::string remote_;
  std::string session_id_;
  std::shared_ptr<SessionHandle> handle_;

  telnet::ServerProtocol protocol_;
  telnet::EolNormalizer eol_;
  LineEditor editor_;
  render::TerminalProfile profile_;
  std::optional<shell::Session> session_;
  std::vector<telnet::InputToken> early_input_;  // typed before the first frame
  std::optional<render::Frame> shown_;           // what the terminal displays
  render::TerminalKind shown_kind_ = render::TerminalKind::Ansi;
  std::vector<shell::DataRecord> unsaved_;
  Clock::time_point last_input_;
  bool alive_ = true;
};

}  // namespace uim::server
