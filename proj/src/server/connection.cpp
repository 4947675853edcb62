#include "connection.hpp"

#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>

#include <spdlog/spdlog.h>

#include "uim/server/server.hpp"

namespace uim::server {

namespace {

constexpr std::string_view kServerFull = "SERVER FULL\r\n";
constexpr std::string_view kSaveFailed = "SAVE FAILED - RETRY";
constexpr auto kPollInterval = std::chrono::milliseconds(100);

}  // namespace

Connection::Connection(Server& server, int fd, std::string remote, std::string session_id)
    : server_(server),
      fd_(fd),
      remote_(std::move(remote)),
      session_id_(std::move(session_id)),
      profile_(server.config().default_profile) {
  profile_.kind = terminal_kind_for(server.config().terminal_mode, {});
}

Connection::~Connection() {
  if (fd_ >= 0) ::close(fd_);
}

bool Connection::send(std::string_view bytes) {
  std::size_t done = 0;
  while (alive_ && done < bytes.size()) {
    const ssize_t n = ::send(fd_, bytes.data() + done, bytes.size() - done, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      alive_ = false;
      return false;
    }
    done += static_cast<std::size_t>(n);
  }
  return alive_;
}

std::optional<std::string> Connection::receive(std::chrono::milliseconds timeout) {
  pollfd pfd{fd_, POLLIN, 0};
  const int r = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  if (r == 0) return std::string{};
  if (r < 0) {
    if (errno == EINTR) return std::string{};
    return std::nullopt;
  }
  char buf[4096];
  const ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
  if (n <= 0) {
    if (n < 0 && (errno == EINTR || errno == EAGAIN)) return std::string{};
    return std::nullopt;
  }
  return std::string(buf, static_cast<std::size_t>(n));
}

render::TerminalKind Connection::kind() const { return profile_.kind; }

const render::TerminalProfile& Connection::screen_profile() const {
  return session_ ? session_->state().profile : profile_;
}

void Connection::run() {
  const auto now = std::chrono::system_clock::now();
  SessionInfo info;
  info.session_id = session_id_;
  info.remote = remote_;
  info.connected_at = now;
  info.last_activity = now;
  handle_ = server_.registry().try_add(info, server_.config().max_sessions);
  if (!handle_) {
    spdlog::info("{} rejected: session limit reached", remote_);
    send(kServerFull);
    return;
  }
  spdlog::info("{} connected from {}", session_id_, remote_);

  last_input_ = Clock::now();
  send(protocol_.start());

  const auto deadline = Clock::now() + server_.config().negotiation_wait;
  while (alive_ && !protocol_.settled() && !server_.stopping()) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) break;
    auto data = receive(std::min(left, kPollInterval));
    if (!data) {
      alive_ = false;
      break;
    }
    if (!data->empty()) process(*data);
  }

  if (alive_) {
    session_.emplace(session_id_, server_.store().current(), profile_);
    present(session_->open());
    auto queued = std::move(early_input_);
    early_input_.clear();
    for (const auto& t : queued) {
      if (!alive_) break;
      handle_token(t);
    }
  }

  while (alive_) {
    if (server_.stopping()) {
      close("SERVER SHUTDOWN");
      break;
    }
    if (handle_->disconnect_requested()) {
      close("DISCONNECTED");
      break;
    }
    if (Clock::now() - last_input_ > server_.config().idle_timeout) {
      close("IDLE TIMEOUT");
      break;
    }
    auto data = receive(kPollInterval);
    if (!data) break;
    if (data->empty()) continue;
    last_input_ = Clock::now();
    process(*data);
  }
  cleanup();
}

void Connection::cleanup() {
  if (!unsaved_.empty()) {
    spdlog::error("{} closed with {} unsaved record(s)", session_id_, unsaved_.size());
  }
  handle_->close_mirrors();
  server_.registry().remove(session_id_);
  ::shutdown(fd_, SHUT_RDWR);
  spdlog::info("{} disconnected", session_id_);
}

void Connection::process(std::string_view bytes) {
  auto out = protocol_.feed(bytes);
  if (!out.reply.empty()) send(out.reply);
  for (const auto& w : out.warnings) spdlog::debug("{}: protocol warning {} (byte {})", session_id_, static_cast<int>(w.kind), w.byte);

  if (out.terminal_type) {
    profile_.name = *out.terminal_type;
    const auto k = terminal_kind_for(server_.config().terminal_mode, profile_.name);
    handle_->update([&](SessionInfo& i) { i.terminal = profile_.name; });
    if (k != profile_.kind) {
      profile_.kind = k;
      if (session_) present(session_->redraw());
    }
  }
  if (out.resize && out.resize->width > 0 && out.resize->height > 0) {
    if (session_) {
      present(session_->handle_resize(out.resize->width, out.resize->height));
    } else {
      profile_.width = out.resize->width;
      profile_.height = out.resize->height;
      if (render::clamp(profile_)) spdlog::debug("{}: window size clamped", session_id_);
    }
  }

  const bool echo = protocol_.server_echo();
  for (auto c : out.commands) {
    LineEditor::Step step;
    if (c == telnet::Command::EC) step = editor_.erase_char(echo);
    else if (c == telnet::Command::EL) step = editor_.erase_line(echo);
    if (!step.echo.empty()) send(step.echo);
  }

  for (const auto& t : eol_.feed(out.data)) {
    if (!alive_) break;
    if (!session_) {
      early_input_.push_back(t);
      continue;
    }
    handle_token(t);
  }
}

void Connection::handle_token(const telnet::InputToken& token) {
  const bool echo = protocol_.server_echo();
  const bool masked = shown_ && shown_->masked_cursor_field;
  const auto typed = editor_.buffer().size();
  auto step = editor_.feed(token, masked, echo);
  if (!step.echo.empty()) send(step.echo);
  if (step.line) {
    if (echo && kind() == render::TerminalKind::Dumb) send("\r\n");
    if (echo && typed > 0 && shown_ && shown_->width() > 0) {
      // Echoed text now sits on the terminal; make the next diff rewrite
      // those rows, or redraw fully if it wrapped past the bottom.
      const auto& c = shown_->cursor;
      const auto last = c.row + (c.col + typed) / shown_->width();
      if (last >= shown_->height()) {
        shown_.reset();
      } else {
        for (auto r = c.row; r <= last; ++r) shown_->rows[r].assign(shown_->width(), '\x7f');
      }
    }
    handle_line(*step.line);
  }
}

void Connection::handle_line(const std::string& line) {
  if (!unsaved_.empty()) {
    if (retry_pending()) {
      present(session_->redraw());
    } else if (shown_) {
      show(*shown_);
    }
    return;
  }
  auto fx = session_->handle_line(line);
  if (!fx.terminated && !session_->in_flow() && session_->adopt(server_.store().current())) {
    auto fresh = session_->redraw();
    fx.frame = std::move(fresh.frame);
  }
  present(std::move(fx));
}

bool Connection::retry_pending() {
  while (!unsaved_.empty()) {
    const auto receipt = server_.journal().append(unsaved_.front());
    if (!receipt.ok) {
      spdlog::warn("{}: journal retry failed: {}", session_id_, receipt.error);
      return false;
    }
    unsaved_.erase(unsaved_.begin());
  }
  return true;
}

void Connection::present(shell::ShellEffect fx) {
  for (const auto& d : fx.diagnostics) spdlog::debug("{}: {}", session_id_, d);
  for (auto& r : fx.records) {
    if (!unsaved_.empty()) {
      unsaved_.push_back(std::move(r));  // keep file order behind the stuck record
      continue;
    }
    const auto receipt = server_.journal().append(r);
    if (!receipt.ok) {
      spdlog::warn("{}: journal append failed: {}", session_id_, receipt.error);
      unsaved_.push_back(std::move(r));
    }
  }
  if (!unsaved_.empty() && !fx.terminated) fx.frame = render::with_status(std::move(fx.frame), kSaveFailed);
  show(fx.frame);
  if (fx.terminated) alive_ = false;
}

void Connection::show(const render::Frame& frame) {
  const auto k = kind();
  const bool diff = shown_ && shown_kind_ == render::TerminalKind::Ansi && k == render::TerminalKind::Ansi;
  const auto bytes = k == render::TerminalKind::Ansi ? render::to_ansi(frame, diff ? &*shown_ : nullptr)
                                                      : render::to_plain(frame);
  const auto screen = session_ ? session_->current_screen_id() : std::string{};
  const auto version = session_ ? session_->state().snapshot_version() : 0;
  handle_->update([&](SessionInfo& i) {
    i.screen = screen;
    i.version = version;
    i.last_activity = std::chrono::system_clock::now();
  });
  handle_->publish(frame);

  send(bytes);
  shown_ = frame;
  shown_kind_ = k;
}

void Connection::close(std::string_view reason) {
  spdlog::info("{} closing: {}", session_id_, reason);
  show(shell::goodbye_frame(screen_profile(), reason));
  alive_ = false;
}

}  // namespace uim::server
