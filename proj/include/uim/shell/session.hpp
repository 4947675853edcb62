#pragma once

// Per-connection shell: interprets operator lines against the current screen,
// walks the menu tree and flows, and produces frames and data records.

#include <chrono>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "uim/model/template.hpp"
#include "uim/render/frame.hpp"
#include "uim/repo/repository.hpp"

namespace uim::shell {

struct MenuEntry {
  std::string screen;
  std::size_t page = 0;
  bool operator==(const MenuEntry&) const = default;
};

struct FlowEntry {
  std::string flow;
  std::vector<std::string> steps;  // screen ids, current on top
  std::size_t page = 0;            // page of the current step
  bool operator==(const FlowEntry&) const = default;
};

using NavEntry = std::variant<MenuEntry, FlowEntry>;

/// One completed Input/SingleOption/MultiOption screen.
struct DataRecord {
  std::string session_id;
  std::chrono::system_clock::time_point timestamp;
  std::string flow;
  std::string screen;
  std::vector<std::pair<std::string, std::string>> bindings;  // in screen order
};

struct ShellEffect {
  render::Frame frame;
  std::vector<DataRecord> records;
  bool terminated = false;
  std::vector<std::string> diagnostics;
};

struct SessionState {
  std::string session_id;
  repo::SnapshotPtr snapshot;
  std::vector<NavEntry> nav;
  model::Bindings bindings;
  std::size_t field_index = 0;  // active field on an Input screen
  std::string typed;            // partial field text (kept empty: lines arrive whole)
  std::set<std::string> multi_selected;
  render::TerminalProfile profile;

  std::uint64_t snapshot_version() const noexcept { return snapshot ? snapshot->version : 0; }
};

namespace message {
inline constexpr std::string_view kInvalid = "INVALID";
inline constexpr std::string_view kAtTop = "AT TOP";
inline constexpr std::string_view kRequired = "REQUIRED";
inline constexpr std::string_view kTooLong = "TOO LONG";
}  // namespace message

render::Frame goodbye_frame(const render::TerminalProfile& profile, std::string_view reason = {});

class Session {
 public:
  Session(std::string session_id, repo::SnapshotPtr snapshot, render::TerminalProfile profile);

  /// Root menu frame.
  ShellEffect open();
  /// `line` is one end-of-line terminated input line without its terminator.
  ShellEffect handle_line(std::string_view line);
  ShellEffect handle_resize(std::uint16_t width, std::uint16_t height);
  /// Re-renders the current screen (e.g. after a terminal kind change).
  ShellEffect redraw();

  /// Moves to a newer snapshot if no flow is running. Menu positions that
  /// still exist are kept; otherwise navigation restarts at the root.
  bool adopt(repo::SnapshotPtr latest);

  const SessionState& state() const noexcept { return state_; }
  bool in_flow() const noexcept;
  std::string current_screen_id() const;
  /// Menu entries plus steps of the running flow.
  std::size_t depth() const noexcept;
  /// Fields left to fill on the current Input screen (0 elsewhere).
  std::size_t remaining_fields() const;

 private:
  const model::Catalog& catalog() const { return state_.snapshot->catalog; }
  const model::Screen& current_screen() const;
  std::size_t& current_page();

  void on_menu(const model::Screen& s, std::string_view line);
  void on_info(std::string_view line);
  void on_input(const model::Screen& s, std::string_view line, ShellEffect& fx);
  void on_single(const model::Screen& s, std::string_view line, ShellEffect& fx);
  void on_multi(const model::Screen& s, std::string_view line, ShellEffect& fx);
  bool turn_page(const model::Screen& s, std::string_view line);

  void start_flow(const std::string& flow_id);
  void resolve(std::string_view outcome, std::string_view fallback = {});
  void enter_step(const std::string& screen_id);
  void leave_flow();
  void reset_screen_progress();

  DataRecord record_for(const model::Screen& s, std::vector<std::pair<std::string, std::string>> values) const;
  ShellEffect render(ShellEffect fx);

  SessionState state_;
  std::string message_;
};

}  // namespace uim::shell
