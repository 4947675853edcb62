#pragma once

// Character-grid frames and their serialization to VT/ANSI or dumb terminals.

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "uim/model/model.hpp"
#include "uim/model/template.hpp"

namespace uim::render {

enum class TerminalKind { Ansi, Dumb };

struct TerminalProfile {
  static constexpr std::uint16_t kMinWidth = 10;
  static constexpr std::uint16_t kMinHeight = 4;

  std::uint16_t width = 80;
  std::uint16_t height = 24;
  TerminalKind kind = TerminalKind::Ansi;
  std::string name;

  static TerminalProfile standard() { return {}; }
  /// Handheld-sized profile; dimensions are configurable per server.
  static TerminalProfile rf(std::uint16_t width = 20, std::uint16_t height = 16) {
    return {width, height, TerminalKind::Ansi, {}};
  }

  bool valid() const noexcept {
    return width >= kMinWidth && height >= kMinHeight && std::size_t{width} * height >= 40;
  }
  bool operator==(const TerminalProfile&) const = default;
};

/// Raises dimensions to the minimum. Returns true if anything changed.
bool clamp(TerminalProfile& profile) noexcept;

struct Cursor {
  std::size_t row = 0;
  std::size_t col = 0;
  bool operator==(const Cursor&) const = default;
};

struct Frame {
  std::vector<std::string> rows;  // each exactly width cells
  Cursor cursor;
  bool masked_cursor_field = false;

  std::size_t height() const noexcept { return rows.size(); }
  std::size_t width() const noexcept { return rows.empty() ? 0 : rows.front().size(); }
  bool operator==(const Frame&) const = default;

  static Frame blank(std::size_t width, std::size_t height);
};

struct PageGeometry {
  std::size_t items_per_page = 0;
  std::size_t page_count = 1;
  bool operator==(const PageGeometry&) const = default;
};

/// A single page holds height-2 rows of items (title and hint row); once
/// more pages are needed one further row goes to the page indicator.
PageGeometry paginate(std::size_t item_count, const TerminalProfile& profile);

/// Per-session inputs that the screen definition alone doesn't carry.
struct ScreenContext {
  const model::Bindings* bindings = nullptr;
  std::size_t active_field = 0;             // Input screens
  std::set<std::string> selected;           // MultiOption screens
  std::string message;                      // shown on the hint row
};

struct Layout {
  Frame frame;
  PageGeometry geometry;
  std::vector<std::string> diagnostics;
};

/// Number of paged rows the screen body needs.
std::size_t body_rows(const model::Screen& screen, const ScreenContext& ctx);

/// Lays out one page. `page` is clamped into range.
Layout layout(const model::Screen& screen, const ScreenContext& ctx, const TerminalProfile& profile,
              std::size_t page);

/// A simple titled frame with free text, used for goodbye and error screens.
Frame notice_frame(const TerminalProfile& profile, std::string_view title,
                   const std::vector<std::string>& lines, std::string_view hint = {});

/// Copy of `frame` with `text` written over the hint row.
Frame with_status(Frame frame, std::string_view text);

/// VT/ANSI bytes. Without `previous` (or on a size change) a full redraw;
/// otherwise only changed rows are rewritten.
std::string to_ansi(const Frame& frame, const Frame* previous = nullptr);

/// Dumb-terminal bytes: non-blank rows, right-trimmed, CR LF terminated.
std::string to_plain(const Frame& frame);

}  // namespace uim::render
