#include <fmt/format.h>

#include "uim/render/frame.hpp"

namespace uim::render {

namespace {

std::string position(std::size_t row, std::size_t col) { return fmt::format("\x1b[{};{}H", row + 1, col + 1); }

std::string_view rtrim(std::string_view s) {
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

std::string to_ansi(const Frame& frame, const Frame* previous) {
  std::string out;
  const bool diff = previous && previous->height() == frame.height() && previous->width() == frame.width();
  if (!diff) {
    out += "\x1b[2J\x1b[H";
    for (std::size_t r = 0; r < frame.rows.size(); ++r) {
      out += frame.rows[r];
      if (r + 1 < frame.rows.size()) out += "\r\n";
    }
    out += position(frame.cursor.row, frame.cursor.col);
    return out;
  }
  for (std::size_t r = 0; r < frame.rows.size(); ++r) {
    if (frame.rows[r] != previous->rows[r]) out += position(r, 0) + frame.rows[r];
  }
  if (!out.empty() || !(frame.cursor == previous->cursor)) out += position(frame.cursor.row, frame.cursor.col);
  return out;
}

std::string to_plain(const Frame& frame) {
  std::string out;
  for (const auto& row : frame.rows) {
    auto text = rtrim(row);
    if (text.empty()) continue;
    out += text;
    out += "\r\n";
  }
  if (out.empty()) out = "\r\n";
  return out;
}

}  // namespace uim::render
