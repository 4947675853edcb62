#include "uim/server/line_editor.hpp"

namespace uim::server {

LineEditor::Step LineEditor::feed(const telnet::InputToken& token, bool masked, bool echo) {
  Step step;
  if (token.kind == telnet::InputToken::Kind::EndOfLine) {
    step.line = std::move(buffer_);
    buffer_.clear();
    return step;
  }
  const char c = token.ch;
  if (c == 0x08 || c == 0x7F) return erase_char(echo);
  if (c < 0x20 || c > 0x7E) return step;
  if (buffer_.size() >= kMaxLine) return step;
  buffer_.push_back(c);
  if (echo) step.echo.push_back(masked ? '*' : c);
  return step;
}

LineEditor::Step LineEditor::erase_char(bool echo) {
  Step step;
  if (buffer_.empty()) return step;
  buffer_.pop_back();
  if (echo) step.echo = "\b \b";
  return step;
}

LineEditor::Step LineEditor::erase_line(bool echo) {
  Step step;
  if (echo) {
    for (std::size_t i = 0; i < buffer_.size(); ++i) step.echo += "\b \b";
  }
  buffer_.clear();
  return step;
}

}  // namespace uim::server
