#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "uim/telnet/protocol.hpp"

namespace uim::server {

/// Folds normalized input tokens into lines. Keeps printable ASCII only,
/// handles BS/DEL as a destructive backspace and produces the echo bytes.
class LineEditor {
 public:
  static constexpr std::size_t kMaxLine = 255;

  struct Step {
    std::string echo;
    std::optional<std::string> line;  // set when a line was completed
  };

  /// `masked` echoes '*' instead of the character; `echo` false echoes nothing.
  Step feed(const telnet::InputToken& token, bool masked, bool echo);
  /// Telnet EC / EL.
  Step erase_char(bool echo);
  Step erase_line(bool echo);

  const std::string& buffer() const noexcept { return buffer_; }

 private:
  std::string buffer_;
};

}  // namespace uim::server
