#pragma once

// Server-side protocol driver: decoder + option table + the subnegotiations a
// screen server cares about (window size, terminal type).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uim/telnet/codec.hpp"
#include "uim/telnet/negotiation.hpp"

namespace uim::telnet {

struct WindowSize {
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  bool operator==(const WindowSize&) const = default;
};

/// Parse a NAWS payload (width and height, big-endian 16-bit each).
std::optional<WindowSize> parse_window_size(std::string_view payload);
/// Parse a TERMINAL-TYPE IS payload; the name is lowercased.
std::optional<std::string> parse_terminal_type(std::string_view payload);

struct ProtocolOutput {
  Bytes reply;                       // bytes to write back to the peer
  Bytes data;                        // application data, IAC-unescaped
  std::optional<WindowSize> resize;  // last NAWS report in this chunk
  std::optional<std::string> terminal_type;
  std::vector<Command> commands;
  std::vector<ProtocolWarning> warnings;
};

class ServerProtocol {
 public:
  ServerProtocol();

  /// Opening negotiation bytes.
  Bytes start();

  ProtocolOutput feed(std::string_view bytes);

  /// Negotiation for window size / terminal type has settled: granted and
  /// answered, or refused.
  bool settled() const;

  bool server_echo() const { return options_.active_local(option::kEcho); }
  const OptionTable& options() const { return options_; }

 private:
  Decoder decoder_;
  OptionTable options_;
  bool terminal_type_requested_ = false;
  bool terminal_type_answered_ = false;
  bool window_size_answered_ = false;
};

/// One unit of operator input after end-of-line normalization.
struct InputToken {
  enum class Kind { Char, EndOfLine };
  Kind kind;
  char ch = 0;
  bool operator==(const InputToken&) const = default;
};

/// CR LF, CR NUL and bare LF each become one EndOfLine; a bare CR followed by
/// anything else is an EndOfLine too. State carries across chunk boundaries.
class EolNormalizer {
 public:
  std::vector<InputToken> feed(std::string_view data);

 private:
  bool after_cr_ = false;
};

}  // namespace uim::telnet
