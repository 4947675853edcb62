#include "uim/telnet/protocol.hpp"

#include <algorithm>
#include <cctype>

namespace uim::telnet {

std::optional<WindowSize> parse_window_size(std::string_view payload) {
  if (payload.size() != 4) return std::nullopt;
  auto u8 = [&](std::size_t i) { return static_cast<std::uint16_t>(static_cast<std::uint8_t>(payload[i])); };
  return WindowSize{static_cast<std::uint16_t>((u8(0) << 8) | u8(1)),
                    static_cast<std::uint16_t>((u8(2) << 8) | u8(3))};
}

std::optional<std::string> parse_terminal_type(std::string_view payload) {
  if (payload.empty() || static_cast<std::uint8_t>(payload[0]) != kTerminalTypeIs) return std::nullopt;
  std::string name(payload.substr(1));
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return name;
}

ServerProtocol::ServerProtocol() = default;

Bytes ServerProtocol::start() { return encode(options_.initial_handshake()); }

ProtocolOutput ServerProtocol::feed(std::string_view bytes) {
  ProtocolOutput out;
  auto decoded = decoder_.decode(bytes);
  out.warnings = std::move(decoded.warnings);
  for (auto& ev : decoded.events) {
    if (auto* d = std::get_if<DataEvent>(&ev)) {
      out.data += d->bytes;
    } else if (auto* c = std::get_if<CommandEvent>(&ev)) {
      out.commands.push_back(c->code);
    } else if (auto* n = std::get_if<NegotiateEvent>(&ev)) {
      auto result = options_.receive(n->verb, n->option);
      out.reply += encode(result.replies);
      for (const auto& change : result.changes) {
        if (change.option == option::kTerminalType && change.side == Side::Remote && change.enabled &&
            !terminal_type_requested_) {
          terminal_type_requested_ = true;
          out.reply += encode(SubnegotiationEvent{option::kTerminalType, Bytes(1, static_cast<char>(kTerminalTypeSend))});
        }
      }
    } else if (auto* sb = std::get_if<SubnegotiationEvent>(&ev)) {
      if (sb->option == option::kWindowSize && options_.active_remote(option::kWindowSize)) {
        if (auto ws = parse_window_size(sb->payload)) {
          window_size_answered_ = true;
          out.resize = *ws;
        }
      } else if (sb->option == option::kTerminalType && options_.active_remote(option::kTerminalType)) {
        if (auto name = parse_terminal_type(sb->payload)) {
          terminal_type_answered_ = true;
          out.terminal_type = std::move(name);
        }
      }
    }
  }
  return out;
}

bool ServerProtocol::settled() const {
  const auto& naws = options_.record(option::kWindowSize).them.state;
  const auto& ttype = options_.record(option::kTerminalType).them.state;
  if (naws == QState::WantYes || ttype == QState::WantYes) return false;
  if (ttype == QState::Yes && !terminal_type_answered_) return false;
  if (naws == QState::Yes && !window_size_answered_) return false;
  return true;
}

std::vector<InputToken> EolNormalizer::feed(std::string_view data) {
  std::vector<InputToken> out;
  for (char c : data) {
    if (after_cr_) {
      after_cr_ = false;
      if (c == '\n' || c == '\0') continue;
    }
    if (c == '\r') {
      after_cr_ = true;
      out.push_back({InputToken::Kind::EndOfLine});
    } else if (c == '\n') {
      out.push_back({InputToken::Kind::EndOfLine});
    } else {
      out.push_back({InputToken::Kind::Char, c});
    }
  }
  return out;
}

}  // namespace uim::telnet
