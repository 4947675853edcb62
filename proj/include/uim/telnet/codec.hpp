#pragma once

// Telnet wire codec: incremental decoding of the byte stream into events and
// the matching encoder. Negotiation state lives in negotiation.hpp.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace uim::telnet {

/// Raw octets. std::string is used as the container; no text encoding implied.
using Bytes = std::string;

inline constexpr std::uint8_t kIAC = 255;
inline constexpr std::uint8_t kSB = 250;
inline constexpr std::uint8_t kSE = 240;

enum class Command : std::uint8_t {
  NOP = 241,
  BRK = 243,
  IP = 244,
  AO = 245,
  AYT = 246,
  EC = 247,
  EL = 248,
  GA = 249,
};

enum class Verb : std::uint8_t {
  WILL = 251,
  WONT = 252,
  DO = 253,
  DONT = 254,
};

namespace option {
inline constexpr std::uint8_t kEcho = 1;
inline constexpr std::uint8_t kSuppressGoAhead = 3;
inline constexpr std::uint8_t kTerminalType = 24;
inline constexpr std::uint8_t kWindowSize = 31;
inline constexpr std::uint8_t kLinemode = 34;
}  // namespace option

// TERMINAL-TYPE subnegotiation codes.
inline constexpr std::uint8_t kTerminalTypeIs = 0;
inline constexpr std::uint8_t kTerminalTypeSend = 1;

struct DataEvent {
  Bytes bytes;
  bool operator==(const DataEvent&) const = default;
};

struct CommandEvent {
  Command code;
  bool operator==(const CommandEvent&) const = default;
};

struct NegotiateEvent {
  Verb verb;
  std::uint8_t option;
  bool operator==(const NegotiateEvent&) const = default;
};

struct SubnegotiationEvent {
  std::uint8_t option;
  Bytes payload;
  bool operator==(const SubnegotiationEvent&) const = default;
};

using Event = std::variant<DataEvent, CommandEvent, NegotiateEvent, SubnegotiationEvent>;

/// Out-of-band diagnostics. Never part of the event stream; the offending
/// bytes are skipped and decoding continues.
struct ProtocolWarning {
  enum class Kind {
    StraySubnegotiationEnd,  // IAC SE with no open IAC SB
    UnknownCommand,          // IAC followed by a byte that is not a known command
    SubnegotiationOverflow,  // payload exceeded kMaxSubnegotiation, dropped
  };
  Kind kind;
  std::uint8_t byte = 0;
  bool operator==(const ProtocolWarning&) const = default;
};

struct DecodeResult {
  std::vector<Event> events;
  std::vector<ProtocolWarning> warnings;
};

/// Incremental decoder. Holds the bytes of an incomplete construct between
/// calls; any split of the input stream yields the same events once adjacent
/// DataEvents are coalesced.
class Decoder {
 public:
  static constexpr std::size_t kMaxSubnegotiation = 4096;

  DecodeResult decode(std::string_view input);

  /// Bytes retained from an unfinished command or subnegotiation.
  const Bytes& pending() const noexcept { return pending_; }

 private:
  Bytes pending_;
  bool discarding_subnegotiation_ = false;
};

Bytes encode(const Event& event);
Bytes encode(const std::vector<Event>& events);

/// Merges adjacent DataEvents and drops empty ones.
std::vector<Event> coalesce(std::vector<Event> events);

std::string_view verb_name(Verb verb) noexcept;
std::string describe(const Event& event);

bool is_known_command(std::uint8_t byte) noexcept;

}  // namespace uim::telnet
