#pragma once

// Option negotiation with the loop-free "Q method" (RFC 1143). Each supported
// option carries two independent half-states: what we perform ("us") and what
// the peer performs ("them"). Unsupported options are refused outright and
// never leave the No state.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "uim/telnet/codec.hpp"

namespace uim::telnet {

enum class QState : std::uint8_t { No, Yes, WantNo, WantYes };
enum class QQueue : std::uint8_t { Empty, Opposite };

struct HalfState {
  QState state = QState::No;
  QQueue queue = QQueue::Empty;
  bool operator==(const HalfState&) const = default;
};

struct OptionRecord {
  HalfState us;
  HalfState them;
  bool operator==(const OptionRecord&) const = default;
};

enum class Side : std::uint8_t { Local, Remote };

/// Which options this endpoint agrees to when the peer asks.
struct NegotiationPolicy {
  std::array<bool, 256> accept_local{};   // peer sends DO x: may we WILL x?
  std::array<bool, 256> accept_remote{};  // peer sends WILL x: do we want it?

  /// Server policy: we perform ECHO and SGA; we accept SGA, NAWS and
  /// TERMINAL-TYPE from the peer.
  static NegotiationPolicy server_default();
};

/// An option half that finished changing state as a result of a received verb.
struct OptionChange {
  std::uint8_t option;
  Side side;
  bool enabled;
  bool operator==(const OptionChange&) const = default;
};

struct NegotiationResult {
  std::vector<Event> replies;
  std::vector<OptionChange> changes;
};

/// Protocol errors detected by the Q method (peer answered a request it never
/// received, or we asked for something already in progress). Informational.
enum class NegotiationError : std::uint8_t {
  None,
  AlreadyEnabled,
  AlreadyDisabled,
  AlreadyNegotiating,
  AlreadyQueued,
  PeerAnsweredDontWithWill,
  PeerAnsweredDontWithDo,
};

class OptionTable {
 public:
  static constexpr std::array<std::uint8_t, 4> kSupported = {
      option::kEcho, option::kSuppressGoAhead, option::kTerminalType, option::kWindowSize};

  explicit OptionTable(NegotiationPolicy policy = NegotiationPolicy::server_default());

  static bool is_supported(std::uint8_t option) noexcept;

  NegotiationResult receive(Verb verb, std::uint8_t option);

  /// Ask to enable/disable an option on the given side. Returns the verb to
  /// send, if any; errors leave the state untouched.
  std::optional<Event> request(Side side, std::uint8_t option, bool enable,
                               NegotiationError* error = nullptr);

  /// The four opening requests of a server session.
  std::vector<Event> initial_handshake();

  const OptionRecord& record(std::uint8_t option) const;
  bool active_local(std::uint8_t option) const { return record(option).us.state == QState::Yes; }
  bool active_remote(std::uint8_t option) const { return record(option).them.state == QState::Yes; }
  /// True while any half of a supported option waits for an answer.
  bool pending() const;

  NegotiationError last_error() const noexcept { return last_error_; }

 private:
  NegotiationPolicy policy_;
  std::array<OptionRecord, 256> records_{};
  NegotiationError last_error_ = NegotiationError::None;
};

}  // namespace uim::telnet
