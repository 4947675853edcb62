#include "uim/telnet/negotiation.hpp"

#include <algorithm>

namespace uim::telnet {

namespace {

struct HalfVerbs {
  Verb ask_yes;  // what we send to turn it on
  Verb ask_no;   // what we send to turn it off
};

constexpr HalfVerbs verbs_for(Side side) {
  return side == Side::Local ? HalfVerbs{Verb::WILL, Verb::WONT} : HalfVerbs{Verb::DO, Verb::DONT};
}

Event negotiate(Verb verb, std::uint8_t option) { return NegotiateEvent{verb, option}; }

// Peer says it will (or wants us to) turn the half on.
void on_positive(HalfState& h, bool agree, Side side, std::uint8_t option, NegotiationResult& out,
                 NegotiationError& err) {
  const auto v = verbs_for(side);
  switch (h.state) {
    case QState::No:
      if (agree) {
        h.state = QState::Yes;
        out.replies.push_back(negotiate(v.ask_yes, option));
        out.changes.push_back({option, side, true});
      } else {
        out.replies.push_back(negotiate(v.ask_no, option));
      }
      break;
    case QState::Yes:
      break;
    case QState::WantNo:
      if (h.queue == QQueue::Empty) {
        h.state = QState::No;
        err = side == Side::Remote ? NegotiationError::PeerAnsweredDontWithWill
                                   : NegotiationError::PeerAnsweredDontWithDo;
      } else {
        h.state = QState::Yes;
        h.queue = QQueue::Empty;
        err = side == Side::Remote ? NegotiationError::PeerAnsweredDontWithWill
                                   : NegotiationError::PeerAnsweredDontWithDo;
        out.changes.push_back({option, side, true});
      }
      break;
    case QState::WantYes:
      if (h.queue == QQueue::Empty) {
        h.state = QState::Yes;
        out.changes.push_back({option, side, true});
      } else {
        h.state = QState::WantNo;
        h.queue = QQueue::Empty;
        out.replies.push_back(negotiate(v.ask_no, option));
      }
      break;
  }
}

// Peer refuses, or turns the half off.
void on_negative(HalfState& h, Side side, std::uint8_t option, NegotiationResult& out) {
  const auto v = verbs_for(side);
  switch (h.state) {
    case QState::No:
      break;
    case QState::Yes:
      h.state = QState::No;
      out.replies.push_back(negotiate(v.ask_no, option));
      out.changes.push_back({option, side, false});
      break;
    case QState::WantNo:
      if (h.queue == QQueue::Empty) {
        h.state = QState::No;
        out.changes.push_back({option, side, false});
      } else {
        h.state = QState::WantYes;
        h.queue = QQueue::Empty;
        out.replies.push_back(negotiate(v.ask_yes, option));
      }
      break;
    case QState::WantYes:
      h.state = QState::No;
      h.queue = QQueue::Empty;
      break;
  }
}

}  // namespace

NegotiationPolicy NegotiationPolicy::server_default() {
  NegotiationPolicy p;
  p.accept_local[option::kEcho] = true;
  p.accept_local[option::kSuppressGoAhead] = true;
  p.accept_remote[option::kSuppressGoAhead] = true;
  p.accept_remote[option::kWindowSize] = true;
  p.accept_remote[option::kTerminalType] = true;
  return p;
}

OptionTable::OptionTable(NegotiationPolicy policy) : policy_(policy) {
  // Policies may only ever agree to supported options.
  for (int opt = 0; opt < 256; ++opt) {
    if (!is_supported(static_cast<std::uint8_t>(opt))) {
      policy_.accept_local[opt] = false;
      policy_.accept_remote[opt] = false;
    }
  }
}

bool OptionTable::is_supported(std::uint8_t option) noexcept {
  return std::find(kSupported.begin(), kSupported.end(), option) != kSupported.end();
}

NegotiationResult OptionTable::receive(Verb verb, std::uint8_t option) {
  NegotiationResult out;
  last_error_ = NegotiationError::None;
  auto& rec = records_[option];
  switch (verb) {
    case Verb::WILL:
      on_positive(rec.them, policy_.accept_remote[option], Side::Remote, option, out, last_error_);
      break;
    case Verb::WONT:
      on_negative(rec.them, Side::Remote, option, out);
      break;
    case Verb::DO:
      on_positive(rec.us, policy_.accept_local[option], Side::Local, option, out, last_error_);
      break;
    case Verb::DONT:
      on_negative(rec.us, Side::Local, option, out);
      break;
  }
  return out;
}

std::optional<Event> OptionTable::request(Side side, std::uint8_t option, bool enable,
                                          NegotiationError* error) {
  auto set_error = [&](NegotiationError e) {
    last_error_ = e;
    if (error) *error = e;
  };
  set_error(NegotiationError::None);
  if (enable && !is_supported(option)) {
    set_error(NegotiationError::AlreadyDisabled);
    return std::nullopt;
  }
  auto& h = side == Side::Local ? records_[option].us : records_[option].them;
  const auto v = verbs_for(side);
  const QState target = enable ? QState::Yes : QState::No;
  const QState wanting = enable ? QState::WantYes : QState::WantNo;
  const QState unwanting = enable ? QState::WantNo : QState::WantYes;

  if (h.state == target) {
    set_error(enable ? NegotiationError::AlreadyEnabled : NegotiationError::AlreadyDisabled);
    return std::nullopt;
  }
  if (h.state == wanting) {
    if (h.queue == QQueue::Empty) {
      set_error(NegotiationError::AlreadyNegotiating);
    } else {
      h.queue = QQueue::Empty;
    }
    return std::nullopt;
  }
  if (h.state == unwanting) {
    if (h.queue == QQueue::Empty) {
      h.queue = QQueue::Opposite;
    } else {
      set_error(NegotiationError::AlreadyQueued);
    }
    return std::nullopt;
  }
  // Opposite resting state: start negotiating.
  h.state = wanting;
  return negotiate(enable ? v.ask_yes : v.ask_no, option);
}

std::vector<Event> OptionTable::initial_handshake() {
  std::vector<Event> out;
  for (auto [side, opt] : {std::pair{Side::Local, option::kEcho},
                           std::pair{Side::Local, option::kSuppressGoAhead},
                           std::pair{Side::Remote, option::kWindowSize},
                           std::pair{Side::Remote, option::kTerminalType}}) {
    if (auto e = request(side, opt, true)) out.push_back(std::move(*e));
  }
  return out;
}

const OptionRecord& OptionTable::record(std::uint8_t option) const { return records_[option]; }

bool OptionTable::pending() const {
  return std::any_of(kSupported.begin(), kSupported.end(), [&](std::uint8_t opt) {
    const auto& r = records_[opt];
    return r.us.state == QState::WantYes || r.us.state == QState::WantNo ||
           r.them.state == QState::WantYes || r.them.state == QState::WantNo;
  });
}

}  // namespace uim::telnet
