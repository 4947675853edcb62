#include "uim/telnet/codec.hpp"

#include <fmt/format.h>

namespace uim::telnet {

namespace {

bool is_verb(std::uint8_t b) noexcept { return b >= 251 && b <= 254; }

void append_data(std::vector<Event>& events, char c) {
  if (!events.empty()) {
    if (auto* data = std::get_if<DataEvent>(&events.back())) {
      data->bytes.push_back(c);
      return;
    }
  }
  events.emplace_back(DataEvent{Bytes(1, c)});
}

void escape_into(Bytes& out, std::string_view bytes) {
  for (char c : bytes) {
    out.push_back(c);
    if (static_cast<std::uint8_t>(c) == kIAC) out.push_back(c);
  }
}

}  // namespace

bool is_known_command(std::uint8_t byte) noexcept {
  switch (byte) {
    case 241: case 243: case 244: case 245: case 246: case 247: case 248: case 249:
      return true;
    default:
      return false;
  }
}

DecodeResult Decoder::decode(std::string_view input) {
  DecodeResult out;
  Bytes work = std::move(pending_);
  pending_.clear();
  work.append(input);

  const auto at = [&](std::size_t i) { return static_cast<std::uint8_t>(work[i]); };
  const std::size_t n = work.size();
  std::size_t i = 0;

  // Finish skipping an oversized subnegotiation: everything up to IAC SE goes.
  if (discarding_subnegotiation_) {
    while (i < n) {
      if (at(i) != kIAC) {
        ++i;
        continue;
      }
      if (i + 1 >= n) {
        pending_ = work.substr(i);
        return out;
      }
      if (at(i + 1) == kSE) {
        discarding_subnegotiation_ = false;
        i += 2;
        break;
      }
      i += 2;
    }
    if (discarding_subnegotiation_) return out;
  }

  while (i < n) {
    const std::uint8_t b = at(i);
    if (b != kIAC) {
      append_data(out.events, work[i]);
      ++i;
      continue;
    }
    if (i + 1 >= n) {
      pending_ = work.substr(i);
      break;
    }
    const std::uint8_t cmd = at(i + 1);
    if (cmd == kIAC) {
      append_data(out.events, work[i + 1]);
      i += 2;
    } else if (is_verb(cmd)) {
      if (i + 2 >= n) {
        pending_ = work.substr(i);
        break;
      }
      out.events.emplace_back(NegotiateEvent{static_cast<Verb>(cmd), at(i + 2)});
      i += 3;
    } else if (cmd == kSB) {
      if (i + 2 >= n) {
        pending_ = work.substr(i);
        break;
      }
      const std::uint8_t opt = at(i + 2);
      Bytes payload;
      const std::size_t warnings_before = out.warnings.size();
      std::size_t j = i + 3;
      bool complete = false;
      bool overflow = false;
      while (j < n) {
        if (j - i > kMaxSubnegotiation + 3) {
          overflow = true;
          break;
        }
        if (at(j) != kIAC) {
          payload.push_back(work[j]);
          ++j;
          continue;
        }
        if (j + 1 >= n) break;
        const std::uint8_t next = at(j + 1);
        if (next == kSE) {
          complete = true;
          j += 2;
          break;
        }
        if (next == kIAC) {
          payload.push_back(work[j + 1]);
        } else {
          out.warnings.push_back({ProtocolWarning::Kind::UnknownCommand, next});
        }
        j += 2;
      }
      if (overflow) {
        out.warnings.push_back({ProtocolWarning::Kind::SubnegotiationOverflow, opt});
        discarding_subnegotiation_ = true;
        // Re-enter through the discard path for the remainder.
        pending_.clear();
        auto rest = decode(std::string_view(work).substr(j));
        out.events.insert(out.events.end(), rest.events.begin(), rest.events.end());
        out.warnings.insert(out.warnings.end(), rest.warnings.begin(), rest.warnings.end());
        return out;
      }
      if (!complete) {
        pending_ = work.substr(i);
        // Inner warnings are reported once, when the construct completes.
        out.warnings.resize(warnings_before);
        break;
      }
      out.events.emplace_back(SubnegotiationEvent{opt, std::move(payload)});
      i = j;
    } else if (cmd == kSE) {
      out.warnings.push_back({ProtocolWarning::Kind::StraySubnegotiationEnd, cmd});
      i += 2;
    } else if (is_known_command(cmd)) {
      out.events.emplace_back(CommandEvent{static_cast<Command>(cmd)});
      i += 2;
    } else {
      out.warnings.push_back({ProtocolWarning::Kind::UnknownCommand, cmd});
      i += 2;
    }
  }
  return out;
}

Bytes encode(const Event& event) {
  Bytes out;
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, DataEvent>) {
          escape_into(out, e.bytes);
        } else if constexpr (std::is_same_v<T, CommandEvent>) {
          out.push_back(static_cast<char>(kIAC));
          out.push_back(static_cast<char>(e.code));
        } else if constexpr (std::is_same_v<T, NegotiateEvent>) {
          out.push_back(static_cast<char>(kIAC));
          out.push_back(static_cast<char>(e.verb));
          out.push_back(static_cast<char>(e.option));
        } else {
          out.push_back(static_cast<char>(kIAC));
          out.push_back(static_cast<char>(kSB));
          out.push_back(static_cast<char>(e.option));
          escape_into(out, e.payload);
          out.push_back(static_cast<char>(kIAC));
          out.push_back(static_cast<char>(kSE));
        }
      },
      event);
  return out;
}

Bytes encode(const std::vector<Event>& events) {
  Bytes out;
  for (const auto& e : events) out += encode(e);
  return out;
}

std::vector<Event> coalesce(std::vector<Event> events) {
  std::vector<Event> out;
  out.reserve(events.size());
  for (auto& e : events) {
    if (auto* data = std::get_if<DataEvent>(&e)) {
      if (data->bytes.empty()) continue;
      if (!out.empty()) {
        if (auto* prev = std::get_if<DataEvent>(&out.back())) {
          prev->bytes += data->bytes;
          continue;
        }
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string_view verb_name(Verb verb) noexcept {
  switch (verb) {
    case Verb::WILL: return "WILL";
    case Verb::WONT: return "WONT";
    case Verb::DO: return "DO";
    case Verb::DONT: return "DONT";
  }
  return "?";
}

std::string describe(const Event& event) {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, DataEvent>) {
          return fmt::format("Data({} bytes)", e.bytes.size());
        } else if constexpr (std::is_same_v<T, CommandEvent>) {
          return fmt::format("Command({})", static_cast<int>(e.code));
        } else if constexpr (std::is_same_v<T, NegotiateEvent>) {
          return fmt::format("{} {}", verb_name(e.verb), e.option);
        } else {
          return fmt::format("SB {} ({} bytes)", e.option, e.payload.size());
        }
      },
      event);
}

}  // namespace uim::telnet
