#include "uim/model/xml.hpp"

#include <fmt/format.h>

#include <cstdint>

namespace uim::xml {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
bool is_name_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c == ':' ||
         static_cast<unsigned char>(c) >= 0x80;
}
bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class Reader {
 public:
  explicit Reader(std::string_view text) : s_(text) {
    if (s_.substr(0, 3) == "\xEF\xBB\xBF") s_.remove_prefix(3);
  }

  Element document() {
    skip_misc();
    if (at_end()) fail("document has no root element");
    if (!starts_with("<") || starts_with("</")) fail("expected root element");
    Element root = element();
    skip_misc();
    if (!at_end()) fail("content after the root element");
    return root;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
  Position pos_;

  bool at_end() const { return i_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[i_]; }
  bool starts_with(std::string_view p) const { return s_.substr(i_).substr(0, p.size()) == p; }

  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i_ < s_.size(); ++k, ++i_) {
      if (s_[i_] == '\n') {
        ++pos_.line;
        pos_.column = 1;
      } else if ((static_cast<unsigned char>(s_[i_]) & 0xC0) != 0x80) {
        ++pos_.column;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }
  [[noreturn]] void fail_at(Position p, const std::string& msg) const { throw SyntaxError(p, msg); }

  void expect(std::string_view p) {
    if (!starts_with(p)) fail(fmt::format("expected '{}'", p));
    advance(p.size());
  }

  void skip_space() {
    while (!at_end() && is_space(peek())) advance();
  }

  void skip_until(std::string_view terminator, const char* what) {
    while (!at_end() && !starts_with(terminator)) advance();
    if (at_end()) fail(fmt::format("unterminated {}", what));
    advance(terminator.size());
  }

  // Whitespace, comments and processing instructions outside the root.
  void skip_misc() {
    for (;;) {
      skip_space();
      if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!--")) {
        comment();
      } else if (starts_with("<!DOCTYPE")) {
        fail("DOCTYPE declarations are not supported");
      } else {
        return;
      }
    }
  }

  void comment() {
    advance(4);
    while (!at_end() && !starts_with("--")) advance();
    if (at_end()) fail("unterminated comment");
    if (!starts_with("-->")) fail("'--' not allowed inside a comment");
    advance(3);
  }

  std::string name() {
    if (!is_name_start(peek())) fail("expected a name");
    std::size_t start = i_;
    while (!at_end() && is_name_char(peek())) advance();
    return std::string(s_.substr(start, i_ - start));
  }

  // Decodes one reference starting at '&'.
  void reference(std::string& out) {
    Position start = pos_;
    advance();
    std::size_t semi = s_.find(';', i_);
    if (semi == std::string_view::npos || semi - i_ > 10) fail_at(start, "malformed entity reference");
    std::string_view ref = s_.substr(i_, semi - i_);
    if (ref == "lt") out += '<';
    else if (ref == "gt") out += '>';
    else if (ref == "amp") out += '&';
    else if (ref == "quot") out += '"';
    else if (ref == "apos") out += '\'';
    else if (!ref.empty() && ref[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = ref.size() > 1 && ref[1] == 'x';
      std::string_view digits = ref.substr(hex ? 2 : 1);
      if (digits.empty()) fail_at(start, "empty character reference");
      for (char c : digits) {
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else fail_at(start, "bad character reference");
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
        if (cp > 0x10FFFF) fail_at(start, "character reference out of range");
      }
      if (cp == 0) fail_at(start, "character reference to NUL");
      append_utf8(out, cp);
    } else {
      fail_at(start, fmt::format("unknown entity '&{};'", ref));
    }
    advance(semi - i_ + 1);
  }

  std::string attribute_value() {
    char quote = peek();
    if (quote != '"' && quote != '\'') fail("attribute value must be quoted");
    advance();
    std::string out;
    while (!at_end() && peek() != quote) {
      char c = peek();
      if (c == '<') fail("'<' not allowed in attribute value");
      if (c == '&') {
        reference(out);
        continue;
      }
      out += is_space(c) ? ' ' : c;
      advance();
    }
    if (at_end()) fail("unterminated attribute value");
    advance();
    return out;
  }

  Element element() {
    Element el;
    el.pos = pos_;
    expect("<");
    el.name = name();
    for (;;) {
      bool spaced = !at_end() && is_space(peek());
      skip_space();
      if (starts_with("/>")) {
        advance(2);
        return el;
      }
      if (starts_with(">")) {
        advance();
        break;
      }
      if (at_end()) fail("unterminated start tag");
      if (!spaced) fail("expected whitespace between attributes");
      Attribute attr;
      attr.pos = pos_;
      attr.name = name();
      skip_space();
      expect("=");
      skip_space();
      attr.value = attribute_value();
      for (const auto& a : el.attributes) {
        if (a.name == attr.name) fail_at(attr.pos, fmt::format("duplicate attribute '{}'", attr.name));
      }
      el.attributes.push_back(std::move(attr));
    }
    content(el);
    return el;
  }

  void content(Element& el) {
    for (;;) {
      if (at_end()) fail(fmt::format("unclosed element '{}'", el.name));
      if (starts_with("</")) {
        Position close = pos_;
        advance(2);
        std::string closing = name();
        skip_space();
        expect(">");
        if (closing != el.name) {
          fail_at(close, fmt::format("mismatched closing tag '</{}>' for '<{}>'", closing, el.name));
        }
        return;
      }
      if (starts_with("<!--")) {
        comment();
      } else if (starts_with("<![CDATA[")) {
        Position p = pos_;
        advance(9);
        std::size_t start = i_;
        while (!at_end() && !starts_with("]]>")) advance();
        if (at_end()) fail("unterminated CDATA section");
        note_text(el, p, s_.substr(start, i_ - start));
        advance(3);
      } else if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!")) {
        fail("unexpected markup declaration");
      } else if (peek() == '<') {
        el.children.push_back(element());
      } else {
        Position p = pos_;
        std::string text;
        while (!at_end() && peek() != '<') {
          if (peek() == '&') {
            reference(text);
          } else {
            if (starts_with("]]>")) fail("']]>' not allowed in character data");
            text += peek();
            advance();
          }
        }
        note_text(el, p, text);
      }
    }
  }

  static void note_text(Element& el, Position p, std::string_view text) {
    bool blank = true;
    for (char c : text) {
      if (!is_space(c)) {
        blank = false;
        break;
      }
    }
    if (!blank && !el.has_text) {
      el.has_text = true;
      el.text_pos = p;
    }
    el.text += text;
  }
};

}  // namespace

const Attribute* Element::attribute(std::string_view attr) const {
  for (const auto& a : attributes) {
    if (a.name == attr) return &a;
  }
  return nullptr;
}

Element parse_document(std::string_view text) { return Reader(text).document(); }

std::string escape_attribute(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace uim::xml
