#pragma once

// Minimal non-validating XML 1.0 reader producing an element tree with source
// positions. Supports the prolog, comments, processing instructions, CDATA,
// the five predefined entities and character references. DOCTYPE is rejected.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uim::xml {

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

struct Attribute {
  std::string name;
  std::string value;
  Position pos;
};

struct Element {
  std::string name;
  Position pos;
  std::vector<Attribute> attributes;
  std::vector<Element> children;
  /// Concatenated character data directly inside this element.
  std::string text;
  /// Position of the first non-whitespace character data, if any.
  Position text_pos;
  bool has_text = false;

  const Attribute* attribute(std::string_view attr) const;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(Position pos, const std::string& what) : std::runtime_error(what), pos_(pos) {}
  Position position() const noexcept { return pos_; }

 private:
  Position pos_;
};

/// Parses a complete document and returns its root element.
Element parse_document(std::string_view text);

/// Escapes text for use inside a double-quoted attribute value.
std::string escape_attribute(std::string_view text);
/// Escapes element character data.
std::string escape_text(std::string_view text);

}  // namespace uim::xml
