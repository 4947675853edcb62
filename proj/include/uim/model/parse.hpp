#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "uim/model/model.hpp"

namespace uim::model {

enum class ParseCode { XmlSyntax, UnknownElement, MissingAttr, BadAttrValue };

std::string_view to_string(ParseCode code) noexcept;

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseCode code, std::size_t line, std::size_t column, const std::string& message);

  ParseCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ParseCode code_;
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// Strict parse of one repository document. Unknown elements and attributes
/// are errors; whitespace between elements is ignored.
RepositoryDoc parse(std::string_view document_text);

/// Canonical XML for a document. parse(serialize(d)) == d.
std::string serialize(const RepositoryDoc& doc);

/// Identifier syntax shared by ids, variable names, option values and outcomes.
bool is_token(std::string_view text) noexcept;

}  // namespace uim::model
