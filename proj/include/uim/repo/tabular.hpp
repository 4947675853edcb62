#pragma once

// Table-backed repository: pipe-delimited files with a header row, turned into
// canonical repository XML.
//
//   screens.psv      id|type|title|var|root
//   items.psv        screen|seq|label|kind|target        kind: node|leaf
//   fields.psv       screen|seq|name|kind|required|max|masked
//   options.psv      screen|seq|label|value
//   lines.psv        screen|seq|text
//   flows.psv        id|start
//   transitions.psv  flow|screen|outcome|goto
//
// A literal '|' or '\' inside a cell is written as '\|' or '\\'. Missing
// files count as empty tables.

#include <cstddef>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace uim::repo {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

struct TabularSource {
  Table screens, items, fields, options, lines, flows, transitions;
};

class GenerateError : public std::runtime_error {
 public:
  GenerateError(std::string table, std::size_t row, std::string reason);

  const std::string& table() const noexcept { return table_; }
  /// 1-based data row (header excluded); 0 when not row-specific.
  std::size_t row() const noexcept { return row_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string table_;
  std::size_t row_;
  std::string reason_;
};

/// Standard column sets, in file order.
const std::map<std::string, std::vector<std::string>>& table_schemas();

Table parse_table(std::string_view text, const std::string& table_name);
std::string format_table(const Table& table);

TabularSource read_tabular(const std::filesystem::path& dir);
void write_tabular(const TabularSource& source, const std::filesystem::path& dir);

/// Canonical XML for the tables: screens and flows ordered by id, children by
/// seq, transitions by (screen, outcome). Throws GenerateError.
std::string generate_xml(const TabularSource& source);

}  // namespace uim::repo
