#include "uim/repo/tabular.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "uim/model/model.hpp"
#include "uim/model/parse.hpp"

namespace uim::repo {

namespace fs = std::filesystem;

GenerateError::GenerateError(std::string table, std::size_t row, std::string reason)
    : std::runtime_error(row ? fmt::format("{} row {}: {}", table, row, reason) : fmt::format("{}: {}", table, reason)),
      table_(std::move(table)),
      row_(row),
      reason_(std::move(reason)) {}

std::size_t Table::column(std::string_view name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range(fmt::format("no column '{}'", name));
  return static_cast<std::size_t>(it - columns.begin());
}

const std::map<std::string, std::vector<std::string>>& table_schemas() {
  static const std::map<std::string, std::vector<std::string>> schemas = {
      {"screens", {"id", "type", "title", "var", "root"}},
      {"items", {"screen", "seq", "label", "kind", "target"}},
      {"fields", {"screen", "seq", "name", "kind", "required", "max", "masked"}},
      {"options", {"screen", "seq", "label", "value"}},
      {"lines", {"screen", "seq", "text"}},
      {"flows", {"id", "start"}},
      {"transitions", {"flow", "screen", "outcome", "goto"}},
  };
  return schemas;
}

namespace {

std::vector<std::string> split_cells(std::string_view line) {
  std::vector<std::string> cells(1);
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '\\' && i + 1 < line.size() && (line[i + 1] == '|' || line[i + 1] == '\\')) {
      cells.back() += line[++i];
    } else if (c == '|') {
      cells.emplace_back();
    } else {
      cells.back() += c;
    }
  }
  return cells;
}

std::string escape_cell(std::string_view cell) {
  std::string out;
  for (char c : cell) {
    if (c == '|' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

Table& table_by_name(TabularSource& src, const std::string& name) {
  if (name == "screens") return src.screens;
  if (name == "items") return src.items;
  if (name == "fields") return src.fields;
  if (name == "options") return src.options;
  if (name == "lines") return src.lines;
  if (name == "flows") return src.flows;
  return src.transitions;
}

const Table& table_by_name(const TabularSource& src, const std::string& name) {
  return table_by_name(const_cast<TabularSource&>(src), name);
}

// Row accessor that reports errors against the table and 1-based row number.
struct RowView {
  const Table& table;
  const std::string& name;
  std::size_t index;

  const std::string& operator[](std::string_view col) const { return table.rows[index][table.column(col)]; }
  [[noreturn]] void fail(std::string reason) const { throw GenerateError(name, index + 1, std::move(reason)); }

  std::string token(std::string_view col) const {
    const auto& v = (*this)[col];
    if (!model::is_token(v)) fail(fmt::format("{} '{}' is not a valid identifier", col, v));
    return v;
  }
  std::size_t number(std::string_view col) const {
    const auto& v = (*this)[col];
    std::size_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) fail(fmt::format("{} '{}' is not a number", col, v));
    return out;
  }
  bool flag(std::string_view col) const {
    const auto& v = (*this)[col];
    if (v == "true") return true;
    if (v == "false" || v.empty()) return false;
    fail(fmt::format("{} must be true or false, got '{}'", col, v));
  }
};

template <typename Fn>
void for_rows(const TabularSource& src, const std::string& name, Fn fn) {
  const auto& t = table_by_name(src, name);
  for (std::size_t i = 0; i < t.rows.size(); ++i) fn(RowView{t, name, i});
}

}  // namespace

Table parse_table(std::string_view text, const std::string& table_name) {
  Table t;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    if (line.empty()) continue;
    auto cells = split_cells(line);
    if (line_no++ == 0) {
      t.columns = std::move(cells);
      continue;
    }
    if (cells.size() != t.columns.size()) {
      throw GenerateError(table_name, t.rows.size() + 1,
                          fmt::format("expected {} cells, found {}", t.columns.size(), cells.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (auto it = table_schemas().find(table_name); it != table_schemas().end()) {
    if (t.columns.empty()) {
      t.columns = it->second;
    } else if (t.columns != it->second) {
      throw GenerateError(table_name, 0, fmt::format("header must be '{}'", fmt::join(it->second, "|")));
    }
  }
  return t;
}

std::string format_table(const Table& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += '|';
      out += escape_cell(cells[i]);
    }
    out += '\n';
  };
  line(table.columns);
  for (const auto& r : table.rows) line(r);
  return out;
}

TabularSource read_tabular(const fs::path& dir) {
  TabularSource src;
  for (const auto& [name, columns] : table_schemas()) {
    auto& t = table_by_name(src, name);
    const auto file = dir / (name + ".psv");
    if (!fs::exists(file)) {
      t.columns = columns;
      continue;
    }
    std::ifstream in(file, std::ios::binary);
    if (!in) throw GenerateError(name, 0, fmt::format("cannot read {}", file.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    t = parse_table(buf.str(), name);
  }
  return src;
}

void write_tabular(const TabularSource& source, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& [name, columns] : table_schemas()) {
    std::ofstream out(dir / (name + ".psv"), std::ios::binary | std::ios::trunc);
    out << format_table(table_by_name(source, name));
  }
}

std::string generate_xml(const TabularSource& src) {
  model::RepositoryDoc doc;
  std::map<std::string, model::Screen> screens;
  std::map<std::string, model::Flow> flows;
  std::vector<std::string> roots;

  for_rows(src, "screens", [&](const RowView& r) {
    model::Screen s;
    s.id = r.token("id");
    if (s.id == model::kEnd) r.fail("'end' is reserved");
    auto type = model::screen_type_from(r["type"]);
    if (!type) r.fail(fmt::format("unknown screen type '{}'", r["type"]));
    s.type = *type;
    s.title = r["title"];
    if (s.is_option()) {
      s.var = r.token("var");
    } else if (!r["var"].empty()) {
      r.fail("var is only meaningful on single/multi screens");
    }
    if (r.flag("root")) roots.push_back(s.id);
    if (!screens.emplace(s.id, std::move(s)).second) r.fail(fmt::format("duplicate screen id '{}'", r["id"]));
  });
  if (roots.empty()) throw GenerateError("screens", 0, "NoRoot: no screen is marked as root");
  if (roots.size() > 1) throw GenerateError("screens", 0, fmt::format("more than one root ({})", fmt::join(roots, ", ")));
  doc.root_menu = roots.front();

  for_rows(src, "flows", [&](const RowView& r) {
    model::Flow f;
    f.id = r.token("id");
    f.start = r.token("start");
    if (!screens.contains(f.start)) r.fail(fmt::format("dangling key: start screen '{}'", f.start));
    if (!flows.emplace(f.id, std::move(f)).second) r.fail(fmt::format("duplicate flow id '{}'", r["id"]));
  });

  // Children are keyed by (screen, seq) so file order doesn't matter.
  auto owner = [&](const RowView& r, model::ScreenType expected, bool option_screen = false) -> model::Screen& {
    const auto& id = r["screen"];
    auto it = screens.find(id);
    if (it == screens.end()) r.fail(fmt::format("dangling key: screen '{}'", id));
    const bool ok = option_screen ? it->second.is_option() : it->second.type == expected;
    if (!ok) r.fail(fmt::format("screen '{}' is a {} screen", id, model::to_string(it->second.type)));
    return it->second;
  };
  std::map<std::string, std::map<std::size_t, model::MenuItem>> items;
  std::map<std::string, std::map<std::size_t, model::FieldDef>> fields;
  std::map<std::string, std::map<std::size_t, model::OptionDef>> options;
  std::map<std::string, std::map<std::size_t, std::string>> lines;
  auto place = [](auto& bucket, const RowView& r, const std::string& screen, auto value) {
    if (!bucket[screen].emplace(r.number("seq"), std::move(value)).second) {
      r.fail(fmt::format("duplicate seq {} for screen '{}'", r["seq"], screen));
    }
  };

  for_rows(src, "items", [&](const RowView& r) {
    auto& s = owner(r, model::ScreenType::Menu);
    model::MenuItem item;
    item.label = r["label"];
    item.target = r.token("target");
    if (r["kind"] == "node") {
      item.kind = model::MenuItem::Kind::Node;
      if (!screens.contains(item.target)) r.fail(fmt::format("dangling key: menu '{}'", item.target));
    } else if (r["kind"] == "leaf") {
      if (!flows.contains(item.target)) r.fail(fmt::format("dangling key: flow '{}'", item.target));
    } else {
      r.fail(fmt::format("kind must be node or leaf, got '{}'", r["kind"]));
    }
    place(items, r, s.id, std::move(item));
  });
  for_rows(src, "fields", [&](const RowView& r) {
    auto& s = owner(r, model::ScreenType::Input);
    model::FieldDef f;
    f.name = r.token("name");
    if (r["kind"] == "number") f.kind = model::FieldKind::Number;
    else if (r["kind"] != "text" && !r["kind"].empty()) r.fail(fmt::format("unknown field kind '{}'", r["kind"]));
    f.required = r.flag("required");
    f.masked = r.flag("masked");
    if (!r["max"].empty()) f.max_len = r.number("max");
    place(fields, r, s.id, std::move(f));
  });
  for_rows(src, "options", [&](const RowView& r) {
    auto& s = owner(r, model::ScreenType::SingleOption, true);
    place(options, r, s.id, model::OptionDef{r["label"], r.token("value")});
  });
  for_rows(src, "lines", [&](const RowView& r) {
    auto& s = owner(r, model::ScreenType::Info);
    place(lines, r, s.id, r["text"]);
  });
  for_rows(src, "transitions", [&](const RowView& r) {
    auto it = flows.find(r["flow"]);
    if (it == flows.end()) r.fail(fmt::format("dangling key: flow '{}'", r["flow"]));
    model::Transition t{r.token("screen"), r.token("outcome"), r.token("goto")};
    if (!screens.contains(t.screen)) r.fail(fmt::format("dangling key: screen '{}'", t.screen));
    if (!t.ends() && !screens.contains(t.target)) r.fail(fmt::format("dangling key: goto '{}'", t.target));
    it->second.steps.push_back(std::move(t));
  });

  for (auto& [id, s] : screens) {
    for (auto& [seq, v] : items[id]) s.items.push_back(std::move(v));
    for (auto& [seq, v] : fields[id]) s.fields.push_back(std::move(v));
    for (auto& [seq, v] : options[id]) s.options.push_back(std::move(v));
    for (auto& [seq, v] : lines[id]) s.lines.push_back(std::move(v));
    doc.screens.push_back(std::move(s));
  }
  for (auto& [id, f] : flows) doc.flows.push_back(std::move(f));
  return model::serialize(model::canonical(std::move(doc)));
}

}  // namespace uim::repo
