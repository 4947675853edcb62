#include "uim/model/parse.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <initializer_list>

#include "uim/model/xml.hpp"

namespace uim::model {

namespace {

constexpr std::size_t kMaxFieldLen = 255;

[[noreturn]] void fail(ParseCode code, xml::Position pos, const std::string& msg) {
  throw ParseError(code, pos.line, pos.column, msg);
}

bool printable(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) { return c >= 0x20 && c <= 0x7E; });
}

class ElementReader {
 public:
  ElementReader(const xml::Element& el, std::initializer_list<std::string_view> allowed) : el_(el) {
    for (const auto& a : el.attributes) {
      if (std::find(allowed.begin(), allowed.end(), a.name) == allowed.end()) {
        fail(ParseCode::UnknownElement, a.pos,
             fmt::format("unknown attribute '{}' on <{}>", a.name, el.name));
      }
    }
  }

  const xml::Attribute& required(std::string_view name) const {
    const auto* a = el_.attribute(name);
    if (!a) {
      fail(ParseCode::MissingAttr, el_.pos, fmt::format("<{}> requires attribute '{}'", el_.name, name));
    }
    return *a;
  }

  std::string token(std::string_view name) const {
    const auto& a = required(name);
    if (!is_token(a.value)) {
      fail(ParseCode::BadAttrValue, a.pos, fmt::format("'{}' is not a valid {}", a.value, name));
    }
    return a.value;
  }

  std::string text(std::string_view name) const {
    const auto& a = required(name);
    if (!printable(a.value)) {
      fail(ParseCode::BadAttrValue, a.pos, fmt::format("{} must be printable ASCII", name));
    }
    return a.value;
  }

  bool boolean(std::string_view name, bool fallback) const {
    const auto* a = el_.attribute(name);
    if (!a) return fallback;
    if (a->value == "true") return true;
    if (a->value == "false") return false;
    fail(ParseCode::BadAttrValue, a->pos, fmt::format("{} must be 'true' or 'false'", name));
  }

  void no_text() const {
    if (el_.has_text) {
      fail(ParseCode::UnknownElement, el_.text_pos, fmt::format("unexpected text inside <{}>", el_.name));
    }
  }

  void no_children() const {
    if (!el_.children.empty()) {
      const auto& c = el_.children.front();
      fail(ParseCode::UnknownElement, c.pos, fmt::format("<{}> not allowed inside <{}>", c.name, el_.name));
    }
  }

 private:
  const xml::Element& el_;
};

void expect_child(const xml::Element& child, std::string_view name, const xml::Element& parent) {
  if (child.name != name) {
    fail(ParseCode::UnknownElement, child.pos,
         fmt::format("<{}> not allowed inside <{}>; expected <{}>", child.name, parent.name, name));
  }
}

MenuItem parse_item(const xml::Element& el) {
  ElementReader r(el, {"label", "flow", "menu"});
  r.no_children();
  r.no_text();
  MenuItem item;
  item.label = r.text("label");
  const auto* flow = el.attribute("flow");
  const auto* menu = el.attribute("menu");
  if (flow && menu) fail(ParseCode::BadAttrValue, menu->pos, "<item> takes either 'flow' or 'menu', not both");
  if (!flow && !menu) fail(ParseCode::MissingAttr, el.pos, "<item> requires attribute 'flow' or 'menu'");
  item.kind = menu ? MenuItem::Kind::Node : MenuItem::Kind::Leaf;
  item.target = r.token(menu ? "menu" : "flow");
  return item;
}

FieldDef parse_field(const xml::Element& el) {
  ElementReader r(el, {"name", "kind", "required", "max", "masked"});
  r.no_children();
  r.no_text();
  FieldDef f;
  f.name = r.token("name");
  if (const auto* kind = el.attribute("kind")) {
    if (kind->value == "text") f.kind = FieldKind::Text;
    else if (kind->value == "number") f.kind = FieldKind::Number;
    else fail(ParseCode::BadAttrValue, kind->pos, fmt::format("unknown field kind '{}'", kind->value));
  }
  f.required = r.boolean("required", false);
  f.masked = r.boolean("masked", false);
  if (const auto* max = el.attribute("max")) {
    std::size_t v = 0;
    const auto* end = max->value.data() + max->value.size();
    auto [p, ec] = std::from_chars(max->value.data(), end, v);
    if (ec != std::errc{} || p != end || v < 1 || v > kMaxFieldLen) {
      fail(ParseCode::BadAttrValue, max->pos, fmt::format("max must be an integer in 1..{}", kMaxFieldLen));
    }
    f.max_len = v;
  }
  return f;
}

OptionDef parse_option(const xml::Element& el) {
  ElementReader r(el, {"label", "value"});
  r.no_children();
  r.no_text();
  return OptionDef{r.text("label"), r.token("value")};
}

std::string parse_line(const xml::Element& el) {
  ElementReader r(el, {});
  r.no_children();
  if (!printable(el.text)) {
    fail(ParseCode::BadAttrValue, el.has_text ? el.text_pos : el.pos, "<line> text must be one line of printable ASCII");
  }
  return el.text;
}

Screen parse_screen(const xml::Element& el) {
  const auto* type_attr = el.attribute("type");
  std::optional<ScreenType> type;
  if (type_attr) {
    type = screen_type_from(type_attr->value);
  }
  const bool option_screen = type && (*type == ScreenType::SingleOption || *type == ScreenType::MultiOption);
  ElementReader r(el, option_screen ? std::initializer_list<std::string_view>{"type", "id", "title", "var"}
                                    : std::initializer_list<std::string_view>{"type", "id", "title"});
  r.no_text();
  r.required("type");
  if (!type) {
    fail(ParseCode::BadAttrValue, type_attr->pos, fmt::format("unknown screen type '{}'", type_attr->value));
  }
  Screen s;
  s.type = *type;
  s.id = r.token("id");
  if (s.id == kEnd) fail(ParseCode::BadAttrValue, r.required("id").pos, "'end' is reserved");
  s.title = r.text("title");
  if (option_screen) s.var = r.token("var");

  for (const auto& child : el.children) {
    switch (s.type) {
      case ScreenType::Menu:
        expect_child(child, "item", el);
        s.items.push_back(parse_item(child));
        break;
      case ScreenType::Info:
        expect_child(child, "line", el);
        s.lines.push_back(parse_line(child));
        break;
      case ScreenType::Input:
        expect_child(child, "field", el);
        s.fields.push_back(parse_field(child));
        break;
      case ScreenType::SingleOption:
      case ScreenType::MultiOption:
        expect_child(child, "option", el);
        s.options.push_back(parse_option(child));
        break;
    }
  }
  return s;
}

Flow parse_flow(const xml::Element& el) {
  ElementReader r(el, {"id", "start"});
  r.no_text();
  Flow f;
  f.id = r.token("id");
  f.start = r.token("start");
  for (const auto& child : el.children) {
    expect_child(child, "on", el);
    ElementReader t(child, {"screen", "outcome", "goto"});
    t.no_children();
    t.no_text();
    f.steps.push_back(Transition{t.token("screen"), t.token("outcome"), t.token("goto")});
  }
  return f;
}

}  // namespace

std::string_view to_string(ParseCode code) noexcept {
  switch (code) {
    case ParseCode::XmlSyntax: return "XmlSyntax";
    case ParseCode::UnknownElement: return "UnknownElement";
    case ParseCode::MissingAttr: return "MissingAttr";
    case ParseCode::BadAttrValue: return "BadAttrValue";
  }
  return "?";
}

ParseError::ParseError(ParseCode code, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(fmt::format("{}:{}: {}: {}", line, column, to_string(code), message)),
      code_(code),
      line_(line),
      column_(column),
      message_(message) {}

bool is_token(std::string_view text) noexcept {
  if (text.empty() || text.size() > 64) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-' || c == '.';
  });
}

RepositoryDoc parse(std::string_view document_text) {
  xml::Element root;
  try {
    root = xml::parse_document(document_text);
  } catch (const xml::SyntaxError& e) {
    throw ParseError(ParseCode::XmlSyntax, e.position().line, e.position().column, e.what());
  }
  if (root.name != "uim") {
    fail(ParseCode::UnknownElement, root.pos, fmt::format("root element must be <uim>, not <{}>", root.name));
  }
  ElementReader r(root, {"root"});
  r.no_text();
  RepositoryDoc doc;
  doc.root_menu = r.token("root");
  for (const auto& child : root.children) {
    if (child.name == "screen") {
      doc.screens.push_back(parse_screen(child));
    } else if (child.name == "flow") {
      doc.flows.push_back(parse_flow(child));
    } else {
      fail(ParseCode::UnknownElement, child.pos, fmt::format("unknown element <{}>", child.name));
    }
  }
  return doc;
}

std::string serialize(const RepositoryDoc& doc) {
  using xml::escape_attribute;
  std::string out;
  out += fmt::format("<uim root=\"{}\">\n", escape_attribute(doc.root_menu));
  for (const auto& s : doc.screens) {
    std::string open = fmt::format("  <screen type=\"{}\" id=\"{}\" title=\"{}\"", to_string(s.type),
                                   escape_attribute(s.id), escape_attribute(s.title));
    if (s.is_option()) open += fmt::format(" var=\"{}\"", escape_attribute(s.var));
    const bool empty = s.items.empty() && s.lines.empty() && s.fields.empty() && s.options.empty();
    if (empty) {
      out += open + "/>\n";
      continue;
    }
    out += open + ">\n";
    for (const auto& item : s.items) {
      out += fmt::format("    <item label=\"{}\" {}=\"{}\"/>\n", escape_attribute(item.label),
                         item.is_node() ? "menu" : "flow", escape_attribute(item.target));
    }
    for (const auto& line : s.lines) {
      out += line.empty() ? "    <line/>\n" : fmt::format("    <line>{}</line>\n", xml::escape_text(line));
    }
    for (const auto& f : s.fields) {
      out += fmt::format("    <field name=\"{}\" kind=\"{}\" required=\"{}\" max=\"{}\" masked=\"{}\"/>\n",
                         escape_attribute(f.name), f.kind == FieldKind::Number ? "number" : "text",
                         f.required, f.max_len, f.masked);
    }
    for (const auto& o : s.options) {
      out += fmt::format("    <option label=\"{}\" value=\"{}\"/>\n", escape_attribute(o.label),
                         escape_attribute(o.value));
    }
    out += "  </screen>\n";
  }
  for (const auto& f : doc.flows) {
    if (f.steps.empty()) {
      out += fmt::format("  <flow id=\"{}\" start=\"{}\"/>\n", escape_attribute(f.id), escape_attribute(f.start));
      continue;
    }
    out += fmt::format("  <flow id=\"{}\" start=\"{}\">\n", escape_attribute(f.id), escape_attribute(f.start));
    for (const auto& t : f.steps) {
      out += fmt::format("    <on screen=\"{}\" outcome=\"{}\" goto=\"{}\"/>\n", escape_attribute(t.screen),
                         escape_attribute(t.outcome), escape_attribute(t.target));
    }
    out += "  </flow>\n";
  }
  out += "</uim>\n";
  return out;
}

}  // namespace uim::model
