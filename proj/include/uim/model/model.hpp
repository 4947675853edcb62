#pragma once

// Screen and flow definitions: the in-memory form of a repository document.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace uim::model {

enum class ScreenType { Menu, Info, Input, SingleOption, MultiOption };

std::string_view to_string(ScreenType type) noexcept;
std::optional<ScreenType> screen_type_from(std::string_view token) noexcept;

struct MenuItem {
  enum class Kind { Node, Leaf };
  std::string label;
  Kind kind = Kind::Leaf;
  std::string target;  // menu screen id for a node, flow id for a leaf

  bool is_node() const noexcept { return kind == Kind::Node; }
  bool operator==(const MenuItem&) const = default;
};

enum class FieldKind { Text, Number };

struct FieldDef {
  static constexpr std::size_t kDefaultMaxLen = 32;

  std::string name;
  FieldKind kind = FieldKind::Text;
  bool required = false;
  std::size_t max_len = kDefaultMaxLen;
  bool masked = false;
  bool operator==(const FieldDef&) const = default;
};

struct OptionDef {
  std::string label;
  std::string value;
  bool operator==(const OptionDef&) const = default;
};

/// One screen. Which payload vector is meaningful depends on `type`; the
/// others stay empty.
struct Screen {
  std::string id;
  ScreenType type = ScreenType::Menu;
  std::string title;
  std::vector<MenuItem> items;    // Menu
  std::vector<std::string> lines; // Info (templated)
  std::vector<FieldDef> fields;   // Input
  std::string var;                // SingleOption / MultiOption
  std::vector<OptionDef> options; // SingleOption / MultiOption

  bool is_menu() const noexcept { return type == ScreenType::Menu; }
  bool is_option() const noexcept {
    return type == ScreenType::SingleOption || type == ScreenType::MultiOption;
  }
  /// Number of numbered entries (menu items or options).
  std::size_t entry_count() const noexcept { return is_menu() ? items.size() : options.size(); }
  bool operator==(const Screen&) const = default;
};

inline constexpr std::string_view kEnd = "end";

namespace outcome {
inline constexpr std::string_view kOk = "ok";
inline constexpr std::string_view kBack = "back";
inline constexpr std::string_view kCancel = "cancel";
}  // namespace outcome

struct Transition {
  std::string screen;
  std::string outcome;
  std::string target;  // screen id, or kEnd

  bool ends() const noexcept { return target == kEnd; }
  bool operator==(const Transition&) const = default;
};

struct Flow {
  std::string id;
  std::string start;
  std::vector<Transition> steps;

  const Transition* find(std::string_view screen, std::string_view outcome) const;
  bool operator==(const Flow&) const = default;
};

struct RepositoryDoc {
  std::string root_menu;
  std::vector<Screen> screens;
  std::vector<Flow> flows;

  bool operator==(const RepositoryDoc&) const = default;
};

/// Sorts screens and flows by id and transitions by (screen, outcome).
RepositoryDoc canonical(RepositoryDoc doc);

/// Id-indexed read-only view over a document. Copyable; indexes are positions.
class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(RepositoryDoc doc);

  const RepositoryDoc& doc() const noexcept { return doc_; }
  const Screen* screen(std::string_view id) const;
  const Flow* flow(std::string_view id) const;
  const Screen& root() const;

 private:
  RepositoryDoc doc_;
  std::unordered_map<std::string, std::size_t> screens_;
  std::unordered_map<std::string, std::size_t> flows_;
};

/// Raised by the shell when a validated document still fails a lookup.
class LookupError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace uim::model
