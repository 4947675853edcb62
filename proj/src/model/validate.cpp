#include "uim/model/validate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace uim::model {

std::string_view to_string(IssueCode code) noexcept {
  switch (code) {
    case IssueCode::DanglingRef: return "DanglingRef";
    case IssueCode::DuplicateId: return "DuplicateId";
    case IssueCode::MenuCycle: return "MenuCycle";
    case IssueCode::EmptyScreen: return "EmptyScreen";
    case IssueCode::TooManyItems: return "TooManyItems";
    case IssueCode::MissingOkTransition: return "MissingOkTransition";
    case IssueCode::NodeTargetsNonMenu: return "NodeTargetsNonMenu";
  }
  return "?";
}

bool ValidationReport::has(IssueCode code) const {
  return std::any_of(issues.begin(), issues.end(), [&](const Issue& i) { return i.code == code; });
}

std::string ValidationReport::to_text() const {
  std::string out;
  for (const auto& i : issues) out += fmt::format("error {} [{}]: {}\n", to_string(i.code), i.where, i.message);
  for (const auto& w : warnings) out += fmt::format("warning: {}\n", w);
  return out;
}

namespace {

class Validator {
 public:
  explicit Validator(const RepositoryDoc& doc) : doc_(doc) {
    for (const auto& s : doc.screens) screens_.emplace(s.id, &s);
    for (const auto& f : doc.flows) flows_.emplace(f.id, &f);
  }

  ValidationReport run() {
    duplicates();
    root();
    for (const auto& s : doc_.screens) screen(s);
    cycles();
    for (const auto& f : doc_.flows) flow(f);
    orphans();
    return std::move(report_);
  }

 private:
  const RepositoryDoc& doc_;
  std::map<std::string, const Screen*> screens_;
  std::map<std::string, const Flow*> flows_;
  ValidationReport report_;

  void issue(IssueCode code, const std::string& where, std::string message) {
    report_.issues.push_back({code, where, std::move(message)});
  }

  const Screen* find_screen(const std::string& id) const {
    auto it = screens_.find(id);
    return it == screens_.end() ? nullptr : it->second;
  }

  void duplicates() {
    std::set<std::string> seen;
    for (const auto& s : doc_.screens) {
      if (!seen.insert(s.id).second) issue(IssueCode::DuplicateId, s.id, fmt::format("screen '{}' defined more than once", s.id));
    }
    seen.clear();
    for (const auto& f : doc_.flows) {
      if (!seen.insert(f.id).second) issue(IssueCode::DuplicateId, f.id, fmt::format("flow '{}' defined more than once", f.id));
    }
  }

  void root() {
    const auto* r = find_screen(doc_.root_menu);
    if (!r) {
      issue(IssueCode::DanglingRef, doc_.root_menu, fmt::format("root menu '{}' does not exist", doc_.root_menu));
    } else if (!r->is_menu()) {
      issue(IssueCode::NodeTargetsNonMenu, doc_.root_menu, fmt::format("root '{}' is not a menu", doc_.root_menu));
    }
  }

  void screen(const Screen& s) {
    const std::size_t entries = s.type == ScreenType::Input ? s.fields.size() : s.entry_count();
    if (s.type != ScreenType::Info && entries == 0) {
      issue(IssueCode::EmptyScreen, s.id, fmt::format("{} screen '{}' has no entries", to_string(s.type), s.id));
    }
    if (s.entry_count() > kMaxEntries) {
      issue(IssueCode::TooManyItems, s.id, fmt::format("screen '{}' has {} entries (max {})", s.id, s.entry_count(), kMaxEntries));
    }
    std::set<std::string> names;
    for (const auto& f : s.fields) {
      if (!names.insert(f.name).second) issue(IssueCode::DuplicateId, s.id, fmt::format("field '{}' repeated", f.name));
    }
    names.clear();
    for (const auto& o : s.options) {
      if (!names.insert(o.value).second) issue(IssueCode::DuplicateId, s.id, fmt::format("option value '{}' repeated", o.value));
    }
    for (const auto& item : s.items) {
      if (item.is_node()) {
        const auto* target = find_screen(item.target);
        if (!target) {
          issue(IssueCode::DanglingRef, s.id, fmt::format("item '{}' opens missing menu '{}'", item.label, item.target));
        } else if (!target->is_menu()) {
          issue(IssueCode::NodeTargetsNonMenu, s.id,
                fmt::format("item '{}' opens '{}', which is not a menu ({})", item.label, item.target, to_string(target->type)));
        }
      } else if (!flows_.contains(item.target)) {
        issue(IssueCode::DanglingRef, s.id, fmt::format("item '{}' starts missing flow '{}'", item.label, item.target));
      }
    }
  }

  // Any cycle among node edges breaks the tree shape.
  void cycles() {
    enum class Mark { White, Grey, Black };
    std::map<std::string, Mark> mark;
    std::set<std::string> reported;
    std::function<void(const Screen&)> visit = [&](const Screen& s) {
      mark[s.id] = Mark::Grey;
      for (const auto& item : s.items) {
        if (!item.is_node()) continue;
        const auto* t = find_screen(item.target);
        if (!t || !t->is_menu()) continue;
        auto m = mark[t->id];
        if (m == Mark::Grey) {
          if (reported.insert(t->id).second) {
            issue(IssueCode::MenuCycle, t->id, fmt::format("menu '{}' reaches itself through '{}'", t->id, s.id));
          }
        } else if (m == Mark::White) {
          visit(*t);
        }
      }
      mark[s.id] = Mark::Black;
    };
    for (const auto& s : doc_.screens) {
      if (s.is_menu() && mark[s.id] == Mark::White) visit(s);
    }
  }

  void flow(const Flow& f) {
    auto check_target = [&](const std::string& id, const char* role) -> const Screen* {
      const auto* s = find_screen(id);
      if (!s) {
        issue(IssueCode::DanglingRef, f.id, fmt::format("{} '{}' does not exist", role, id));
        return nullptr;
      }
      if (s->is_menu()) {
        issue(IssueCode::DanglingRef, f.id, fmt::format("{} '{}' is a menu; flows run non-menu screens", role, id));
        return nullptr;
      }
      return s;
    };
    check_target(f.start, "start screen");

    std::set<std::pair<std::string, std::string>> keys;
    for (const auto& t : f.steps) {
      if (!keys.insert({t.screen, t.outcome}).second) {
        issue(IssueCode::DuplicateId, f.id, fmt::format("transition ({}, {}) repeated", t.screen, t.outcome));
      }
      const auto* from = check_target(t.screen, "transition source");
      if (!t.ends()) check_target(t.target, "transition target");
      if (from) {
        const bool fixed = t.outcome == outcome::kOk || t.outcome == outcome::kBack || t.outcome == outcome::kCancel;
        const bool option_value =
            from->type == ScreenType::SingleOption &&
            std::any_of(from->options.begin(), from->options.end(), [&](const OptionDef& o) { return o.value == t.outcome; });
        if (!fixed && !option_value) {
          issue(IssueCode::DanglingRef, f.id, fmt::format("outcome '{}' cannot be produced by screen '{}'", t.outcome, t.screen));
        }
      }
    }

    // Screens reachable from start must be able to leave on "ok".
    std::set<std::string> seen;
    std::deque<std::string> queue;
    if (const auto* s = find_screen(f.start); s && !s->is_menu()) queue.push_back(f.start);
    while (!queue.empty()) {
      std::string id = queue.front();
      queue.pop_front();
      if (!seen.insert(id).second) continue;
      const auto* s = find_screen(id);
      bool leaves = f.find(id, outcome::kOk) != nullptr;
      if (!leaves && s->type == ScreenType::SingleOption) {
        leaves = std::all_of(s->options.begin(), s->options.end(),
                             [&](const OptionDef& o) { return f.find(id, o.value) != nullptr; });
      }
      if (!leaves) {
        issue(IssueCode::MissingOkTransition, f.id, fmt::format("screen '{}' has no 'ok' transition", id));
      }
      for (const auto& t : f.steps) {
        if (t.screen != id || t.ends()) continue;
        if (const auto* next = find_screen(t.target); next && !next->is_menu()) queue.push_back(t.target);
      }
    }
  }

  void orphans() {
    std::set<std::string> used_screens{doc_.root_menu};
    std::set<std::string> used_flows;
    for (const auto& s : doc_.screens) {
      for (const auto& item : s.items) (item.is_node() ? used_screens : used_flows).insert(item.target);
    }
    for (const auto& f : doc_.flows) {
      used_screens.insert(f.start);
      for (const auto& t : f.steps) {
        used_screens.insert(t.screen);
        used_screens.insert(t.target);
      }
    }
    for (const auto& s : doc_.screens) {
      if (!used_screens.contains(s.id)) report_.warnings.push_back(fmt::format("screen '{}' is never shown", s.id));
    }
    for (const auto& f : doc_.flows) {
      if (!used_flows.contains(f.id)) report_.warnings.push_back(fmt::format("flow '{}' is never started", f.id));
    }
  }
};

}  // namespace

ValidationReport validate(const RepositoryDoc& doc) { return Validator(doc).run(); }

}  // namespace uim::model
