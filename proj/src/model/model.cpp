#include "uim/model/model.hpp"

#include <algorithm>
#include <tuple>

namespace uim::model {

std::string_view to_string(ScreenType type) noexcept {
  switch (type) {
    case ScreenType::Menu: return "menu";
    case ScreenType::Info: return "info";
    case ScreenType::Input: return "input";
    case ScreenType::SingleOption: return "single";
    case ScreenType::MultiOption: return "multi";
  }
  return "?";
}

std::optional<ScreenType> screen_type_from(std::string_view token) noexcept {
  if (token == "menu") return ScreenType::Menu;
  if (token == "info") return ScreenType::Info;
  if (token == "input") return ScreenType::Input;
  if (token == "single") return ScreenType::SingleOption;
  if (token == "multi") return ScreenType::MultiOption;
  return std::nullopt;
}

const Transition* Flow::find(std::string_view screen, std::string_view outcome) const {
  for (const auto& t : steps) {
    if (t.screen == screen && t.outcome == outcome) return &t;
  }
  return nullptr;
}

RepositoryDoc canonical(RepositoryDoc doc) {
  std::stable_sort(doc.screens.begin(), doc.screens.end(),
                   [](const Screen& a, const Screen& b) { return a.id < b.id; });
  std::stable_sort(doc.flows.begin(), doc.flows.end(), [](const Flow& a, const Flow& b) { return a.id < b.id; });
  for (auto& f : doc.flows) {
    std::stable_sort(f.steps.begin(), f.steps.end(), [](const Transition& a, const Transition& b) {
      return std::tie(a.screen, a.outcome) < std::tie(b.screen, b.outcome);
    });
  }
  return doc;
}

Catalog::Catalog(RepositoryDoc doc) : doc_(std::move(doc)) {
  for (std::size_t i = 0; i < doc_.screens.size(); ++i) screens_.emplace(doc_.screens[i].id, i);
  for (std::size_t i = 0; i < doc_.flows.size(); ++i) flows_.emplace(doc_.flows[i].id, i);
}

const Screen* Catalog::screen(std::string_view id) const {
  auto it = screens_.find(std::string(id));
  return it == screens_.end() ? nullptr : &doc_.screens[it->second];
}

const Flow* Catalog::flow(std::string_view id) const {
  auto it = flows_.find(std::string(id));
  return it == flows_.end() ? nullptr : &doc_.flows[it->second];
}

const Screen& Catalog::root() const {
  const auto* s = screen(doc_.root_menu);
  if (!s) throw LookupError("root menu '" + doc_.root_menu + "' not found");
  return *s;
}

}  // namespace uim::model
