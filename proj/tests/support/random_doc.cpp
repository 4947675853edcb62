#include "random_doc.hpp"

#include <algorithm>

namespace uim::testing {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

std::string token(std::mt19937_64& rng, std::string_view prefix) {
  static constexpr std::string_view kChars = "abcdefghijklmnopqrstuvwxyz0123456789_";
  std::string out(prefix);
  const auto n = pick(rng, 1, 6);
  for (std::size_t i = 0; i < n; ++i) out += kChars[pick(rng, 0, kChars.size() - 1)];
  return out;
}

}  // namespace

std::string random_label(std::mt19937_64& rng, std::size_t max_len) {
  std::string out;
  const auto n = pick(rng, 1, max_len);
  for (std::size_t i = 0; i < n; ++i) {
    // Mostly letters, now and then anything printable (markup and '|' included).
    char c = coin(rng, 0.8) ? static_cast<char>('A' + pick(rng, 0, 25)) : static_cast<char>(pick(rng, 0x20, 0x7e));
    if ((i == 0 || i + 1 == n) && c == ' ') c = 'x';
    out += c;
  }
  return out;
}

model::RepositoryDoc random_doc(std::mt19937_64& rng, const DocShape& shape) {
  using model::ScreenType;
  model::RepositoryDoc doc;

  const auto menu_count = pick(rng, 1, shape.max_menus);
  const auto flow_count = pick(rng, 1, shape.max_flows);

  std::vector<std::string> flow_ids;
  for (std::size_t f = 0; f < flow_count; ++f) flow_ids.push_back("f" + std::to_string(f) + token(rng, "_"));

  // Menus form a tree rooted at m0 (parent index < child index); a few extra
  // node items point forward, which keeps the graph acyclic.
  std::vector<model::Screen> menus(menu_count);
  for (std::size_t m = 0; m < menu_count; ++m) {
    menus[m].id = "m" + std::to_string(m) + token(rng, "_");
    menus[m].type = ScreenType::Menu;
    menus[m].title = random_label(rng, 24);
  }
  for (std::size_t m = 1; m < menu_count; ++m) {
    auto& parent = menus[pick(rng, 0, m - 1)];
    parent.items.push_back({random_label(rng), model::MenuItem::Kind::Node, menus[m].id});
  }
  for (std::size_t f = 0; f < flow_count; ++f) {
    menus[pick(rng, 0, menu_count - 1)].items.push_back({random_label(rng), model::MenuItem::Kind::Leaf, flow_ids[f]});
  }
  for (std::size_t m = 0; m < menu_count; ++m) {
    auto& menu = menus[m];
    const auto extra = coin(rng, 0.3) ? pick(rng, 0, shape.max_entries) : pick(rng, 0, 3);
    for (std::size_t i = 0; i < extra && menu.items.size() < shape.max_entries; ++i) {
      if (m + 1 < menu_count && coin(rng, 0.2)) {
        menu.items.push_back({random_label(rng), model::MenuItem::Kind::Node, menus[pick(rng, m + 1, menu_count - 1)].id});
      } else {
        menu.items.push_back({random_label(rng), model::MenuItem::Kind::Leaf, flow_ids[pick(rng, 0, flow_count - 1)]});
      }
    }
    if (menu.items.empty()) {
      menu.items.push_back({random_label(rng), model::MenuItem::Kind::Leaf, flow_ids[pick(rng, 0, flow_count - 1)]});
    }
    std::shuffle(menu.items.begin(), menu.items.end(), rng);
  }
  doc.root_menu = menus[0].id;
  for (auto& m : menus) doc.screens.push_back(std::move(m));

  for (std::size_t f = 0; f < flow_count; ++f) {
    model::Flow flow;
    flow.id = flow_ids[f];
    const auto n = pick(rng, 1, shape.max_flow_screens);
    std::vector<model::Screen> screens(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& s = screens[i];
      s.id = flow.id + "_s" + std::to_string(i);
      s.title = random_label(rng, 24);
      switch (pick(rng, 0, 3)) {
        case 0: {
          s.type = ScreenType::Info;
          const auto lines = pick(rng, 1, coin(rng, 0.2) ? 30 : 4);
          for (std::size_t l = 0; l < lines; ++l) {
            if (coin(rng, 0.15)) {
              s.lines.emplace_back();
            } else if (coin(rng, 0.3)) {
              s.lines.push_back("v ${" + token(rng, "x") + "} $$ " + random_label(rng, 8));
            } else {
              s.lines.push_back(random_label(rng, 30));
            }
          }
          break;
        }
        case 1: {
          s.type = ScreenType::Input;
          const auto fields = pick(rng, 1, 4);
          for (std::size_t k = 0; k < fields; ++k) {
            model::FieldDef fd;
            fd.name = "v" + std::to_string(k) + token(rng, "_");
            fd.kind = coin(rng) ? model::FieldKind::Number : model::FieldKind::Text;
            fd.required = coin(rng);
            fd.max_len = pick(rng, 1, 20);
            fd.masked = coin(rng, 0.2);
            s.fields.push_back(std::move(fd));
          }
          break;
        }
        default: {
          s.type = coin(rng) ? ScreenType::SingleOption : ScreenType::MultiOption;
          s.var = token(rng, "var");
          const auto options = pick(rng, 1, coin(rng, 0.2) ? shape.max_entries : 5);
          for (std::size_t k = 0; k < options; ++k) {
            s.options.push_back({random_label(rng), "o" + std::to_string(k) + token(rng, "_")});
          }
          break;
        }
      }
    }
    flow.start = screens[0].id;
    auto target = [&](std::size_t i) -> std::string {
      if (coin(rng, 0.2)) return std::string(model::kEnd);
      if (coin(rng, 0.6) && i + 1 < n) return screens[i + 1].id;
      return coin(rng, 0.3) ? std::string(model::kEnd) : screens[pick(rng, 0, n - 1)].id;
    };
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = screens[i];
      flow.steps.push_back({s.id, "ok", target(i)});
      if (s.type == ScreenType::SingleOption) {
        for (const auto& o : s.options) {
          if (coin(rng, 0.3)) flow.steps.push_back({s.id, o.value, target(i)});
        }
      }
      if (shape.explicit_back && coin(rng, 0.25)) {
        flow.steps.push_back({s.id, "back", coin(rng, 0.3) ? std::string(model::kEnd) : screens[pick(rng, 0, n - 1)].id});
      }
      if (coin(rng, 0.1)) flow.steps.push_back({s.id, "cancel", std::string(model::kEnd)});
    }
    std::shuffle(flow.steps.begin(), flow.steps.end(), rng);
    doc.flows.push_back(std::move(flow));
    for (auto& s : screens) doc.screens.push_back(std::move(s));
  }
  std::shuffle(doc.screens.begin(), doc.screens.end(), rng);
  std::shuffle(doc.flows.begin(), doc.flows.end(), rng);
  return doc;
}

repo::TabularSource to_tables(const model::RepositoryDoc& doc, std::mt19937_64& rng) {
  repo::TabularSource t;
  const auto& schemas = repo::table_schemas();
  t.screens.columns = schemas.at("screens");
  t.items.columns = schemas.at("items");
  t.fields.columns = schemas.at("fields");
  t.options.columns = schemas.at("options");
  t.lines.columns = schemas.at("lines");
  t.flows.columns = schemas.at("flows");
  t.transitions.columns = schemas.at("transitions");

  // Sequence numbers are sparse and not starting at 1: only their order counts.
  auto seq = [&](std::size_t i) { return std::to_string(10 * (i + 1) + pick(rng, 0, 9)); };
  for (const auto& s : doc.screens) {
    t.screens.rows.push_back(
        {s.id, std::string(model::to_string(s.type)), s.title, s.var, s.id == doc.root_menu ? "true" : "false"});
    for (std::size_t i = 0; i < s.items.size(); ++i) {
      const auto& it = s.items[i];
      t.items.rows.push_back({s.id, seq(i), it.label, it.is_node() ? "node" : "leaf", it.target});
    }
    for (std::size_t i = 0; i < s.fields.size(); ++i) {
      const auto& f = s.fields[i];
      t.fields.rows.push_back({s.id, seq(i), f.name, f.kind == model::FieldKind::Number ? "number" : "text",
                               f.required ? "true" : "false", std::to_string(f.max_len), f.masked ? "true" : "false"});
    }
    for (std::size_t i = 0; i < s.options.size(); ++i) {
      t.options.rows.push_back({s.id, seq(i), s.options[i].label, s.options[i].value});
    }
    for (std::size_t i = 0; i < s.lines.size(); ++i) t.lines.rows.push_back({s.id, seq(i), s.lines[i]});
  }
  for (const auto& f : doc.flows) {
    t.flows.rows.push_back({f.id, f.start});
    for (const auto& st : f.steps) t.transitions.rows.push_back({f.id, st.screen, st.outcome, st.target});
  }
  for (auto* table : {&t.screens, &t.items, &t.fields, &t.options, &t.lines, &t.flows, &t.transitions}) {
    std::shuffle(table->rows.begin(), table->rows.end(), rng);
  }
  return t;
}

}  // namespace uim::testing
