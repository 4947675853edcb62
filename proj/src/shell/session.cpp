#include "uim/shell/session.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>

namespace uim::shell {

using model::LookupError;
using model::Screen;
using model::ScreenType;

namespace {

// Decimal selection: 1-2 digits, nothing else.
std::optional<std::size_t> selection(std::string_view line) {
  if (line.empty() || line.size() > 2) return std::nullopt;
  std::size_t k = 0;
  auto [p, ec] = std::from_chars(line.data(), line.data() + line.size(), k);
  if (ec != std::errc{} || p != line.data() + line.size()) return std::nullopt;
  return k;
}

bool all_digits(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

render::Frame goodbye_frame(const render::TerminalProfile& profile, std::string_view reason) {
  std::vector<std::string> lines;
  if (!reason.empty()) lines.emplace_back(reason);
  return render::notice_frame(profile, "GOODBYE", lines);
}

Session::Session(std::string session_id, repo::SnapshotPtr snapshot, render::TerminalProfile profile) {
  state_.session_id = std::move(session_id);
  state_.snapshot = std::move(snapshot);
  render::clamp(profile);
  state_.profile = std::move(profile);
  state_.nav.push_back(MenuEntry{state_.snapshot->doc().root_menu, 0});
}

ShellEffect Session::open() { return render({}); }

bool Session::in_flow() const noexcept {
  return !state_.nav.empty() && std::holds_alternative<FlowEntry>(state_.nav.back());
}

std::size_t Session::depth() const noexcept {
  std::size_t d = state_.nav.size();
  if (in_flow()) d += std::get<FlowEntry>(state_.nav.back()).steps.size();
  return d;
}

std::string Session::current_screen_id() const {
  const auto& top = state_.nav.back();
  if (const auto* m = std::get_if<MenuEntry>(&top)) return m->screen;
  return std::get<FlowEntry>(top).steps.back();
}

const Screen& Session::current_screen() const {
  const auto id = current_screen_id();
  const auto* s = catalog().screen(id);
  if (!s) throw LookupError(fmt::format("screen '{}' not found", id));
  return *s;
}

std::size_t Session::remaining_fields() const {
  if (!in_flow()) return 0;
  const auto& s = current_screen();
  return s.type == ScreenType::Input ? s.fields.size() - state_.field_index : 0;
}

std::size_t& Session::current_page() {
  auto& top = state_.nav.back();
  if (auto* m = std::get_if<MenuEntry>(&top)) return m->page;
  return std::get<FlowEntry>(top).page;
}

ShellEffect Session::handle_line(std::string_view line) {
  ShellEffect fx;
  try {
    const auto& s = current_screen();
    switch (s.type) {
      case ScreenType::Menu: on_menu(s, line); break;
      case ScreenType::Info: on_info(line); break;
      case ScreenType::Input: on_input(s, line, fx); break;
      case ScreenType::SingleOption: on_single(s, line, fx); break;
      case ScreenType::MultiOption: on_multi(s, line, fx); break;
    }
    return render(std::move(fx));
  } catch (const LookupError& e) {
    fx.diagnostics.push_back(fmt::format("internal fault: {}", e.what()));
    fx.frame = goodbye_frame(state_.profile, "INTERNAL ERROR");
    fx.terminated = true;
    return fx;
  }
}

ShellEffect Session::handle_resize(std::uint16_t width, std::uint16_t height) {
  ShellEffect fx;
  auto profile = state_.profile;
  profile.width = width;
  profile.height = height;
  if (render::clamp(profile)) {
    fx.diagnostics.push_back(fmt::format("resize {}x{} below minimum, clamped to {}x{}", width, height,
                                         profile.width, profile.height));
  }
  state_.profile = std::move(profile);
  return render(std::move(fx));
}

ShellEffect Session::redraw() { return render({}); }

bool Session::adopt(repo::SnapshotPtr latest) {
  if (!latest || in_flow() || latest->version == state_.snapshot_version()) return false;
  const auto& cat = latest->catalog;
  std::vector<NavEntry> nav;
  for (const auto& entry : state_.nav) {
    const auto& m = std::get<MenuEntry>(entry);
    const auto* s = cat.screen(m.screen);
    if (!s || !s->is_menu()) break;
    if (nav.empty() && m.screen != cat.doc().root_menu) break;
    nav.push_back(m);
  }
  if (nav.empty()) nav.push_back(MenuEntry{cat.doc().root_menu, 0});
  state_.nav = std::move(nav);
  state_.snapshot = std::move(latest);
  return true;
}

bool Session::turn_page(const Screen& s, std::string_view line) {
  if (line != "<" && line != ">") return false;
  render::ScreenContext ctx;
  const auto geo = render::paginate(render::body_rows(s, ctx), state_.profile);
  auto& page = current_page();
  if (geo.page_count <= 1) {
    message_ = message::kInvalid;
    return true;
  }
  page = std::min(page, geo.page_count - 1);
  if (line == "<" && page > 0) --page;
  if (line == ">" && page + 1 < geo.page_count) ++page;
  return true;
}

void Session::on_menu(const Screen& s, std::string_view line) {
  if (turn_page(s, line)) return;
  if (line == "0") {
    if (state_.nav.size() > 1) {
      state_.nav.pop_back();
    } else {
      message_ = message::kAtTop;
    }
    return;
  }
  const auto k = selection(line);
  if (!k || *k < 1 || *k > s.items.size()) {
    message_ = message::kInvalid;
    return;
  }
  const auto& item = s.items[*k - 1];
  if (item.is_node()) {
    const auto* target = catalog().screen(item.target);
    if (!target || !target->is_menu()) throw LookupError(fmt::format("menu '{}' not found", item.target));
    state_.nav.push_back(MenuEntry{item.target, 0});
  } else {
    start_flow(item.target);
  }
}

void Session::on_info(std::string_view line) {
  if (turn_page(current_screen(), line)) return;
  if (line.empty()) {
    resolve(model::outcome::kOk);
  } else if (line == "0") {
    resolve(model::outcome::kBack);
  } else {
    message_ = message::kInvalid;
  }
}

void Session::on_input(const Screen& s, std::string_view line, ShellEffect& fx) {
  const bool first = state_.field_index == 0;
  if (first && line == "0") {
    resolve(model::outcome::kBack);
    return;
  }
  std::string value(line);
  if (first && line == "00") value = "0";
  const auto& field = s.fields.at(state_.field_index);
  if (field.required && value.empty()) {
    message_ = message::kRequired;
    return;
  }
  if (value.size() > field.max_len) {
    message_ = message::kTooLong;
    return;
  }
  if (field.kind == model::FieldKind::Number && !all_digits(value)) {
    message_ = message::kInvalid;
    return;
  }
  state_.bindings[field.name] = std::move(value);
  if (++state_.field_index < s.fields.size()) return;

  std::vector<std::pair<std::string, std::string>> values;
  for (const auto& f : s.fields) values.emplace_back(f.name, state_.bindings[f.name]);
  fx.records.push_back(record_for(s, std::move(values)));
  resolve(model::outcome::kOk);
}

void Session::on_single(const Screen& s, std::string_view line, ShellEffect& fx) {
  if (turn_page(s, line)) return;
  if (line == "0") {
    resolve(model::outcome::kBack);
    return;
  }
  const auto k = selection(line);
  if (!k || *k < 1 || *k > s.options.size()) {
    message_ = message::kInvalid;
    return;
  }
  const auto& opt = s.options[*k - 1];
  state_.bindings[s.var] = opt.value;
  fx.records.push_back(record_for(s, {{s.var, opt.value}}));
  resolve(opt.value, model::outcome::kOk);
}

void Session::on_multi(const Screen& s, std::string_view line, ShellEffect& fx) {
  if (turn_page(s, line)) return;
  if (line == "0") {
    state_.multi_selected.clear();
    resolve(model::outcome::kBack);
    return;
  }
  if (line.empty()) {
    std::string joined;
    for (const auto& o : s.options) {
      if (!state_.multi_selected.contains(o.value)) continue;
      if (!joined.empty()) joined += ',';
      joined += o.value;
    }
    state_.bindings[s.var] = joined;
    fx.records.push_back(record_for(s, {{s.var, joined}}));
    resolve(model::outcome::kOk);
    return;
  }
  const auto k = selection(line);
  if (!k || *k < 1 || *k > s.options.size()) {
    message_ = message::kInvalid;
    return;
  }
  const auto& value = s.options[*k - 1].value;
  if (!state_.multi_selected.erase(value)) state_.multi_selected.insert(value);
}

void Session::start_flow(const std::string& flow_id) {
  const auto* flow = catalog().flow(flow_id);
  if (!flow) throw LookupError(fmt::format("flow '{}' not found", flow_id));
  state_.bindings.clear();
  reset_screen_progress();
  state_.nav.push_back(FlowEntry{flow_id, {}, 0});
  enter_step(flow->start);
}

void Session::enter_step(const std::string& screen_id) {
  const auto* s = catalog().screen(screen_id);
  if (!s || s->is_menu()) throw LookupError(fmt::format("flow screen '{}' not found", screen_id));
  auto& entry = std::get<FlowEntry>(state_.nav.back());
  entry.steps.push_back(screen_id);
  entry.page = 0;
  reset_screen_progress();
}

void Session::resolve(std::string_view outcome, std::string_view fallback) {
  auto& entry = std::get<FlowEntry>(state_.nav.back());
  const auto* flow = catalog().flow(entry.flow);
  if (!flow) throw LookupError(fmt::format("flow '{}' not found", entry.flow));
  const auto screen = entry.steps.back();
  const auto* t = flow->find(screen, outcome);
  if (!t && !fallback.empty()) t = flow->find(screen, fallback);

  // Explicit back may only unwind to an earlier step; otherwise use the default pop.
  auto earlier = entry.steps.rend();
  if (t && outcome == model::outcome::kBack && !t->ends()) {
    earlier = std::find(entry.steps.rbegin() + 1, entry.steps.rend(), t->target);
    if (earlier == entry.steps.rend()) t = nullptr;
  }
  if (!t) {
    if (outcome != model::outcome::kBack) {
      throw LookupError(fmt::format("flow '{}' has no '{}' transition from '{}'", entry.flow, outcome, screen));
    }
    entry.steps.pop_back();
    if (entry.steps.empty()) {
      leave_flow();
    } else {
      entry.page = 0;
      reset_screen_progress();
    }
    return;
  }
  if (t->ends()) {
    leave_flow();
    return;
  }
  if (outcome == model::outcome::kBack) {
    entry.steps.erase(earlier.base(), entry.steps.end());
    entry.page = 0;
    reset_screen_progress();
    return;
  }
  enter_step(t->target);
}

void Session::leave_flow() {
  state_.nav.pop_back();
  state_.bindings.clear();
  reset_screen_progress();
}

void Session::reset_screen_progress() {
  state_.field_index = 0;
  state_.typed.clear();
  state_.multi_selected.clear();
}

DataRecord Session::record_for(const Screen& s, std::vector<std::pair<std::string, std::string>> values) const {
  DataRecord r;
  r.session_id = state_.session_id;
  r.timestamp = std::chrono::system_clock::now();
  r.flow = std::get<FlowEntry>(state_.nav.back()).flow;
  r.screen = s.id;
  r.bindings = std::move(values);
  return r;
}

ShellEffect Session::render(ShellEffect fx) {
  const auto& s = current_screen();
  render::ScreenContext ctx;
  ctx.bindings = &state_.bindings;
  ctx.active_field = state_.field_index;
  ctx.selected = state_.multi_selected;
  ctx.message = std::exchange(message_, {});
  auto& page = current_page();
  auto laid = render::layout(s, ctx, state_.profile, page);
  page = std::min(page, laid.geometry.page_count - 1);
  fx.frame = std::move(laid.frame);
  std::move(laid.diagnostics.begin(), laid.diagnostics.end(), std::back_inserter(fx.diagnostics));
  return fx;
}

}  // namespace uim::shell
