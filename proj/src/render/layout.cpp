#include "uim/render/frame.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace uim::render {

namespace {

using model::Screen;
using model::ScreenType;

constexpr std::string_view kHintBack = "0=Back";
constexpr std::string_view kHintContinue = "ENTER=Continue";
constexpr std::string_view kHintInputFirst = "ENTER=OK 0=Back";
constexpr std::string_view kHintInput = "ENTER=OK";
constexpr std::string_view kHintMulti = "ENTER=Done 0=Back";

class Canvas {
 public:
  Canvas(std::size_t width, std::size_t height) : frame_(Frame::blank(width, height)) {}

  // Writes text at the start of a row, truncated. Returns false if it was cut.
  bool put(std::size_t row, std::string_view text) {
    auto& r = frame_.rows[row];
    const std::size_t n = std::min(text.size(), r.size());
    r.replace(0, n, text.substr(0, n));
    return n == text.size();
  }

  void cursor(std::size_t row, std::size_t col) {
    frame_.cursor = {std::min(row, frame_.height() - 1), std::min(col, frame_.width() - 1)};
  }

  Frame& frame() { return frame_; }

 private:
  Frame frame_;
};

std::string_view hint_for(const Screen& s, const ScreenContext& ctx) {
  switch (s.type) {
    case ScreenType::Menu:
    case ScreenType::SingleOption: return kHintBack;
    case ScreenType::Info: return kHintContinue;
    case ScreenType::Input: return ctx.active_field == 0 ? kHintInputFirst : kHintInput;
    case ScreenType::MultiOption: return kHintMulti;
  }
  return kHintBack;
}

std::string hint_row(std::string_view message, std::string_view hint) {
  if (message.empty()) return std::string(hint);
  if (hint.empty()) return std::string(message);
  return fmt::format("{} {}", message, hint);
}

// Text of paged body row `index` (0-based over the whole screen body).
std::string body_line(const Screen& s, const ScreenContext& ctx, std::size_t index,
                      std::vector<std::string>& diagnostics) {
  static const model::Bindings kNoBindings;
  const auto& bindings = ctx.bindings ? *ctx.bindings : kNoBindings;
  switch (s.type) {
    case ScreenType::Menu: {
      const auto& item = s.items[index];
      return fmt::format("{} {}{}", index + 1, item.is_node() ? "+" : "", item.label);
    }
    case ScreenType::Info: {
      auto sub = model::substitute(s.lines[index], bindings);
      for (auto& name : sub.unknown) diagnostics.push_back(fmt::format("UnknownVariable {}", name));
      return sub.text;
    }
    case ScreenType::Input: {
      const auto& f = s.fields[index];
      std::string value;
      if (index < ctx.active_field) {
        if (auto it = bindings.find(f.name); it != bindings.end()) value = it->second;
        if (f.masked) value.assign(value.size(), '*');
      }
      return fmt::format("{}: {}", f.name, value);
    }
    case ScreenType::SingleOption:
      return fmt::format("{} {}", index + 1, s.options[index].label);
    case ScreenType::MultiOption: {
      const auto& o = s.options[index];
      return fmt::format("{} [{}] {}", index + 1, ctx.selected.contains(o.value) ? 'x' : ' ', o.label);
    }
  }
  return {};
}

}  // namespace

bool clamp(TerminalProfile& profile) noexcept {
  const auto before = profile;
  profile.width = std::max(profile.width, TerminalProfile::kMinWidth);
  profile.height = std::max(profile.height, TerminalProfile::kMinHeight);
  return !(before == profile);
}

Frame Frame::blank(std::size_t width, std::size_t height) {
  Frame f;
  f.rows.assign(height, std::string(width, ' '));
  return f;
}

PageGeometry paginate(std::size_t item_count, const TerminalProfile& profile) {
  const std::size_t single = profile.height - 2u;
  if (item_count <= single) return {single, 1};
  const std::size_t per = profile.height - 3u;
  return {per, (item_count + per - 1) / per};
}

std::size_t body_rows(const Screen& s, const ScreenContext&) {
  switch (s.type) {
    case ScreenType::Menu: return s.items.size();
    case ScreenType::Info: return s.lines.size();
    case ScreenType::Input: return s.fields.size();
    case ScreenType::SingleOption:
    case ScreenType::MultiOption: return s.options.size();
  }
  return 0;
}

Layout layout(const Screen& s, const ScreenContext& ctx, const TerminalProfile& profile, std::size_t page) {
  Layout out;
  const std::size_t width = profile.width;
  const std::size_t height = profile.height;
  Canvas canvas(width, height);

  if (!canvas.put(0, s.title)) out.diagnostics.push_back("TitleTruncated");

  const std::size_t n = body_rows(s, ctx);
  out.geometry = paginate(n, profile);
  const auto& geo = out.geometry;
  if (s.type == ScreenType::Input) {
    page = std::min(ctx.active_field, n == 0 ? 0 : n - 1) / geo.items_per_page;
  }
  page = std::min(page, geo.page_count - 1);

  const std::size_t first = page * geo.items_per_page;
  const std::size_t last = std::min(n, first + geo.items_per_page);
  for (std::size_t i = first; i < last; ++i) {
    canvas.put(1 + (i - first), body_line(s, ctx, i, out.diagnostics));
  }
  if (geo.page_count > 1) {
    canvas.put(height - 2, fmt::format("{}/{} <=Prev >=Next", page + 1, geo.page_count));
  }

  const std::string hint = hint_row(ctx.message, hint_for(s, ctx));
  canvas.put(height - 1, hint);

  if (s.type == ScreenType::Input && ctx.active_field < n) {
    const auto& f = s.fields[ctx.active_field];
    canvas.cursor(1 + (ctx.active_field - first), f.name.size() + 2);
    canvas.frame().masked_cursor_field = f.masked;
  } else {
    canvas.cursor(height - 1, hint.size() + 1);
  }
  out.frame = std::move(canvas.frame());
  return out;
}

Frame notice_frame(const TerminalProfile& profile, std::string_view title, const std::vector<std::string>& lines,
                   std::string_view hint) {
  Canvas canvas(profile.width, profile.height);
  canvas.put(0, title);
  for (std::size_t i = 0; i < lines.size() && i + 2 < profile.height; ++i) canvas.put(1 + i, lines[i]);
  canvas.put(profile.height - 1u, hint);
  canvas.cursor(profile.height - 1u, hint.empty() ? 0 : hint.size() + 1);
  return std::move(canvas.frame());
}

Frame with_status(Frame frame, std::string_view text) {
  if (frame.rows.empty()) return frame;
  auto& row = frame.rows.back();
  row.assign(row.size(), ' ');
  row.replace(0, std::min(text.size(), row.size()), text.substr(0, row.size()));
  frame.cursor = {frame.rows.size() - 1, std::min(text.size() + 1, row.size() - 1)};
  frame.masked_cursor_field = false;
  return frame;
}

}  // namespace uim::render
