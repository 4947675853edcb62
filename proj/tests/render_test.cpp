#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "uim/model/parse.hpp"
#include "uim/render/frame.hpp"
#include "vt_screen.hpp"

namespace uim::render {
namespace {

namespace fs = std::filesystem;
using model::MenuItem;
using model::Screen;
using model::ScreenType;

Screen menu(std::size_t n) {
  Screen s{.id = "m", .type = ScreenType::Menu, .title = "MENU"};
  for (std::size_t i = 0; i < n; ++i) {
    s.items.push_back({"Item " + std::to_string(i + 1), i % 3 == 0 ? MenuItem::Kind::Node : MenuItem::Kind::Leaf,
                       "t"});
  }
  return s;
}

std::string trimmed(const std::string& row) { return row.substr(0, row.find_last_not_of(' ') + 1); }

TEST(Paginate, Examples) {
  EXPECT_EQ(paginate(30, TerminalProfile::rf()), (PageGeometry{13, 3}));
  EXPECT_EQ(paginate(14, TerminalProfile::rf()), (PageGeometry{14, 1}));
  EXPECT_EQ(paginate(15, TerminalProfile::rf()), (PageGeometry{13, 2}));
  EXPECT_EQ(paginate(0, TerminalProfile::standard()), (PageGeometry{22, 1}));
  EXPECT_EQ(paginate(99, TerminalProfile::standard()), (PageGeometry{21, 5}));
}

TEST(PaginateProperty, EveryItemOnExactlyOnePage) {
  for (std::uint16_t h = TerminalProfile::kMinHeight; h <= 30; ++h) {
    const TerminalProfile p{20, h, TerminalKind::Ansi, {}};
    for (std::size_t n = 0; n <= 99; ++n) {
      const auto g = paginate(n, p);
      ASSERT_GE(g.page_count, 1u);
      ASSERT_GE(g.items_per_page * g.page_count, n);
      if (g.page_count > 1) {
        ASSERT_LT(g.items_per_page * (g.page_count - 1), n);
        ASSERT_EQ(g.items_per_page + 3u, h);  // title, indicator, hint
      } else {
        ASSERT_LE(n + 2u, h);
      }
    }
  }
}

TEST(Layout, MenuMarksNodesAndHintsBack) {
  const auto l = layout(menu(3), {}, TerminalProfile::standard(), 0);
  EXPECT_EQ(trimmed(l.frame.rows[0]), "MENU");
  EXPECT_EQ(trimmed(l.frame.rows[1]), "1 +Item 1");
  EXPECT_EQ(trimmed(l.frame.rows[2]), "2 Item 2");
  EXPECT_EQ(trimmed(l.frame.rows[23]), "0=Back");
  EXPECT_EQ(l.frame.cursor, (Cursor{23, 7}));
  for (const auto& r : l.frame.rows) EXPECT_EQ(r.size(), 80u);
}

TEST(Layout, PagedMenuShowsIndicator) {
  const auto l = layout(menu(30), {}, TerminalProfile::rf(), 2);
  EXPECT_EQ(trimmed(l.frame.rows[1]), "27 Item 27");
  EXPECT_EQ(trimmed(l.frame.rows[4]), "30 Item 30");
  EXPECT_EQ(trimmed(l.frame.rows[5]), "");
  EXPECT_EQ(trimmed(l.frame.rows[14]), "3/3 <=Prev >=Next");
  EXPECT_EQ(layout(menu(30), {}, TerminalProfile::rf(), 99).frame, l.frame);  // clamped
}

TEST(Layout, InputCursorAndMaskedEcho) {
  Screen s{.id = "in", .type = ScreenType::Input, .title = "IN"};
  s.fields = {{"user", model::FieldKind::Text, true, 8, false}, {"pin", model::FieldKind::Number, true, 4, true}};
  const model::Bindings b{{"user", "bob"}, {"pin", "1234"}};
  ScreenContext ctx{.bindings = &b, .active_field = 1};
  const auto l = layout(s, ctx, TerminalProfile::standard(), 0);
  EXPECT_EQ(trimmed(l.frame.rows[1]), "user: bob");
  EXPECT_EQ(trimmed(l.frame.rows[2]), "pin:");
  EXPECT_EQ(l.frame.cursor, (Cursor{2, 5}));
  EXPECT_TRUE(l.frame.masked_cursor_field);
  EXPECT_EQ(trimmed(l.frame.rows[23]), "ENTER=OK");
  ctx.active_field = 2;
  EXPECT_EQ(trimmed(layout(s, ctx, TerminalProfile::standard(), 0).frame.rows[2]), "pin: ****");
}

TEST(Layout, InfoSubstitutesAndReportsUnknown) {
  Screen s{.id = "i", .type = ScreenType::Info, .title = "I", .lines = {"Qty: ${qty}", "${who}"}};
  const model::Bindings b{{"qty", "12"}};
  const auto l = layout(s, {.bindings = &b}, TerminalProfile::standard(), 0);
  EXPECT_EQ(trimmed(l.frame.rows[1]), "Qty: 12");
  EXPECT_EQ(trimmed(l.frame.rows[2]), "");
  EXPECT_EQ(l.diagnostics, std::vector<std::string>{"UnknownVariable who"});
}

TEST(Layout, LongTitleIsTruncatedWithDiagnostic) {
  Screen s = menu(1);
  s.title = std::string(30, 'T');
  const auto l = layout(s, {}, TerminalProfile::rf(), 0);
  EXPECT_EQ(l.frame.rows[0], std::string(20, 'T'));
  EXPECT_EQ(l.diagnostics, std::vector<std::string>{"TitleTruncated"});
}

TEST(Layout, MessageSharesHintRow) {
  const auto l = layout(menu(2), {.message = "INVALID"}, TerminalProfile::standard(), 0);
  EXPECT_EQ(trimmed(l.frame.rows[23]), "INVALID 0=Back");
}

TEST(Serialize, PlainSkipsBlankRows) {
  auto f = Frame::blank(10, 4);
  f.rows[0] = "TITLE     ";
  f.rows[3] = "0=Back    ";
  EXPECT_EQ(to_plain(f), "TITLE\r\n0=Back\r\n");
}

TEST(Serialize, AnsiDiffOnlyTouchesChangedRows) {
  auto a = Frame::blank(10, 4);
  auto b = a;
  b.rows[2] = "changed   ";
  EXPECT_EQ(to_ansi(b, &a), "\x1b[3;1Hchanged   \x1b[1;1H");
  EXPECT_EQ(to_ansi(a, &a), "");
  EXPECT_EQ(to_ansi(a).substr(0, 7), "\x1b[2J\x1b[H");
}

TEST(SerializeProperty, DiffOverAnyPreviousFrameRestoresScreen) {
  std::mt19937_64 rng(8);
  auto random_frame = [&](std::size_t w, std::size_t h) {
    auto f = Frame::blank(w, h);
    for (auto& r : f.rows) {
      for (auto& c : r) c = std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? 'x' : ' ';
    }
    f.cursor = {std::uniform_int_distribution<std::size_t>(0, h - 1)(rng),
                std::uniform_int_distribution<std::size_t>(0, w - 1)(rng)};
    return f;
  };
  for (int iter = 0; iter < 500; ++iter) {
    const std::size_t w = std::uniform_int_distribution<std::size_t>(10, 30)(rng);
    const std::size_t h = std::uniform_int_distribution<std::size_t>(4, 12)(rng);
    const auto first = random_frame(w, h);
    const auto second = random_frame(w, h);
    testing::VtScreen vt(w, h);
    vt.feed(to_ansi(first));
    ASSERT_EQ(vt.rows(), first.rows);
    vt.feed(to_ansi(second, &first));
    ASSERT_EQ(vt.rows(), second.rows);
    ASSERT_EQ(vt.row(), second.cursor.row);
    ASSERT_EQ(vt.col(), second.cursor.col);
  }
}

// Golden frames are produced by the command-line renderer, byte for byte.
struct Golden {
  const char* screen;
  int width, height;
  const char* mode;
};

std::string run_render(const Golden& g) {
  const std::string cmd = std::string("'") + UIM_BINARY + "' render '" + UIM_SOURCE_DIR + "/samples/warehouse' -s " +
                          g.screen + " -W " + std::to_string(g.width) + " -H " + std::to_string(g.height) + " --" +
                          g.mode + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {};
  std::string out;
  std::array<char, 4096> buf;
  while (const std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int status = pclose(p);
  EXPECT_TRUE(WIFEXITED(status) && WEXITSTATUS(status) == 0) << cmd;
  return out;
}

std::vector<Golden> goldens() {
  std::vector<Golden> out;
  for (const char* screen : {"main", "count", "count_done", "dock", "reasons"}) {
    for (const char* mode : {"plain", "ansi"}) {
      out.push_back({screen, 80, 24, mode});
      out.push_back({screen, 20, 16, mode});
    }
  }
  return out;
}

std::string golden_name(const Golden& g) {
  return std::string(g.screen) + "-" + std::to_string(g.width) + "x" + std::to_string(g.height) + "." + g.mode;
}

TEST(GoldenFrames, RenderMatchesByteForByte) {
  const fs::path dir = fs::path(UIM_SOURCE_DIR) / "tests/golden";
  for (const auto& g : goldens()) {
    SCOPED_TRACE(golden_name(g));
    std::ifstream in(dir / golden_name(g), std::ios::binary);
    ASSERT_TRUE(in) << "missing golden";
    std::ostringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(run_render(g), ss.str());
  }
}

TEST(GoldenFrames, MenuCarriesNodeMarkerAndBackHint) {
  const auto plain = run_render({"main", 80, 24, "plain"});
  EXPECT_NE(plain.find("1 +Receiving\r\n"), std::string::npos);
  EXPECT_NE(plain.find("2 Inventory\r\n"), std::string::npos);
  EXPECT_NE(plain.find("0=Back"), std::string::npos);
  const auto ansi = run_render({"main", 20, 16, "ansi"});
  testing::VtScreen vt(20, 16);
  vt.feed(ansi);
  EXPECT_EQ(trimmed(vt.rows()[1]), "1 +Receiving");
  EXPECT_EQ(trimmed(vt.rows()[15]), "0=Back");
}

}  // namespace
}  // namespace uim::render
