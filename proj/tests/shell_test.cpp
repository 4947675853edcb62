#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "random_doc.hpp"
#include "uim/model/parse.hpp"
#include "uim/repo/repository.hpp"
#include "uim/shell/session.hpp"

namespace uim::shell {
namespace {

namespace fs = std::filesystem;
using Bind = std::vector<std::pair<std::string, std::string>>;

repo::SnapshotPtr sample(std::string_view dir = "basic", std::uint64_t version = 1) {
  return repo::make_snapshot(repo::load_directory_doc(fs::path(UIM_SOURCE_DIR) / "samples" / dir), version);
}

std::string row(const ShellEffect& fx, std::size_t r) {
  const auto& s = fx.frame.rows.at(r);
  return s.substr(0, s.find_last_not_of(' ') + 1);
}
std::string title(const ShellEffect& fx) { return row(fx, 0); }
std::string hint(const ShellEffect& fx) { return row(fx, fx.frame.height() - 1); }

TEST(Session, OpensAtRootMenu) {
  Session s("t1", sample(), render::TerminalProfile::standard());
  const auto fx = s.open();
  EXPECT_EQ(title(fx), "MAIN");
  EXPECT_EQ(row(fx, 1), "1 Inventory");
  EXPECT_EQ(row(fx, 2), "2 +Receiving");
  EXPECT_EQ(hint(fx), "0=Back");
  EXPECT_EQ(s.depth(), 1u);
}

TEST(Session, InventoryFlowProducesOneRecord) {
  Session s("t1", sample(), render::TerminalProfile::standard());
  s.open();
  auto fx = s.handle_line("1");
  EXPECT_EQ(title(fx), "COUNT");
  EXPECT_EQ(hint(fx), "ENTER=OK 0=Back");
  EXPECT_TRUE(s.in_flow());
  fx = s.handle_line("SKU123");
  EXPECT_TRUE(fx.records.empty());
  EXPECT_EQ(row(fx, 1), "sku: SKU123");
  EXPECT_EQ(hint(fx), "ENTER=OK");
  fx = s.handle_line("12");
  ASSERT_EQ(fx.records.size(), 1u);
  EXPECT_EQ(fx.records[0].flow, "inv");
  EXPECT_EQ(fx.records[0].screen, "count");
  EXPECT_EQ(fx.records[0].session_id, "t1");
  EXPECT_EQ(fx.records[0].bindings, (Bind{{"sku", "SKU123"}, {"qty", "12"}}));
  EXPECT_EQ(title(fx), "MAIN");
  EXPECT_FALSE(s.in_flow());
  EXPECT_TRUE(s.state().bindings.empty());
}

TEST(Session, MenuNavigationAndMessages) {
  Session s("t", sample(), render::TerminalProfile::standard());
  s.open();
  EXPECT_EQ(hint(s.handle_line("0")), "AT TOP 0=Back");
  EXPECT_EQ(hint(s.handle_line("9")), "INVALID 0=Back");
  EXPECT_EQ(hint(s.handle_line("x")), "INVALID 0=Back");
  EXPECT_EQ(hint(s.handle_line("")), "INVALID 0=Back");
  EXPECT_EQ(hint(s.handle_line("<")), "INVALID 0=Back");
  auto fx = s.handle_line("2");
  EXPECT_EQ(title(fx), "RECEIVING");
  EXPECT_EQ(hint(fx), "0=Back");  // message lasts one frame
  EXPECT_EQ(s.depth(), 2u);
  fx = s.handle_line("0");
  EXPECT_EQ(title(fx), "MAIN");
  EXPECT_EQ(s.depth(), 1u);
}

TEST(Session, InputValidation) {
  Session s("t", sample(), render::TerminalProfile::standard());
  s.open();
  s.handle_line("1");
  EXPECT_EQ(hint(s.handle_line("")), "REQUIRED ENTER=OK 0=Back");
  EXPECT_EQ(hint(s.handle_line(std::string(21, 'x'))), "TOO LONG ENTER=OK 0=Back");
  s.handle_line("00");  // literal 0 in the first field
  EXPECT_EQ(s.state().bindings.at("sku"), "0");
  EXPECT_EQ(hint(s.handle_line("12a")), "INVALID ENTER=OK");
  EXPECT_EQ(hint(s.handle_line("1234567")), "TOO LONG ENTER=OK");
  const auto fx = s.handle_line("0");  // a value on later fields
  ASSERT_EQ(fx.records.size(), 1u);
  EXPECT_EQ(fx.records[0].bindings, (Bind{{"sku", "0"}, {"qty", "0"}}));
}

TEST(Session, BackFromFirstFieldLeavesFlow) {
  Session s("t", sample(), render::TerminalProfile::standard());
  s.open();
  s.handle_line("2");
  s.handle_line("1");
  EXPECT_EQ(s.depth(), 4u);  // main, recv, flow entry, one step
  const auto fx = s.handle_line("0");
  EXPECT_EQ(title(fx), "RECEIVING");
  EXPECT_TRUE(fx.records.empty());
}

TEST(Session, WarehouseReceiveFollowsOptionValue) {
  Session s("t", sample("warehouse"), render::TerminalProfile::standard());
  s.open();
  s.handle_line("1");
  auto fx = s.handle_line("1");
  EXPECT_EQ(title(fx), "RECEIVE PO");
  s.handle_line("4711");
  fx = s.handle_line("99");
  EXPECT_EQ(row(fx, 0), "DOCK DOOR");
  ASSERT_EQ(fx.records.size(), 1u);
  EXPECT_EQ(fx.records[0].bindings, (Bind{{"po", "4711"}, {"pin", "99"}}));
  fx = s.handle_line("3");
  ASSERT_EQ(fx.records.size(), 1u);
  EXPECT_EQ(fx.records[0].bindings, (Bind{{"dock", "yard"}}));
  EXPECT_EQ(title(fx), "YARD");
  EXPECT_EQ(row(fx, 2), "PO 4711");
  fx = s.handle_line("0");  // back pops to the dock choice
  EXPECT_EQ(title(fx), "DOCK DOOR");
  fx = s.handle_line("1");
  EXPECT_EQ(title(fx), "RECEIVING");
}

TEST(Session, MaskedFieldNeverShowsValue) {
  Session s("t", sample("warehouse"), render::TerminalProfile::standard());
  s.open();
  s.handle_line("1");
  s.handle_line("1");
  auto fx = s.handle_line("4711");
  EXPECT_TRUE(fx.frame.masked_cursor_field);
  s.handle_line("0");  // "0" in a later field is a value
  EXPECT_EQ(s.current_screen_id(), "dock");
}

TEST(Session, MultiOptionTogglesAndJoinsInOptionOrder) {
  Session s("t", sample("warehouse"), render::TerminalProfile::standard());
  s.open();
  s.handle_line("1");
  auto fx = s.handle_line("2");
  EXPECT_EQ(title(fx), "RETURN REASONS");
  s.handle_line("3");
  s.handle_line("1");
  s.handle_line("2");
  fx = s.handle_line("2");
  EXPECT_EQ(row(fx, 1), "1 [x] Damaged");
  EXPECT_EQ(row(fx, 2), "2 [ ] Wrong item");
  EXPECT_EQ(row(fx, 3), "3 [x] Late");
  fx = s.handle_line("");
  ASSERT_EQ(fx.records.size(), 1u);
  EXPECT_EQ(fx.records[0].bindings, (Bind{{"reasons", "damaged,late"}}));
  EXPECT_EQ(title(fx), "RECEIVING");
}

TEST(Session, PagingKeepsItemNumbersAbsolute) {
  auto doc = repo::load_directory_doc(fs::path(UIM_SOURCE_DIR) / "samples/basic");
  auto& main = doc.screens[0].id == "main" ? doc.screens[0] : doc.screens[1];
  ASSERT_EQ(main.id, "main");
  while (main.items.size() < 30) main.items.push_back({"Extra", model::MenuItem::Kind::Leaf, "inv"});
  Session s("t", repo::make_snapshot(doc, 1), render::TerminalProfile::rf());
  auto fx = s.open();
  EXPECT_EQ(row(fx, 14), "1/3 <=Prev >=Next");
  fx = s.handle_line("<");
  EXPECT_EQ(row(fx, 14), "1/3 <=Prev >=Next");
  s.handle_line(">");
  fx = s.handle_line(">");
  EXPECT_EQ(row(fx, 1), "27 Extra");
  fx = s.handle_line(">");
  EXPECT_EQ(row(fx, 14), "3/3 <=Prev >=Next");
  fx = s.handle_line("1");  // selection is by absolute number from any page
  EXPECT_EQ(title(fx), "COUNT");
}

TEST(Session, ResizeRerendersAndClamps) {
  Session s("t", sample(), render::TerminalProfile::standard());
  s.open();
  auto fx = s.handle_resize(20, 16);
  EXPECT_EQ(fx.frame.width(), 20u);
  EXPECT_EQ(fx.frame.height(), 16u);
  fx = s.handle_resize(2, 1);
  EXPECT_EQ(fx.frame.width(), render::TerminalProfile::kMinWidth);
  EXPECT_EQ(fx.frame.height(), render::TerminalProfile::kMinHeight);
  EXPECT_FALSE(fx.diagnostics.empty());
}

TEST(Session, AdoptsNewSnapshotOnlyOutsideFlows) {
  Session s("t", sample("basic", 1), render::TerminalProfile::standard());
  s.open();
  s.handle_line("2");
  EXPECT_TRUE(s.adopt(sample("basic", 2)));
  EXPECT_EQ(s.current_screen_id(), "recv");  // still exists, position kept
  EXPECT_FALSE(s.adopt(sample("basic", 2)));  // same version
  s.handle_line("1");
  EXPECT_FALSE(s.adopt(sample("basic", 3)));
  EXPECT_EQ(s.state().snapshot_version(), 2u);
}

TEST(Session, AdoptRestartsAtRootWhenMenuIsGone) {
  Session s("t", sample("basic", 1), render::TerminalProfile::standard());
  s.open();
  s.handle_line("2");
  auto doc = repo::load_directory_doc(fs::path(UIM_SOURCE_DIR) / "samples/basic");
  std::erase_if(doc.screens, [](const auto& sc) { return sc.id == "recv"; });
  for (auto& sc : doc.screens) std::erase_if(sc.items, [](const auto& it) { return it.target == "recv"; });
  EXPECT_TRUE(s.adopt(repo::make_snapshot(doc, 2)));
  EXPECT_EQ(s.current_screen_id(), "main");
  EXPECT_EQ(s.depth(), 1u);
}

TEST(Session, ExplicitBackUnwindsToEarlierStep) {
  const auto doc = model::parse(R"(<uim root="m">
  <screen type="menu" id="m" title="M"><item label="go" flow="f"/></screen>
  <screen type="info" id="a" title="A"><line>a</line></screen>
  <screen type="info" id="b" title="B"><line>b</line></screen>
  <screen type="info" id="c" title="C"><line>c</line></screen>
  <flow id="f" start="a">
    <on screen="a" outcome="ok" goto="b"/>
    <on screen="b" outcome="ok" goto="c"/>
    <on screen="c" outcome="ok" goto="end"/>
    <on screen="c" outcome="back" goto="a"/>
    <on screen="a" outcome="back" goto="c"/>
  </flow>
</uim>)");
  Session s("t", repo::make_snapshot(doc, 1), render::TerminalProfile::standard());
  s.open();
  s.handle_line("1");
  s.handle_line("");
  s.handle_line("");
  EXPECT_EQ(s.current_screen_id(), "c");
  s.handle_line("0");
  EXPECT_EQ(s.current_screen_id(), "a");
  EXPECT_EQ(s.depth(), 3u);
  s.handle_line("0");  // a's explicit back points forward: plain pop instead
  EXPECT_EQ(s.current_screen_id(), "m");
}

TEST(Session, BackToCurrentStepIsAPlainPop) {
  const auto doc = model::parse(R"(<uim root="m">
  <screen type="menu" id="m" title="M"><item label="go" flow="f"/></screen>
  <screen type="info" id="a" title="A"><line>a</line></screen>
  <screen type="info" id="b" title="B"><line>b</line></screen>
  <flow id="f" start="a">
    <on screen="a" outcome="ok" goto="b"/>
    <on screen="b" outcome="ok" goto="end"/>
    <on screen="b" outcome="back" goto="b"/>
  </flow>
</uim>)");
  Session s("t", repo::make_snapshot(doc, 1), render::TerminalProfile::standard());
  s.open();
  s.handle_line("1");
  s.handle_line("");
  EXPECT_EQ(s.current_screen_id(), "b");
  s.handle_line("0");
  EXPECT_EQ(s.current_screen_id(), "a");
}

TEST(Session, GoodbyeFrame) {
  const auto f = goodbye_frame(render::TerminalProfile::rf(), "IDLE TIMEOUT");
  EXPECT_EQ(f.rows[0].substr(0, 7), "GOODBYE");
  EXPECT_EQ(f.rows[1].substr(0, 12), "IDLE TIMEOUT");
}

// Random walk over generated repositories. After any line, "0" repeated at
// most depth + remaining fields + 1 times must land on the root menu.
std::string random_line(std::mt19937_64& rng, const Session& s) {
  const int pick = std::uniform_int_distribution<int>(0, 99)(rng);
  if (pick < 30) return std::to_string(std::uniform_int_distribution<int>(1, 9)(rng));
  if (pick < 45) return "0";
  if (pick < 55) return "";
  if (pick < 60) return "<";
  if (pick < 65) return ">";
  if (pick < 70) return "00";
  if (pick < 75) return std::to_string(std::uniform_int_distribution<int>(10, 120)(rng));
  if (pick < 80) return std::string(std::uniform_int_distribution<std::size_t>(30, 255)(rng), 'w');
  (void)s;
  std::string out;
  const auto len = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
  for (std::size_t i = 0; i < len; ++i) out += static_cast<char>(std::uniform_int_distribution<int>(0x20, 0x7e)(rng));
  return out;
}

void check_frame(const ShellEffect& fx, const render::TerminalProfile& p) {
  ASSERT_EQ(fx.frame.height(), p.height);
  for (const auto& r : fx.frame.rows) ASSERT_EQ(r.size(), p.width);
  ASSERT_LT(fx.frame.cursor.row, p.height);
  ASSERT_LT(fx.frame.cursor.col, p.width);
  ASSERT_FALSE(fx.terminated);
}

TEST(SessionProperty, RandomWalkNeverFaultsAndZeroReturnsToRoot) {
  std::mt19937_64 rng(1234);
  constexpr int kDocs = 200;
  constexpr int kLinesPerDoc = 500;  // 10^5 lines in total
  std::size_t lines = 0, records = 0, closures = 0;
  for (int d = 0; d < kDocs; ++d) {
    const auto doc = testing::random_doc(rng);
    ASSERT_TRUE(model::validate(doc).clean());
    const auto snap = repo::make_snapshot(doc, 1);
    auto profile = std::uniform_int_distribution<int>(0, 1)(rng) ? render::TerminalProfile::standard()
                                                                 : render::TerminalProfile::rf();
    Session s("walk", snap, profile);
    check_frame(s.open(), profile);
    for (int i = 0; i < kLinesPerDoc; ++i) {
      const auto line = random_line(rng, s);
      const auto fx = s.handle_line(line);
      ++lines;
      ASSERT_TRUE(fx.diagnostics.empty() || fx.diagnostics.front().rfind("internal fault", 0) != 0)
          << fx.diagnostics.front();
      check_frame(fx, profile);
      ASSERT_GE(s.depth(), 1u);
      records += fx.records.size();
      for (const auto& r : fx.records) {
        const auto* sc = snap->catalog.screen(r.screen);
        ASSERT_NE(sc, nullptr);
        ASSERT_NE(sc->type, model::ScreenType::Menu);
        ASSERT_NE(sc->type, model::ScreenType::Info);
      }

      if (i % 25 == 24) {
        Session probe = s;
        const std::size_t bound = probe.depth() + probe.remaining_fields() + 1;
        std::size_t presses = 0;
        std::string trail = probe.current_screen_id() + "/" + std::to_string(probe.depth());
        while (!(probe.depth() == 1 && probe.current_screen_id() == doc.root_menu)) {
          ASSERT_LT(presses++, bound) << "'0' did not return to the root: " << trail;
          const auto fx0 = probe.handle_line("0");
          trail += " " + probe.current_screen_id() + "/" + std::to_string(probe.depth());
          ASSERT_FALSE(fx0.terminated);
        }
        const auto top = probe.handle_line("0");
        ASSERT_EQ(probe.depth(), 1u);
        ASSERT_EQ(probe.current_screen_id(), doc.root_menu);
        ++closures;
        (void)top;
      }
    }
    // End every walk by backing out completely.
    for (std::size_t guard = 0; guard < 1000 && s.depth() > 1; ++guard) s.handle_line("0");
    ASSERT_EQ(s.depth(), 1u);
    ASSERT_EQ(s.current_screen_id(), doc.root_menu);
  }
  EXPECT_EQ(lines, 100000u);
  EXPECT_GT(records, 0u);
  EXPECT_EQ(closures, 200u * 20u);
}

}  // namespace
}  // namespace uim::shell
