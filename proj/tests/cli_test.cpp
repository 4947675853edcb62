#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "uim/cli/cli.hpp"
#include "uim/model/parse.hpp"

namespace uim::cli {
namespace {

namespace fs = std::filesystem;
const std::string kSamples = std::string(UIM_SOURCE_DIR) + "/samples";

struct Result {
  int code;
  std::string out, err;
};

Result uim(std::vector<std::string> args) {
  args.insert(args.begin(), "uim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, ValidateSamples) {
  auto r = uim({"validate", kSamples + "/basic"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "OK 3 screens, 1 flows\n");
  r = uim({"validate", kSamples + "/warehouse"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "OK 10 screens, 4 flows\n");
  r = uim({"validate", "tabular:" + kSamples + "/tabular"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, ValidateReportsParseLocation) {
  const auto r = uim({"validate", std::string(UIM_SOURCE_DIR) + "/tests/fixtures/malformed"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(":1:1: XmlSyntax"), std::string::npos) << r.err;  // first file sorts first
}

TEST(Cli, RenderDefaultsToRootMenu) {
  const auto r = uim({"render", kSamples + "/basic", "--plain", "-W", "20", "-H", "16"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "MAIN\r\n1 Inventory\r\n2 +Receiving\r\n0=Back\r\n");
}

TEST(Cli, RenderUnknownScreenAndDiagnostics) {
  auto r = uim({"render", kSamples + "/basic", "-s", "nope"});
  EXPECT_EQ(r.code, 1);
  r = uim({"render", kSamples + "/warehouse", "-s", "count_done", "--plain"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("UnknownVariable loc"), std::string::npos);
  r = uim({"render", kSamples + "/basic", "--plain", "--ansi"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, SimulatePrintsRecords) {
  const auto r = uim({"simulate", kSamples + "/basic", "--script", "1\\nSKU123\\n12"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  ASSERT_TRUE(std::getline(lines, line));
  const auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j["session_id"], "sim");
  EXPECT_EQ(j["flow"], "inv");
  EXPECT_EQ(j["bindings"], nlohmann::json({{"sku", "SKU123"}, {"qty", "12"}}));
  EXPECT_FALSE(std::getline(lines, line));
}

TEST(Cli, SimulateWithFrames) {
  const auto r = uim({"simulate", kSamples + "/basic", "--script", "2", "--frames", "-W", "20", "-H", "16"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "MAIN\r\n1 Inventory\r\n2 +Receiving\r\n0=Back\r\n--\nRECEIVING\r\n1 By PO\r\n0=Back\r\n--\n");
}

TEST(Cli, GenerateMatchesXmlSample) {
  const auto r = uim({"generate", kSamples + "/tabular"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NO_THROW(model::parse(r.out));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(uim({}).code, 2);
  EXPECT_EQ(uim({"frobnicate"}).code, 2);
  EXPECT_EQ(uim({"validate"}).code, 2);
  EXPECT_EQ(uim({"--help"}).code, 0);
}

TEST(Cli, ServeNeedsConfig) {
  unsetenv("UIM_CONFIG");
  const auto r = uim({"serve"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("no config"), std::string::npos);
}

TEST(Cli, ServeRejectsBadConfig) {
  const auto dir = fs::temp_directory_path() / "uim-cli-badconf";
  fs::create_directories(dir);
  const auto conf = dir / "uim.conf";
  std::ofstream(conf) << "repository = " << kSamples << "/basic\nmystery = 1\n";
  const auto r = uim({"serve", "--config", conf.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("unknown key"), std::string::npos);
}

}  // namespace
}  // namespace uim::cli
