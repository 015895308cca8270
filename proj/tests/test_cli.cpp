#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sunflower_cli.hpp"

namespace {

const std::string kData = SUNFLOWER_DATA_DIR;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "sunflower");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = sunflower::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

sunflower::Json json_of(const CliRun& r) { return sunflower::Json::parse(r.out); }

}  // namespace

TEST(Cli, GammaExitCodes) {
  const CliRun holds = run({"gamma", "-i", kData + "/triangle.json", "--b", "1", "--format", "json"});
  EXPECT_EQ(holds.code, 0);
  EXPECT_EQ(json_of(holds)["holds"], true);
  const CliRun fails = run({"gamma", "-i", kData + "/triangle.json", "--b", "3", "--format", "json"});
  EXPECT_EQ(fails.code, 1);
  EXPECT_EQ(json_of(fails)["witness"], sunflower::Json::array({1}));
}

TEST(Cli, FindSunflower) {
  const CliRun none = run({"find-sunflower", "-i", kData + "/triangle.json", "--k", "3"});
  EXPECT_EQ(none.code, 1);
  EXPECT_NE(none.out.find("none"), std::string::npos);
  EXPECT_EQ(run({"find-sunflower", "-i", kData + "/triangle.json", "--k", "3", "--allow-none"}).code, 0);
  const CliRun found = run({"find-sunflower", "-i", kData + "/complete_4_2.json", "--k", "3", "--format", "json"});
  EXPECT_EQ(found.code, 0);
  EXPECT_EQ(json_of(found)["core"], sunflower::Json::array({1}));
}

TEST(Cli, BoundsTable) {
  const CliRun r = run({"bounds", "--k", "3", "--m", "2", "--format", "json"});
  EXPECT_EQ(r.code, 0);
  const auto rows = json_of(r)["rows"];
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0]["classical"], 8);
}

TEST(Cli, ErrorsExitWithUsageCode) {
  const auto bad = std::filesystem::temp_directory_path() / "sunflower_cli_bad.json";
  std::ofstream(bad) << "{\"n\": 3, \"m\": 2,\n \"sets\": [[1, 2], [2, 5]]}\n";
  const CliRun r = run({"gamma", "-i", bad.string(), "--b", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("sets[1][1]"), std::string::npos) << r.err;
  EXPECT_EQ(run({"gamma", "-i", kData + "/nonexistent.json", "--b", "2"}).code, 2);
  EXPECT_EQ(run({"no-such-command"}).code, 2);
  EXPECT_EQ(run({"pipeline", "-i", kData + "/planted_12_3.json", "--eps", "0.05"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  std::filesystem::remove(bad);
}

TEST(Cli, PipelineIsDeterministic) {
  const std::vector<std::string> args{"pipeline", "-i", kData + "/planted_12_3.json", "--format", "structured", "--seed", "11",
                                      "--eps", "0.5", "--h", "1", "--c", "1", "--b", "2", "--delta", "0.25", "--core-cap", "1",
                                      "--f-theta", "0.5", "--f-rho", "1", "--reconstruct-ratio", "1", "--slack-low", "0.9",
                                      "--slack-high", "1", "--lift-rounds", "2"};
  const CliRun a = run(args);
  const CliRun b = run(args);
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(json_of(a)["certificate"].is_null());
}
