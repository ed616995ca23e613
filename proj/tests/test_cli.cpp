#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pgm/cli.hpp"
#include "pgm/render.hpp"

using namespace pgm;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run pgm_run(std::vector<std::string> args) {
  args.insert(args.begin(), "pgm");
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / ("pgm_cli_" + std::to_string(::getpid()));
    fs::remove_all(root_);
    fs::create_directories(root_);
    const auto r = pgm_run({"generate", "--out", (root_ / "c1").string(), "--train", "100", "--val", "10", "--test",
                            "20", "--shard-size", "50", "--seed", "9"});
    ASSERT_EQ(r.status, 0) << r.err;
  }
  static void TearDownTestSuite() { fs::remove_all(root_); }

  static fs::path corpus() { return root_ / "c1"; }
  static fs::path root_;
};

fs::path CliTest::root_;

}  // namespace

TEST_F(CliTest, GenerateWritesAllRecordsAndManifest) {
  std::ifstream in(corpus() / "manifest.json");
  const auto m = nlohmann::json::parse(in);
  std::size_t total = 0;
  for (const auto& [name, split] : m.at("splits").items()) total += split.at("count").get<std::size_t>();
  EXPECT_EQ(total, 130u);
  EXPECT_TRUE(fs::exists(corpus() / "train-00001.bin"));
  EXPECT_FALSE(fs::exists(corpus() / "train-00002.bin"));
}

TEST_F(CliTest, SameConfigGivesIdenticalChecksums) {
  const auto again = root_ / "c2";
  const auto r = pgm_run({"generate", "--out", again.string(), "--train", "100", "--val", "10", "--test", "20",
                          "--shard-size", "50", "--seed", "9", "--jobs", "2"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto shards = [](const fs::path& dir) {
    std::ifstream in(dir / "manifest.json");
    const auto m = nlohmann::json::parse(in);
    std::vector<nlohmann::json> out;
    for (const auto& [name, split] : m.at("splits").items())
      for (const auto& s : split.at("shards")) out.push_back({s.at("crc32"), s.at("sidecar_crc32")});
    return out;
  };
  EXPECT_EQ(shards(corpus()), shards(again));
}

TEST_F(CliTest, InfeasibleRegimeFailsWithFilterExhausted) {
  const auto r = pgm_run({"generate", "--out", (root_ / "bad").string(), "--regime", "holdout_line_type",
                          "--objects", "shape", "--train", "5", "--val", "1", "--test", "1"});
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("FilterExhausted"), std::string::npos) << r.err;
}

TEST_F(CliTest, ConfigViolations) {
  EXPECT_NE(pgm_run({"generate", "--out", (root_ / "z").string(), "--train", "0"}).status, 0);
  EXPECT_NE(pgm_run({"generate", "--out", (root_ / "z").string(), "--regime", "nonsense"}).status, 0);
  EXPECT_NE(pgm_run({"serve", corpus().string(), "--port", "70000"}).status, 0);
  EXPECT_NE(pgm_run({"frobnicate"}).status, 0);
  cli::RunConfig cfg;
  cfg.out = root_ / "ok";
  EXPECT_FALSE(cfg.violation().has_value());
  cfg.corpus.shard_size = 0;
  EXPECT_TRUE(cfg.violation().has_value());
}

TEST_F(CliTest, ValidatePassesOnFreshCorpus) {
  const auto r = pgm_run({"validate", corpus().string(), "--json"});
  ASSERT_EQ(r.status, 0) << r.out << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("passed").get<bool>());
  EXPECT_EQ(j.at("records").get<std::size_t>(), 130u);
  EXPECT_EQ(j.at("failed").get<std::size_t>(), 0u);
}

TEST_F(CliTest, ValidateFailsOnCorruption) {
  const auto copy = root_ / "corrupt";
  fs::copy(corpus(), copy, fs::copy_options::recursive);
  {
    std::fstream f(copy / "test-00000.bin", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(5000);
    f.put('\x7f');
  }
  const auto r = pgm_run({"validate", copy.string()});
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, StatsReport) {
  const auto r = pgm_run({"stats", corpus().string(), "--split", "train", "--json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("records").get<std::size_t>(), 100u);
  EXPECT_EQ(pgm_run({"stats", corpus().string()}).status, 0);
}

TEST_F(CliTest, SolveReturnsStoredAnswer) {
  for (int i : {0, 7, 19}) {
    const auto r = pgm_run({"solve", corpus().string(), "--split", "test", "--index", std::to_string(i), "--json"});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("answer"), j.at("stored_answer"));
  }
}

TEST_F(CliTest, RenderWritesSheetAndPanel) {
  const auto sheet = root_ / "sheet.pgm";
  auto r = pgm_run({"render", corpus().string(), "--index", "2", "--out", sheet.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  std::ifstream in(sheet, std::ios::binary);
  std::string magic;
  int w = 0, h = 0;
  in >> magic >> w >> h;
  EXPECT_EQ(magic, "P5");
  SheetLayout layout;
  EXPECT_EQ(w, layout.width());
  EXPECT_EQ(h, layout.height());

  const auto panel = root_ / "panel.png";
  r = pgm_run({"render", corpus().string(), "--index", "2", "--panel", "9", "--out", panel.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(fs::exists(panel));
  EXPECT_NE(pgm_run({"render", corpus().string(), "--panel", "16", "--out", panel.string()}).status, 0);
  EXPECT_NE(pgm_run({"render", corpus().string(), "--index", "5000", "--out", panel.string()}).status, 0);
}
