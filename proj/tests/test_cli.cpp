#include "revsim/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace revsim {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int status = 0;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "revsim");
  std::vector<const char*> argv;
  for (auto const& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int const status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (auto const& entry : fs::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    files[entry.path().filename().string()] = std::string(std::istreambuf_iterator<char>(in), {});
  }
  return files;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("revsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
    auto const r = run({"synth", "--devs", "6", "--files", "30", "--directories", "3", "--quarters", "8",
                        "--prs-per-quarter", "6", "--turnover", "0.3", "--seed", "5", "--out", path("corpus")});
    ASSERT_EQ(r.status, 0) << r.err;
  }
  void TearDown() override { fs::remove_all(root_); }

  std::string path(const std::string& name) const { return (root_ / name).string(); }
  std::vector<std::string> corpus_flags() const {
    return {"--commits", path("corpus/commits.jsonl"), "--prs", path("corpus/prs.jsonl")};
  }
  std::vector<std::string> with_corpus(std::vector<std::string> args) const {
    auto flags = corpus_flags();
    args.insert(args.end(), flags.begin(), flags.end());
    return args;
  }

  fs::path root_;
};

TEST_F(Cli, SynthWritesBothFiles) {
  auto const files = read_dir(path("corpus"));
  ASSERT_EQ(files.size(), 2u);
  EXPECT_FALSE(files.at("commits.jsonl").empty());
  EXPECT_FALSE(files.at("prs.jsonl").empty());
}

TEST_F(Cli, EverySubcommandIsByteIdenticalOnRerun) {
  std::vector<std::vector<std::string>> const commands = {
      with_corpus({"simulate", "--recommender", "chrev", "--recommender", "sofia,whodo", "--seed", "9"}),
      with_corpus({"analyze", "--period", "week", "--period", "month"}),
      with_corpus({"sensitivity", "--recommender", "sofiawl", "--k-from", "1", "--k-to", "3"}),
      {"synth", "--devs", "5", "--quarters", "6", "--seed", "3"},
  };
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::map<std::string, std::string> outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      auto args = commands[i];
      auto const dir = path("out" + std::to_string(i) + "_" + std::to_string(rep));
      args.insert(args.end(), {"--out", dir});
      auto const r = run(args);
      ASSERT_EQ(r.status, 0) << commands[i][0] << ": " << r.err;
      outputs[rep] = read_dir(dir);
    }
    EXPECT_FALSE(outputs[0].empty()) << commands[i][0];
    EXPECT_EQ(outputs[0], outputs[1]) << commands[i][0];
  }
}

TEST_F(Cli, SimulateWritesPerRecommenderLogs) {
  auto args = with_corpus({"simulate", "--recommender", "chrev,turnover", "--out", path("sim")});
  ASSERT_EQ(run(args).status, 0);
  auto const files = read_dir(path("sim"));
  EXPECT_TRUE(files.contains("replacements_chrev.csv"));
  EXPECT_TRUE(files.contains("replacements_turnover.csv"));
  EXPECT_TRUE(files.contains("summary.csv"));
  EXPECT_TRUE(files.contains("quarterly.csv"));
}

TEST_F(Cli, SeedChangesTheReplacements) {
  for (auto const* seed : {"1", "2"}) {
    auto args = with_corpus({"simulate", "--recommender", "chrev", "--seed", seed, "--out", path(std::string("s") + seed)});
    ASSERT_EQ(run(args).status, 0);
  }
  EXPECT_NE(read_dir(path("s1")).at("replacements_chrev.csv"), read_dir(path("s2")).at("replacements_chrev.csv"));
}

TEST_F(Cli, EmptyCorpusFailsWithoutOutputs) {
  std::ofstream(path("empty.jsonl")).flush();
  auto const r = run({"analyze", "--commits", path("empty.jsonl"), "--prs", path("empty.jsonl"), "--out", path("none")});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("empty"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("none")));
}

TEST_F(Cli, UnknownRecommenderRejected) {
  auto const r = run(with_corpus({"simulate", "--recommender", "oracle", "--out", path("x")}));
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("oracle"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("x")));
}

TEST_F(Cli, MissingInputsAreErrors) {
  auto const r = run({"simulate", "--recommender", "chrev", "--out", path("x")});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("--commits"), std::string::npos) << r.err;
  auto const missing = run({"analyze", "--commits", path("nope.jsonl"), "--prs", path("nope.jsonl"), "--out", path("y")});
  EXPECT_EQ(missing.status, 1);
  EXPECT_FALSE(fs::exists(path("y")));
  EXPECT_NE(run({"simulate", "--seed", "abc"}).status, 0);
  EXPECT_NE(run({}).status, 0);
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  std::ofstream(path("run.conf")) << "commits=" << path("corpus/commits.jsonl") << "\n"
                                  << "prs=" << path("corpus/prs.jsonl") << "\n"
                                  << "recommender=chrev\n"
                                  << "seed=7\n";
  auto const from_config = run({"simulate", "--config", path("run.conf"), "--out", path("c")});
  ASSERT_EQ(from_config.status, 0) << from_config.err;
  auto const explicit_flags = run(with_corpus({"simulate", "--recommender", "chrev", "--seed", "7", "--out", path("f")}));
  ASSERT_EQ(explicit_flags.status, 0);
  EXPECT_EQ(read_dir(path("c")), read_dir(path("f")));

  auto const overridden = run({"simulate", "--config", path("run.conf"), "--seed", "8", "--out", path("o")});
  ASSERT_EQ(overridden.status, 0) << overridden.err;
  auto const seed8 = run(with_corpus({"simulate", "--recommender", "chrev", "--seed", "8", "--out", path("e")}));
  ASSERT_EQ(seed8.status, 0);
  EXPECT_EQ(read_dir(path("o")), read_dir(path("e")));
  EXPECT_NE(read_dir(path("o")), read_dir(path("c")));

  std::ofstream(path("bad.conf")) << "colour=blue\n";
  EXPECT_NE(run({"simulate", "--config", path("bad.conf")}).status, 0);
}

}  // namespace
}  // namespace revsim
