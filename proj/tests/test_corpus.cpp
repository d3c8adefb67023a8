#include "revsim/corpus.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace revsim {
namespace {

using test::CorpusBuilder;

CleanCorpus parse(const std::string& commits, const std::string& prs, const CorpusConfig& config = {}) {
  std::istringstream c(commits);
  std::istringstream p(prs);
  return clean_corpus(c, p, config);
}

TEST(Identity, NormalizesEmailLocalPart) {
  EXPECT_EQ(unify_identity("Jane Doe", "JDoe@x.com", {}).key, "jdoe");
  EXPECT_EQ(unify_identity("  Jane Doe ", "", {}).key, "jane doe");
}

TEST(Identity, AliasTableWins) {
  AliasTable const aliases{{"jdoe", "jane"}};
  EXPECT_EQ(unify_identity("", "jdoe@x.com", aliases).key, "jane");
  AliasTable const by_email{{"jdoe@x.com", "jane"}, {"jdoe", "other"}};
  EXPECT_EQ(unify_identity("", "JDoe@X.com", by_email).key, "jane");
}

TEST(Identity, CaseVariantsCollapse) {
  std::vector<std::pair<std::string, std::string>> const records = {
      {"A", "A@x.com"}, {"a", "a@X.com"}, {"Alpha", " a@x.COM "}};
  for (auto const& [n1, e1] : records) {
    for (auto const& [n2, e2] : records) {
      EXPECT_EQ(unify_identity(n1, e1, {}), unify_identity(n2, e2, {})) << e1 << " vs " << e2;
    }
  }
}

TEST(Identity, HookConsultedAfterDefault) {
  IdentityHook const hook = [](std::string_view key) -> std::optional<std::string> {
    if (key == "jdoe2") return "jdoe";
    return std::nullopt;
  };
  EXPECT_EQ(unify_identity("", "jdoe2@x.com", {}, hook).key, "jdoe");
  EXPECT_EQ(unify_identity("", "kim@x.com", {}, hook).key, "kim");
}

TEST(Identity, BothBlankIsAnError) {
  EXPECT_THROW(unify_identity("  ", "", {}), CorpusError);
}

TEST(Identity, AliasTableParsing) {
  auto const table = parse_alias_table(R"({"JDoe": "jane", "j.doe@x.com": "jane"})");
  EXPECT_EQ(table.size(), 2u);
  EXPECT_THROW(parse_alias_table("[1, 2]"), CorpusError);
  EXPECT_THROW(parse_alias_table("{\"a\": 3}"), CorpusError);
  EXPECT_THROW(parse_alias_table("{"), CorpusError);
}

TEST(Bots, SuffixAndExplicitList) {
  CorpusConfig config;
  EXPECT_TRUE(is_bot(DeveloperId{"dependabot"}, config));
  EXPECT_TRUE(is_bot(DeveloperId{"renovate[bot]"}, config));
  EXPECT_TRUE(is_bot(DeveloperId{"ci-bot"}, config));
  EXPECT_FALSE(is_bot(DeveloperId{"abbot-smith"}, config));
  EXPECT_FALSE(is_bot(DeveloperId{"kim"}, config));
  config.bot_names.insert(DeveloperId{"kim"});
  EXPECT_TRUE(is_bot(DeveloperId{"kim"}, config));
}

TEST(CodeFiles, ExtensionFilter) {
  CorpusConfig config;
  config.code_extensions = {".cs"};
  EXPECT_TRUE(is_code_file("src/A.cs", config));
  EXPECT_FALSE(is_code_file("README.md", config));
  EXPECT_FALSE(is_code_file("src/A.cpp", config));
}

TEST(Clean, OrdersCommitsAndPullRequests) {
  auto const corpus = CorpusBuilder{}
                          .commit("c3", "kim", "2021-01-03T00:00:00Z", {"a.cpp"})
                          .commit("c1", "kim", "2021-01-01T00:00:00Z", {"a.cpp"})
                          .commit("c2", "lee", "2021-01-02T00:00:00Z", {"b.cpp"})
                          .pr("p2", "kim", "2021-01-01T00:00:00Z", "2021-01-09T00:00:00Z", {"a.cpp"})
                          .pr("p1", "lee", "2021-01-05T00:00:00Z", "2021-01-06T00:00:00Z", {"b.cpp"})
                          .build();
  ASSERT_EQ(corpus.commits.size(), 3u);
  ASSERT_EQ(corpus.pull_requests.size(), 2u);
  EXPECT_TRUE(std::is_sorted(corpus.commits.begin(), corpus.commits.end(),
                             [](auto const& a, auto const& b) { return a.timestamp < b.timestamp; }));
  EXPECT_TRUE(std::is_sorted(corpus.pull_requests.begin(), corpus.pull_requests.end(),
                             [](auto const& a, auto const& b) { return a.merged_at < b.merged_at; }));
  EXPECT_EQ(corpus.commits.front().id, "c1");
  EXPECT_EQ(corpus.pull_requests.front().id, "p1");
}

TEST(Clean, MegaPullRequestIsKeptAndFlagged) {
  std::vector<std::string> files;
  for (int i = 0; i < 150; ++i) files.push_back("f" + std::to_string(i) + ".cpp");
  auto const corpus = CorpusBuilder{}
                          .commit("c1", "kim", "2021-01-01T00:00:00Z", files)
                          .pr("p1", "kim", "2021-01-01T00:00:00Z", "2021-01-02T00:00:00Z", files,
                              {{"lee", "2021-01-01T12:00:00Z", std::nullopt}})
                          .build();
  EXPECT_TRUE(corpus.commits.empty());
  EXPECT_EQ(corpus.summary.commits_mega, 1u);
  ASSERT_EQ(corpus.pull_requests.size(), 1u);
  EXPECT_TRUE(corpus.pull_requests.front().mega);
  EXPECT_EQ(corpus.summary.prs_mega_flagged, 1u);
}

TEST(Clean, NonCodeCommitDropped) {
  CorpusConfig config;
  config.code_extensions = {".cs"};
  auto const corpus = CorpusBuilder{}
                          .commit("c1", "kim", "2021-01-01T00:00:00Z", {"README.md"})
                          .commit("c2", "kim", "2021-01-02T00:00:00Z", {"README.md", "A.cs"})
                          .build(config);
  ASSERT_EQ(corpus.commits.size(), 1u);
  EXPECT_EQ(corpus.commits.front().files, std::vector<std::string>{"A.cs"});
  EXPECT_EQ(corpus.summary.commits_non_code, 1u);
}

TEST(Clean, ReviewExclusionsAreCounted) {
  auto const corpus =
      CorpusBuilder{}
          .pr("p1", "kim", "2021-01-01T00:00:00Z", "2021-01-05T00:00:00Z", {"a.cpp", "doc.md"},
              {{"lee", "2021-01-02T00:00:00Z", "a.cpp"},
               {"lee", "2021-01-06T00:00:00Z", std::nullopt},
               {"kim", "2021-01-03T00:00:00Z", std::nullopt},
               {"dependabot", "2021-01-03T00:00:00Z", std::nullopt},
               {"max", "2021-01-04T00:00:00Z", "doc.md"}})
          .pr("p2", "lee", "2021-01-01T00:00:00Z", std::nullopt, {"a.cpp"},
              {{"kim", "2021-01-02T00:00:00Z", std::nullopt}})
          .pr("p3", "ci-bot", "2021-01-01T00:00:00Z", "2021-01-02T00:00:00Z", {"a.cpp"})
          .build();
  auto const& s = corpus.summary;
  EXPECT_EQ(s.reviews_retained, 1u);
  EXPECT_EQ(s.reviews_post_merge, 1u);
  EXPECT_EQ(s.reviews_self, 1u);
  EXPECT_EQ(s.reviews_bot, 1u);
  EXPECT_EQ(s.reviews_non_code, 1u);
  EXPECT_EQ(s.reviews_dropped_with_pr, 1u);
  EXPECT_EQ(s.prs_unmerged, 1u);
  EXPECT_EQ(s.prs_bot, 1u);
  EXPECT_TRUE(s.balanced());
  ASSERT_EQ(corpus.pull_requests.size(), 1u);
  auto const& pr = corpus.pull_requests.front();
  EXPECT_EQ(pr.files, std::vector<std::string>{"a.cpp"});
  for (auto const& e : pr.review_events) {
    EXPECT_NE(e.reviewer, pr.author);
    EXPECT_LE(e.timestamp, pr.merged_at);
  }
}

TEST(Clean, ErrorsNameSourceAndLine) {
  std::string const good = R"({"id":"c1","author_email":"a@x","timestamp":"2021-01-01","files":["a.cpp"]})";
  try {
    parse(good + "\n{not json\n", "");
    FAIL() << "expected an error";
  } catch (const CorpusError& e) {
    EXPECT_NE(std::string(e.what()).find("commits:2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse(good + "\n" + good + "\n", ""), CorpusError);
  try {
    parse(R"({"id":"c1","author_email":"a@x","timestamp":"soon","files":["a.cpp"]})", "");
    FAIL() << "expected an error";
  } catch (const CorpusError& e) {
    EXPECT_NE(std::string(e.what()).find("commits:1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse("", R"({"id":"p","author_email":"a@x","created_at":"2021-01-05","merged_at":"2021-01-01","files":["a.cpp"]})"),
               CorpusError);
}

TEST(Clean, BlankLinesIgnored) {
  auto const corpus = parse(
      "\n" R"({"id":"c1","author_email":"a@x","timestamp":"2021-01-01","files":["a.cpp"]})" "\n\n",
      "");
  EXPECT_EQ(corpus.commits.size(), 1u);
}

TEST(Clean, DeterministicAndRoundTrips) {
  CorpusBuilder builder;
  builder.commit("c1", "Kim", "2021-01-01T00:00:00Z", {"a.cpp", "b.cpp"})
      .commit("c2", "lee", "2021-02-01T00:00:00Z", {"b.cpp"})
      .pr("p1", "lee", "2021-01-03T00:00:00Z", "2021-01-04T00:00:00Z", {"a.cpp"},
          {{"kim", "2021-01-03T10:00:00Z", "a.cpp"}, {"max", "2021-01-03T11:00:00Z", std::nullopt}});
  auto const first = builder.build();
  auto const second = builder.build();
  EXPECT_EQ(serialize(first), serialize(second));

  std::ostringstream commits, prs;
  write_corpus(first, commits, prs);
  auto const again = parse(commits.str(), prs.str());
  EXPECT_EQ(serialize(again), serialize(first));
}

TEST(Clean, LoadCorpusFromFiles) {
  auto const dir = std::filesystem::temp_directory_path() / "revsim_corpus_test";
  std::filesystem::create_directories(dir);
  CorpusBuilder builder;
  builder.commit("c1", "kim", "2021-01-01T00:00:00Z", {"a.cpp"});
  std::ofstream(dir / "c.jsonl") << builder.commits_jsonl();
  std::ofstream(dir / "p.jsonl") << builder.prs_jsonl();
  auto const corpus = load_corpus(dir / "c.jsonl", dir / "p.jsonl", {});
  EXPECT_EQ(corpus.commits.size(), 1u);
  EXPECT_THROW(load_corpus(dir / "missing.jsonl", dir / "p.jsonl", {}), CorpusError);
  std::filesystem::remove_all(dir);
}

TEST(Config, Validation) {
  CorpusConfig config;
  EXPECT_NO_THROW(config.validate());
  config.mega_commit_threshold = 0;
  EXPECT_THROW(config.validate(), CorpusError);
  config = {};
  config.code_extensions.clear();
  EXPECT_THROW(config.validate(), CorpusError);
}

}  // namespace
}  // namespace revsim
