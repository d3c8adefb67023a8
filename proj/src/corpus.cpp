#include "revsim/corpus.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace revsim {

using nlohmann::json;

namespace {

std::string lower_trim(std::string_view s) {
  auto const not_space = [](unsigned char c) { return !std::isspace(c); };
  auto const first = std::find_if(s.begin(), s.end(), not_space);
  auto const last = std::find_if(s.rbegin(), s.rend(), not_space).base();
  std::string out;
  if (first < last) {
    out.assign(first, last);
  }
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view extension_of(std::string_view path) {
  auto const slash = path.find_last_of('/');
  auto const name = slash == std::string_view::npos ? path : path.substr(slash + 1);
  auto const dot = name.find_last_of('.');
  if (dot == std::string_view::npos || dot == 0) {
    return {};
  }
  return name.substr(dot);
}

[[noreturn]] void fail_at(std::string_view source, std::size_t line, std::string_view what) {
  throw CorpusError(fmt::format("{}:{}: {}", source, line, what));
}

std::string required_string(const json& obj, const char* key, std::string_view source,
                            std::size_t line) {
  auto const it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    fail_at(source, line, fmt::format("missing or non-string field '{}'", key));
  }
  return it->get<std::string>();
}

std::string optional_string(const json& obj, const char* key, std::string_view source,
                            std::size_t line) {
  auto const it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    return {};
  }
  if (!it->is_string()) {
    fail_at(source, line, fmt::format("field '{}' must be a string", key));
  }
  return it->get<std::string>();
}

std::vector<std::string> file_list(const json& obj, std::string_view source, std::size_t line) {
  auto const it = obj.find("files");
  if (it == obj.end() || !it->is_array()) {
    fail_at(source, line, "missing or non-array field 'files'");
  }
  std::vector<std::string> files;
  files.reserve(it->size());
  for (auto const& f : *it) {
    if (!f.is_string()) {
      fail_at(source, line, "non-string entry in 'files'");
    }
    files.push_back(f.get<std::string>());
  }
  return files;
}

Instant timestamp_field(const std::string& text, const char* key, std::string_view source,
                        std::size_t line) {
  try {
    return parse_instant(text);
  } catch (const std::invalid_argument& e) {
    fail_at(source, line, fmt::format("unparseable '{}': {}", key, e.what()));
  }
}

/// Calls `fn(json, line_number)` for every non-blank line.
template <typename Fn>
void for_each_record(std::istream& in, std::string_view source, Fn&& fn) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(),
                    [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      fail_at(source, line, fmt::format("malformed JSON: {}", e.what()));
    }
    if (!record.is_object()) {
      fail_at(source, line, "record is not a JSON object");
    }
    fn(record, line);
  }
}

std::vector<std::string> code_files_only(const std::vector<std::string>& files,
                                         const CorpusConfig& config) {
  std::vector<std::string> kept;
  for (auto const& f : files) {
    if (is_code_file(f, config)) {
      kept.push_back(f);
    }
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  return kept;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_jsonl_line(const RawCommit& c) {
  json j = json::object();
  j["id"] = c.id;
  j["author_name"] = c.author_name;
  j["author_email"] = c.author_email;
  j["timestamp"] = c.timestamp;
  j["files"] = c.files;
  return j.dump();
}

std::string to_jsonl_line(const RawPullRequest& pr) {
  json j = json::object();
  j["id"] = pr.id;
  j["author_name"] = pr.author_name;
  j["author_email"] = pr.author_email;
  j["created_at"] = pr.created_at;
  j["merged_at"] = pr.merged_at ? json(*pr.merged_at) : json(nullptr);
  j["files"] = pr.files;
  json reviews = json::array();
  for (auto const& r : pr.reviews) {
    json rj = json::object();
    rj["reviewer_name"] = r.reviewer_name;
    rj["reviewer_email"] = r.reviewer_email;
    rj["timestamp"] = r.timestamp;
    if (r.file) {
      rj["file"] = *r.file;
    }
    reviews.push_back(std::move(rj));
  }
  j["reviews"] = std::move(reviews);
  return j.dump();
}

// ---------------------------------------------------------------------------

DeveloperId unify_identity(std::string_view raw_name, std::string_view raw_email,
                           const AliasTable& aliases, const IdentityHook& hook) {
  std::string const email = lower_trim(raw_email);
  std::string const name = lower_trim(raw_name);
  if (email.empty() && name.empty()) {
    throw CorpusError("cannot unify identity: both name and email are empty");
  }

  std::string key = name;
  if (!email.empty()) {
    auto const at = email.find('@');
    key = lower_trim(email.substr(0, at));
    if (key.empty()) {
      key = name.empty() ? email : name;
    }
  }

  for (auto const& probe : {email, key, name}) {
    if (probe.empty()) {
      continue;
    }
    if (auto const it = aliases.find(probe); it != aliases.end()) {
      return DeveloperId{lower_trim(it->second)};
    }
  }
  if (hook) {
    if (auto matched = hook(key); matched && !matched->empty()) {
      return DeveloperId{lower_trim(*matched)};
    }
  }
  return DeveloperId{key};
}

AliasTable parse_alias_table(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw CorpusError(fmt::format("alias table: malformed JSON: {}", e.what()));
  }
  if (!j.is_object()) {
    throw CorpusError("alias table must be a JSON object");
  }
  AliasTable table;
  for (auto const& [raw, canonical] : j.items()) {
    if (!canonical.is_string()) {
      throw CorpusError(fmt::format("alias table: value for '{}' is not a string", raw));
    }
    table[lower_trim(raw)] = canonical.get<std::string>();
  }
  return table;
}

AliasTable load_alias_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw CorpusError(fmt::format("cannot open alias table '{}'", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_alias_table(buffer.str());
}

std::set<std::string> CorpusConfig::default_code_extensions() {
  return {".c",  ".cc", ".cpp", ".cs", ".cxx",   ".go", ".h",  ".hpp",
          ".java", ".js", ".kt", ".py", ".rs", ".scala", ".swift", ".ts"};
}

void CorpusConfig::validate() const {
  if (mega_commit_threshold < 1) {
    throw CorpusError("mega_commit_threshold must be >= 1");
  }
  if (code_extensions.empty()) {
    throw CorpusError("code_extensions must not be empty");
  }
  if (!quarter_anchor.ok() || quarter_anchor.day() > std::chrono::day{28}) {
    throw CorpusError("quarter_anchor must be a valid date with day-of-month <= 28");
  }
}

bool is_bot(const DeveloperId& dev, const CorpusConfig& config) {
  if (config.bot_names.contains(dev)) {
    return true;
  }
  std::string_view key = dev.key;
  if (key.ends_with("[bot]")) {
    return true;
  }
  auto const sep = key.find_last_of("-_. ");
  auto const last_token = sep == std::string_view::npos ? key : key.substr(sep + 1);
  return last_token.ends_with("bot");
}

bool is_code_file(std::string_view path, const CorpusConfig& config) {
  auto const ext = lower_trim(extension_of(path));
  return !ext.empty() && config.code_extensions.contains(ext);
}

std::vector<DeveloperId> PullRequest::reviewers() const {
  std::vector<DeveloperId> out;
  out.reserve(review_events.size());
  for (auto const& e : review_events) {
    out.push_back(e.reviewer);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool ProvenanceSummary::balanced() const {
  return commits_input == commits_retained + commits_bot + commits_mega + commits_non_code &&
         prs_input == prs_retained + prs_unmerged + prs_bot + prs_non_code &&
         reviews_input == reviews_retained + reviews_dropped_with_pr + reviews_post_merge +
                              reviews_bot + reviews_self + reviews_non_code;
}

std::pair<Instant, Instant> CleanCorpus::time_span() const {
  if (empty()) {
    throw CorpusError("corpus is empty");
  }
  Instant lo = Instant::max();
  Instant hi = Instant::min();
  auto const see = [&](Instant t) {
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  };
  for (auto const& c : commits) {
    see(c.timestamp);
  }
  for (auto const& pr : pull_requests) {
    see(pr.created_at);
    see(pr.merged_at);
    for (auto const& e : pr.review_events) {
      see(e.timestamp);
    }
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------

CleanCorpus clean_corpus(std::istream& commits_in, std::istream& prs_in,
                         const CorpusConfig& config, std::string_view commit_source,
                         std::string_view pr_source) {
  config.validate();
  CleanCorpus corpus;
  ProvenanceSummary& s = corpus.summary;

  auto const identity = [&](const std::string& name, const std::string& email,
                            std::string_view source, std::size_t line) {
    try {
      return unify_identity(name, email, config.aliases, config.identity_hook);
    } catch (const CorpusError& e) {
      fail_at(source, line, e.what());
    }
  };

  std::unordered_set<std::string> commit_ids;
  for_each_record(commits_in, commit_source, [&](const json& rec, std::size_t line) {
    ++s.commits_input;
    std::string id = required_string(rec, "id", commit_source, line);
    if (!commit_ids.insert(id).second) {
      fail_at(commit_source, line, fmt::format("duplicate commit id '{}'", id));
    }
    auto const author = identity(optional_string(rec, "author_name", commit_source, line),
                                 optional_string(rec, "author_email", commit_source, line),
                                 commit_source, line);
    auto const ts = timestamp_field(required_string(rec, "timestamp", commit_source, line),
                                    "timestamp", commit_source, line);
    auto const raw_files = file_list(rec, commit_source, line);

    if (is_bot(author, config)) {
      ++s.commits_bot;
      return;
    }
    if (raw_files.size() >= config.mega_commit_threshold) {
      ++s.commits_mega;
      return;
    }
    auto files = code_files_only(raw_files, config);
    if (files.empty()) {
      ++s.commits_non_code;
      return;
    }
    ++s.commits_retained;
    corpus.commits.push_back(Commit{std::move(id), author, ts, std::move(files)});
  });

  std::unordered_set<std::string> pr_ids;
  for_each_record(prs_in, pr_source, [&](const json& rec, std::size_t line) {
    ++s.prs_input;
    std::string id = required_string(rec, "id", pr_source, line);
    if (!pr_ids.insert(id).second) {
      fail_at(pr_source, line, fmt::format("duplicate pull request id '{}'", id));
    }
    auto const author = identity(optional_string(rec, "author_name", pr_source, line),
                                 optional_string(rec, "author_email", pr_source, line),
                                 pr_source, line);
    auto const created = timestamp_field(required_string(rec, "created_at", pr_source, line),
                                         "created_at", pr_source, line);
    auto const merged_text = optional_string(rec, "merged_at", pr_source, line);
    std::optional<Instant> merged;
    if (!merged_text.empty()) {
      merged = timestamp_field(merged_text, "merged_at", pr_source, line);
      if (*merged < created) {
        fail_at(pr_source, line, "merged_at precedes created_at");
      }
    }
    auto const raw_files = file_list(rec, pr_source, line);
    bool const mega_marker = rec.contains("mega") && rec["mega"].is_boolean() &&
                             rec["mega"].get<bool>();

    std::vector<ReviewEvent> raw_reviews;
    if (auto const it = rec.find("reviews"); it != rec.end() && !it->is_null()) {
      if (!it->is_array()) {
        fail_at(pr_source, line, "field 'reviews' must be an array");
      }
      for (auto const& r : *it) {
        if (!r.is_object()) {
          fail_at(pr_source, line, "review entry is not an object");
        }
        ++s.reviews_input;
        ReviewEvent ev;
        ev.reviewer = identity(optional_string(r, "reviewer_name", pr_source, line),
                               optional_string(r, "reviewer_email", pr_source, line), pr_source,
                               line);
        ev.timestamp = timestamp_field(required_string(r, "timestamp", pr_source, line),
                                       "review timestamp", pr_source, line);
        if (auto file = optional_string(r, "file", pr_source, line); !file.empty()) {
          ev.file = std::move(file);
        }
        raw_reviews.push_back(std::move(ev));
      }
    }

    auto drop_pr = [&](std::size_t& counter) {
      ++counter;
      s.reviews_dropped_with_pr += raw_reviews.size();
    };
    if (!merged) {
      drop_pr(s.prs_unmerged);
      return;
    }
    if (is_bot(author, config)) {
      drop_pr(s.prs_bot);
      return;
    }
    auto files = code_files_only(raw_files, config);
    if (files.empty()) {
      drop_pr(s.prs_non_code);
      return;
    }

    PullRequest pr;
    pr.id = std::move(id);
    pr.author = author;
    pr.created_at = created;
    pr.merged_at = *merged;
    pr.files = std::move(files);
    pr.mega = mega_marker || raw_files.size() >= config.mega_commit_threshold;
    for (auto& ev : raw_reviews) {
      if (ev.timestamp > pr.merged_at) {
        ++s.reviews_post_merge;
      } else if (is_bot(ev.reviewer, config)) {
        ++s.reviews_bot;
      } else if (ev.reviewer == pr.author) {
        ++s.reviews_self;
      } else if (ev.file && !is_code_file(*ev.file, config)) {
        ++s.reviews_non_code;
      } else {
        ++s.reviews_retained;
        pr.review_events.push_back(std::move(ev));
      }
    }
    std::sort(pr.review_events.begin(), pr.review_events.end(),
              [](const ReviewEvent& a, const ReviewEvent& b) {
                return std::tie(a.timestamp, a.reviewer, a.file) <
                       std::tie(b.timestamp, b.reviewer, b.file);
              });
    ++s.prs_retained;
    if (pr.mega) {
      ++s.prs_mega_flagged;
    }
    corpus.pull_requests.push_back(std::move(pr));
  });

  std::sort(corpus.commits.begin(), corpus.commits.end(), [](const Commit& a, const Commit& b) {
    return std::tie(a.timestamp, a.id) < std::tie(b.timestamp, b.id);
  });
  std::sort(corpus.pull_requests.begin(), corpus.pull_requests.end(),
            [](const PullRequest& a, const PullRequest& b) {
              return std::tie(a.merged_at, a.id) < std::tie(b.merged_at, b.id);
            });
  return corpus;
}

CleanCorpus load_corpus(const std::filesystem::path& commit_file,
                        const std::filesystem::path& pr_file, const CorpusConfig& config) {
  std::ifstream commits(commit_file);
  if (!commits) {
    throw CorpusError(fmt::format("cannot open commit file '{}'", commit_file.string()));
  }
  std::ifstream prs(pr_file);
  if (!prs) {
    throw CorpusError(fmt::format("cannot open pull request file '{}'", pr_file.string()));
  }
  return clean_corpus(commits, prs, config, commit_file.string(), pr_file.string());
}

void write_corpus(const CleanCorpus& corpus, std::ostream& commits, std::ostream& pull_requests) {
  for (auto const& c : corpus.commits) {
    RawCommit raw{c.id, c.author.key, "", format_instant(c.timestamp), c.files};
    commits << to_jsonl_line(raw) << '\n';
  }
  for (auto const& pr : corpus.pull_requests) {
    json j = json::parse(to_jsonl_line(RawPullRequest{
        pr.id, pr.author.key, "", format_instant(pr.created_at), format_instant(pr.merged_at),
        pr.files, [&] {
          std::vector<RawReview> reviews;
          for (auto const& e : pr.review_events) {
            reviews.push_back(RawReview{e.reviewer.key, "", format_instant(e.timestamp), e.file});
          }
          return reviews;
        }()}));
    if (pr.mega) {
      j["mega"] = true;
    }
    pull_requests << j.dump() << '\n';
  }
}

std::string serialize(const CleanCorpus& corpus) {
  std::ostringstream commits;
  std::ostringstream prs;
  write_corpus(corpus, commits, prs);
  return commits.str() + prs.str();
}

}  // namespace revsim
