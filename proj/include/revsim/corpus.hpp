#pragma once

#include "revsim/time.hpp"

#include <chrono>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace revsim {

/// Canonical identity key for one person (lowercase, trimmed).
struct DeveloperId {
  std::string key;

  auto operator<=>(const DeveloperId&) const = default;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Raw records, exactly as they appear in the JSONL exports.

struct RawReview {
  std::string reviewer_name;
  std::string reviewer_email;
  std::string timestamp;
  std::optional<std::string> file;
};

struct RawCommit {
  std::string id;
  std::string author_name;
  std::string author_email;
  std::string timestamp;
  std::vector<std::string> files;
};

struct RawPullRequest {
  std::string id;
  std::string author_name;
  std::string author_email;
  std::string created_at;
  std::optional<std::string> merged_at;
  std::vector<std::string> files;
  std::vector<RawReview> reviews;
};

std::string to_jsonl_line(const RawCommit& c);
std::string to_jsonl_line(const RawPullRequest& pr);

// ---------------------------------------------------------------------------
// Identity unification

/// Raw key (lowercased email, email local part, or name) to canonical key.
using AliasTable = std::map<std::string, std::string>;

/// Optional fuzzy matcher consulted after the alias table. Receives the
/// default normalized key and may return a replacement. The default hook is
/// empty (exact normalized-key matching only).
using IdentityHook = std::function<std::optional<std::string>(std::string_view key)>;

/// Maps a raw (name, email) pair to its canonical DeveloperId.
///
/// The default key is the lowercased, trimmed local part of the email, or the
/// lowercased trimmed name when the email is empty. Alias entries win over the
/// default; they are looked up by full lowercased email, then by the default
/// key, then by lowercased name. Throws CorpusError when both inputs are blank.
DeveloperId unify_identity(std::string_view raw_name, std::string_view raw_email,
                           const AliasTable& aliases, const IdentityHook& hook = {});

AliasTable load_alias_table(const std::filesystem::path& path);
AliasTable parse_alias_table(std::string_view json_text);

// ---------------------------------------------------------------------------
// Clean corpus

struct Commit {
  std::string id;
  DeveloperId author;
  Instant timestamp;
  std::vector<std::string> files;
};

struct ReviewEvent {
  DeveloperId reviewer;
  Instant timestamp;
  /// Absent for PR-scoped events (approvals, change requests).
  std::optional<std::string> file;
};

struct PullRequest {
  std::string id;
  DeveloperId author;
  Instant created_at;
  Instant merged_at;
  std::vector<std::string> files;
  std::vector<ReviewEvent> review_events;
  /// Changed-file count reached the mega threshold: retained, attributes no knowledge.
  bool mega = false;

  /// Distinct reviewers, sorted by key.
  std::vector<DeveloperId> reviewers() const;
};

struct CorpusConfig {
  std::size_t mega_commit_threshold = 100;
  std::set<std::string> code_extensions = default_code_extensions();
  std::set<DeveloperId> bot_names;
  /// Quarter boundaries fall on this month and day (every three months).
  std::chrono::year_month_day quarter_anchor{std::chrono::year{1970}, std::chrono::January,
                                             std::chrono::day{1}};
  AliasTable aliases;
  IdentityHook identity_hook;

  static std::set<std::string> default_code_extensions();

  /// Throws CorpusError if an invariant is violated.
  void validate() const;
};

bool is_bot(const DeveloperId& dev, const CorpusConfig& config);
bool is_code_file(std::string_view path, const CorpusConfig& config);

/// Where every raw input record went. For each record kind,
/// input == retained + sum of excluded categories.
struct ProvenanceSummary {
  std::size_t commits_input = 0;
  std::size_t commits_retained = 0;
  std::size_t commits_bot = 0;
  std::size_t commits_mega = 0;
  std::size_t commits_non_code = 0;

  std::size_t prs_input = 0;
  std::size_t prs_retained = 0;
  std::size_t prs_unmerged = 0;
  std::size_t prs_bot = 0;
  std::size_t prs_non_code = 0;
  /// Informational: retained PRs flagged mega.
  std::size_t prs_mega_flagged = 0;

  std::size_t reviews_input = 0;
  std::size_t reviews_retained = 0;
  std::size_t reviews_dropped_with_pr = 0;
  std::size_t reviews_post_merge = 0;
  std::size_t reviews_bot = 0;
  std::size_t reviews_self = 0;
  std::size_t reviews_non_code = 0;

  bool balanced() const;
};

struct CleanCorpus {
  /// Sorted by (timestamp, id).
  std::vector<Commit> commits;
  /// Sorted by (merged_at, id).
  std::vector<PullRequest> pull_requests;
  ProvenanceSummary summary;

  bool empty() const { return commits.empty() && pull_requests.empty(); }
  /// Earliest and latest instant of any retained event.
  std::pair<Instant, Instant> time_span() const;
};

/// Parses both JSONL streams and applies identity unification and the
/// exclusion rules. Errors name the source and 1-based line number.
CleanCorpus clean_corpus(std::istream& commits, std::istream& pull_requests,
                         const CorpusConfig& config, std::string_view commit_source = "commits",
                         std::string_view pr_source = "prs");

CleanCorpus load_corpus(const std::filesystem::path& commit_file,
                        const std::filesystem::path& pr_file, const CorpusConfig& config);

/// Canonical JSONL serialization (commits, then PRs) in the input schema,
/// using canonical keys as names. Re-parseable by clean_corpus.
void write_corpus(const CleanCorpus& corpus, std::ostream& commits, std::ostream& pull_requests);
std::string serialize(const CleanCorpus& corpus);

}  // namespace revsim
