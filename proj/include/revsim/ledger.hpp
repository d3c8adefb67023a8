#pragma once

#include "revsim/corpus.hpp"
#include "revsim/time.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace revsim {

class LedgerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Quarters

struct Quarter {
  int index = 0;
  Instant start;
  /// Exclusive.
  Instant end;
  /// The last quarter of the corpus is partial and never analyzed.
  bool final = false;
};

/// Calendar quarters (three-month steps aligned to an anchor date) covering a
/// time span. Index 0 is the quarter containing the first instant.
class QuarterCalendar {
 public:
  /// Quarters of lookahead needed before a developer can be called a leaver.
  static constexpr int kLeaverLookahead = 4;

  QuarterCalendar(std::chrono::year_month_day anchor, Instant first, Instant last);

  static QuarterCalendar for_corpus(const CleanCorpus& corpus, const CorpusConfig& config);

  int size() const { return static_cast<int>(quarters_.size()); }
  const Quarter& operator[](int index) const { return quarters_.at(index); }
  const std::vector<Quarter>& quarters() const { return quarters_; }

  /// Throws LedgerError for instants outside the calendar.
  int index_of(Instant t) const;

  bool has_lookahead(int index, int quarters = kLeaverLookahead) const {
    return index >= 0 && index + quarters < size();
  }

 private:
  std::vector<Quarter> quarters_;
};

// ---------------------------------------------------------------------------
// Events

enum class ContributionKind { commit, review };

enum class KnowledgeSource { authors_only, authors_and_reviewers };

struct CommentEvent {
  Instant at;
  /// Absent: PR-scoped, counts once for every file of the PR.
  std::optional<std::string> file;
};

/// One developer's contribution: a commit, or one reviewer's participation in a merged PR.
struct ContributionEvent {
  ContributionKind kind = ContributionKind::commit;
  DeveloperId actor;
  /// Replay instant: commit time, or the PR's merge time for reviews.
  Instant at;
  /// Instant recorded on the actor's activity timeline.
  Instant activity_at;
  std::string source_id;
  std::vector<std::string> files;
  /// False for mega changes.
  bool attributes_knowledge = true;
  std::vector<CommentEvent> comments;
};

ContributionEvent commit_event(const Commit& commit);

/// The contribution `actor` makes to `pr` by carrying `comments` (the review
/// events of whichever actual reviewer the actor stands in for).
ContributionEvent review_event(const PullRequest& pr, const DeveloperId& actor,
                               std::vector<CommentEvent> comments);

/// Review events of `reviewer` on `pr`, as comments.
std::vector<CommentEvent> comments_of(const PullRequest& pr, const DeveloperId& reviewer);

// ---------------------------------------------------------------------------
// Ledger state

/// What one developer has done to one file.
struct FileKnowledge {
  std::optional<Instant> first_authored;
  std::optional<Instant> first_reviewed;
  Instant last_touch;

  std::size_t commits = 0;
  std::optional<Instant> last_commit;
  std::size_t reviews = 0;
  std::optional<Instant> last_review;

  std::size_t comments = 0;
  std::set<std::int64_t> comment_days;
  std::optional<std::int64_t> last_comment_day;

  bool knows_at(Instant t, KnowledgeSource source) const;
};

struct FileRecord {
  std::map<DeveloperId, FileKnowledge> devs;
  std::optional<Instant> first_knowledge;

  std::size_t total_comments = 0;
  std::set<std::int64_t> comment_days;
  std::optional<std::int64_t> last_comment_day;
};

/// Per-developer activity in one directory (events touching >= 1 file there).
struct DirectoryActivity {
  std::size_t changes = 0;
  std::optional<Instant> last_change;
  std::size_t reviews = 0;
  std::optional<Instant> last_review;
};

struct DeveloperActivity {
  /// Both sorted ascending.
  std::vector<Instant> commits;
  std::vector<Instant> reviews;
};

struct ActivityProfile {
  std::size_t commits_365 = 0;
  std::size_t reviews_365 = 0;
  int active_months_365 = 0;

  std::size_t total() const { return commits_365 + reviews_365; }
  bool operator==(const ActivityProfile&) const = default;
};

/// Who knows which file, who has been active, and who holds open reviews.
/// Knowledge facts are never removed; each carries the instant it was first
/// acquired, so the view at any earlier instant remains queryable.
class KnowledgeLedger {
 public:
  /// Throws LedgerError if `event.at` precedes the last applied event.
  void apply(const ContributionEvent& event);

  Instant clock() const { return clock_; }

  const std::map<std::string, FileRecord>& files() const { return files_; }
  const FileRecord* file(std::string_view path) const;
  const std::map<DeveloperId, DirectoryActivity>* directory(std::string_view dir) const;
  const std::map<DeveloperId, DeveloperActivity>& developers() const { return activity_; }
  const DeveloperActivity* activity(const DeveloperId& dev) const;

  bool knows(const DeveloperId& dev, std::string_view file, Instant at,
             KnowledgeSource source = KnowledgeSource::authors_and_reviewers) const;
  /// Sorted by key.
  std::vector<DeveloperId> knowers(std::string_view file, Instant at,
                                   KnowledgeSource source = KnowledgeSource::authors_and_reviewers) const;
  /// Files with >= 1 knowledge-attributing event before `at`.
  std::vector<std::string> tracked_files(Instant at) const;

  void open_review(const DeveloperId& dev);
  /// Throws LedgerError if `dev` holds no open review.
  void close_review(const DeveloperId& dev);
  std::size_t open_reviews(const DeveloperId& dev) const;
  std::size_t total_open_reviews() const;

 private:
  Instant clock_ = Instant::min();
  std::map<std::string, FileRecord> files_;
  std::map<std::string, std::map<DeveloperId, DirectoryActivity>> directories_;
  std::map<DeveloperId, DeveloperActivity> activity_;
  std::map<DeveloperId, std::size_t> open_reviews_;
};

/// Immediate parent directory ("" for top-level files).
std::string parent_directory(std::string_view path);

/// Commits and reviews in (at - 365 days, at]; active months are 30-day
/// buckets counted back from `at` (the 12th bucket absorbs the last 5 days).
ActivityProfile activity_profile(const KnowledgeLedger& ledger, const DeveloperId& dev, Instant at);

// ---------------------------------------------------------------------------
// Leavers

/// Every contribution instant of every developer in the actual history.
class ActivityTimeline {
 public:
  static ActivityTimeline from_corpus(const CleanCorpus& corpus);

  void add(const DeveloperId& dev, Instant t);
  /// Any contribution in [from, to).
  bool active_between(const DeveloperId& dev, Instant from, Instant to) const;
  /// Between the developer's first and last contribution, inclusive.
  bool present_at(const DeveloperId& dev, Instant t) const;
  /// No contribution in the four quarters after `quarter`. Throws LedgerError
  /// when the calendar lacks that lookahead.
  bool is_leaver(const DeveloperId& dev, const QuarterCalendar& calendar, int quarter) const;

 private:
  std::map<DeveloperId, std::vector<Instant>> instants_;
};

/// Knowers of `file` at the end of `quarter` who are not leavers there.
std::vector<DeveloperId> active_devs(const KnowledgeLedger& ledger, const QuarterCalendar& calendar,
                                     int quarter, std::string_view file,
                                     const ActivityTimeline& timeline,
                                     KnowledgeSource source = KnowledgeSource::authors_and_reviewers);

/// Replays every commit and actual review in time order.
KnowledgeLedger build_actual_ledger(const CleanCorpus& corpus);

}  // namespace revsim
