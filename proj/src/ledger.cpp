#include "revsim/ledger.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <tuple>

namespace revsim {

namespace {

using namespace std::chrono;

/// Months since year 0 of the quarter that contains `t`.
int quarter_month(year_month_day anchor, Instant t) {
  year_month_day const date{floor<days>(t)};
  int months = static_cast<int>(date.year()) * 12 + static_cast<int>(unsigned(date.month())) - 1;
  if (date.day() < anchor.day()) {
    --months;
  }
  int const anchor_month = static_cast<int>(unsigned(anchor.month())) - 1;
  int const offset = ((months - anchor_month) % 3 + 3) % 3;
  return months - offset;
}

Instant month_start(year_month_day anchor, int months) {
  int const y = months >= 0 ? months / 12 : (months - 11) / 12;
  int const m = months - y * 12;
  year_month_day const date{year{y}, month{static_cast<unsigned>(m + 1)}, anchor.day()};
  return Instant{sys_days{date}};
}

void insert_sorted(std::vector<Instant>& v, Instant t) {
  v.insert(std::upper_bound(v.begin(), v.end(), t), t);
}

std::size_t count_in(const std::vector<Instant>& v, Instant after, Instant upto) {
  auto const lo = std::upper_bound(v.begin(), v.end(), after);
  auto const hi = std::upper_bound(v.begin(), v.end(), upto);
  return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

template <typename T>
void keep_max(std::optional<T>& slot, T value) {
  if (!slot || *slot < value) {
    slot = value;
  }
}

template <typename T>
void keep_min(std::optional<T>& slot, T value) {
  if (!slot || value < *slot) {
    slot = value;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

QuarterCalendar::QuarterCalendar(year_month_day anchor, Instant first, Instant last) {
  if (!anchor.ok() || anchor.day() > day{28}) {
    throw LedgerError("quarter anchor must be a valid date with day-of-month <= 28");
  }
  if (last < first) {
    throw LedgerError("quarter calendar span is inverted");
  }
  int const first_qm = quarter_month(anchor, first);
  int const last_qm = quarter_month(anchor, last);
  for (int qm = first_qm, i = 0; qm <= last_qm; qm += 3, ++i) {
    quarters_.push_back(Quarter{i, month_start(anchor, qm), month_start(anchor, qm + 3), false});
  }
  quarters_.back().final = true;
}

QuarterCalendar QuarterCalendar::for_corpus(const CleanCorpus& corpus, const CorpusConfig& config) {
  auto const [first, last] = corpus.time_span();
  return QuarterCalendar(config.quarter_anchor, first, last);
}

int QuarterCalendar::index_of(Instant t) const {
  auto const it = std::upper_bound(quarters_.begin(), quarters_.end(), t,
                                   [](Instant value, const Quarter& q) { return value < q.start; });
  if (it == quarters_.begin() || t >= quarters_.back().end) {
    throw LedgerError(fmt::format("instant {} lies outside the quarter calendar", format_instant(t)));
  }
  return std::prev(it)->index;
}

// ---------------------------------------------------------------------------

ContributionEvent commit_event(const Commit& commit) {
  ContributionEvent ev;
  ev.kind = ContributionKind::commit;
  ev.actor = commit.author;
  ev.at = commit.timestamp;
  ev.activity_at = commit.timestamp;
  ev.source_id = commit.id;
  ev.files = commit.files;
  return ev;
}

std::vector<CommentEvent> comments_of(const PullRequest& pr, const DeveloperId& reviewer) {
  std::vector<CommentEvent> out;
  for (auto const& e : pr.review_events) {
    if (e.reviewer == reviewer) {
      out.push_back(CommentEvent{e.timestamp, e.file});
    }
  }
  return out;
}

ContributionEvent review_event(const PullRequest& pr, const DeveloperId& actor,
                               std::vector<CommentEvent> comments) {
  ContributionEvent ev;
  ev.kind = ContributionKind::review;
  ev.actor = actor;
  ev.at = pr.merged_at;
  ev.activity_at = pr.merged_at;
  for (auto const& c : comments) {
    ev.activity_at = std::min(ev.activity_at, c.at);
  }
  ev.source_id = pr.id;
  ev.files = pr.files;
  ev.attributes_knowledge = !pr.mega;
  ev.comments = std::move(comments);
  return ev;
}

bool FileKnowledge::knows_at(Instant t, KnowledgeSource source) const {
  if (first_authored && *first_authored <= t) {
    return true;
  }
  return source == KnowledgeSource::authors_and_reviewers && first_reviewed && *first_reviewed <= t;
}

std::string parent_directory(std::string_view path) {
  auto const slash = path.find_last_of('/');
  return slash == std::string_view::npos ? std::string{} : std::string{path.substr(0, slash)};
}

// ---------------------------------------------------------------------------

void KnowledgeLedger::apply(const ContributionEvent& event) {
  if (event.at < clock_) {
    throw LedgerError(fmt::format("out-of-order event '{}' at {} (ledger clock {})",
                                  event.source_id, format_instant(event.at),
                                  format_instant(clock_)));
  }
  clock_ = event.at;

  auto& activity = activity_[event.actor];
  insert_sorted(event.kind == ContributionKind::commit ? activity.commits : activity.reviews,
                event.activity_at);

  if (!event.attributes_knowledge) {
    return;
  }

  bool const is_commit = event.kind == ContributionKind::commit;
  std::set<std::string> dirs;
  for (auto const& path : event.files) {
    auto& record = files_[path];
    keep_min(record.first_knowledge, event.at);
    auto& k = record.devs[event.actor];
    if (is_commit) {
      keep_min(k.first_authored, event.at);
      ++k.commits;
      keep_max(k.last_commit, event.activity_at);
    } else {
      keep_min(k.first_reviewed, event.at);
      ++k.reviews;
      keep_max(k.last_review, event.activity_at);
    }
    k.last_touch = std::max(k.last_touch, event.at);
    dirs.insert(parent_directory(path));
  }
  for (auto const& dir : dirs) {
    auto& d = directories_[dir][event.actor];
    if (is_commit) {
      ++d.changes;
      keep_max(d.last_change, event.activity_at);
    } else {
      ++d.reviews;
      keep_max(d.last_review, event.activity_at);
    }
  }

  auto const record_comment = [&](const std::string& path, Instant at) {
    auto& record = files_[path];
    auto const day = utc_day(at);
    auto& k = record.devs[event.actor];
    ++k.comments;
    k.comment_days.insert(day);
    keep_max(k.last_comment_day, day);
    ++record.total_comments;
    record.comment_days.insert(day);
    keep_max(record.last_comment_day, day);
  };
  for (auto const& c : event.comments) {
    if (c.file) {
      record_comment(*c.file, c.at);
    } else {
      for (auto const& path : event.files) {
        record_comment(path, c.at);
      }
    }
  }
}

const FileRecord* KnowledgeLedger::file(std::string_view path) const {
  auto const it = files_.find(std::string{path});
  return it == files_.end() ? nullptr : &it->second;
}

const std::map<DeveloperId, DirectoryActivity>* KnowledgeLedger::directory(
    std::string_view dir) const {
  auto const it = directories_.find(std::string{dir});
  return it == directories_.end() ? nullptr : &it->second;
}

const DeveloperActivity* KnowledgeLedger::activity(const DeveloperId& dev) const {
  auto const it = activity_.find(dev);
  return it == activity_.end() ? nullptr : &it->second;
}

bool KnowledgeLedger::knows(const DeveloperId& dev, std::string_view path, Instant at,
                            KnowledgeSource source) const {
  auto const* record = file(path);
  if (record == nullptr) {
    return false;
  }
  auto const it = record->devs.find(dev);
  return it != record->devs.end() && it->second.knows_at(at, source);
}

std::vector<DeveloperId> KnowledgeLedger::knowers(std::string_view path, Instant at,
                                                  KnowledgeSource source) const {
  std::vector<DeveloperId> out;
  if (auto const* record = file(path)) {
    for (auto const& [dev, k] : record->devs) {
      if (k.knows_at(at, source)) {
        out.push_back(dev);
      }
    }
  }
  return out;
}

std::vector<std::string> KnowledgeLedger::tracked_files(Instant at) const {
  std::vector<std::string> out;
  for (auto const& [path, record] : files_) {
    if (record.first_knowledge && *record.first_knowledge < at) {
      out.push_back(path);
    }
  }
  return out;
}

void KnowledgeLedger::open_review(const DeveloperId& dev) { ++open_reviews_[dev]; }

void KnowledgeLedger::close_review(const DeveloperId& dev) {
  auto const it = open_reviews_.find(dev);
  if (it == open_reviews_.end() || it->second == 0) {
    throw LedgerError(fmt::format("'{}' holds no open review to close", dev.key));
  }
  if (--it->second == 0) {
    open_reviews_.erase(it);
  }
}

std::size_t KnowledgeLedger::open_reviews(const DeveloperId& dev) const {
  auto const it = open_reviews_.find(dev);
  return it == open_reviews_.end() ? 0 : it->second;
}

std::size_t KnowledgeLedger::total_open_reviews() const {
  std::size_t total = 0;
  for (auto const& [dev, n] : open_reviews_) {
    total += n;
  }
  return total;
}

// ---------------------------------------------------------------------------

ActivityProfile activity_profile(const KnowledgeLedger& ledger, const DeveloperId& dev, Instant at) {
  ActivityProfile profile;
  auto const* activity = ledger.activity(dev);
  if (activity == nullptr) {
    return profile;
  }
  Instant const after = at - 365 * kDay;
  profile.commits_365 = count_in(activity->commits, after, at);
  profile.reviews_365 = count_in(activity->reviews, after, at);

  std::set<std::int64_t> buckets;
  auto const bucket_all = [&](const std::vector<Instant>& v) {
    auto const lo = std::upper_bound(v.begin(), v.end(), after);
    auto const hi = std::upper_bound(v.begin(), v.end(), at);
    for (auto it = lo; it < hi; ++it) {
      auto const age = (at - *it) / (30 * kDay);
      buckets.insert(std::min<std::int64_t>(age, 11));
    }
  };
  bucket_all(activity->commits);
  bucket_all(activity->reviews);
  profile.active_months_365 = static_cast<int>(buckets.size());
  return profile;
}

// ---------------------------------------------------------------------------

ActivityTimeline ActivityTimeline::from_corpus(const CleanCorpus& corpus) {
  ActivityTimeline timeline;
  for (auto const& c : corpus.commits) {
    timeline.add(c.author, c.timestamp);
  }
  for (auto const& pr : corpus.pull_requests) {
    for (auto const& e : pr.review_events) {
      timeline.add(e.reviewer, e.timestamp);
    }
  }
  return timeline;
}

void ActivityTimeline::add(const DeveloperId& dev, Instant t) { insert_sorted(instants_[dev], t); }

bool ActivityTimeline::active_between(const DeveloperId& dev, Instant from, Instant to) const {
  auto const it = instants_.find(dev);
  if (it == instants_.end()) {
    return false;
  }
  auto const first = std::lower_bound(it->second.begin(), it->second.end(), from);
  return first != it->second.end() && *first < to;
}

bool ActivityTimeline::present_at(const DeveloperId& dev, Instant t) const {
  auto const it = instants_.find(dev);
  return it != instants_.end() && it->second.front() <= t && t <= it->second.back();
}

bool ActivityTimeline::is_leaver(const DeveloperId& dev, const QuarterCalendar& calendar,
                                 int quarter) const {
  if (!calendar.has_lookahead(quarter)) {
    throw LedgerError(fmt::format("quarter {} lacks {} quarters of lookahead", quarter,
                                  QuarterCalendar::kLeaverLookahead));
  }
  auto const& next = calendar[quarter + 1];
  auto const& horizon = calendar[quarter + QuarterCalendar::kLeaverLookahead];
  return !active_between(dev, next.start, horizon.end);
}

std::vector<DeveloperId> active_devs(const KnowledgeLedger& ledger, const QuarterCalendar& calendar,
                                     int quarter, std::string_view file,
                                     const ActivityTimeline& timeline, KnowledgeSource source) {
  if (!calendar.has_lookahead(quarter)) {
    throw LedgerError(fmt::format("quarter {} lacks {} quarters of lookahead", quarter,
                                  QuarterCalendar::kLeaverLookahead));
  }
  // Knowledge acquired strictly before the quarter's exclusive end.
  Instant const end = calendar[quarter].end - std::chrono::seconds{1};
  std::vector<DeveloperId> out;
  for (auto& dev : ledger.knowers(file, end, source)) {
    if (!timeline.is_leaver(dev, calendar, quarter)) {
      out.push_back(std::move(dev));
    }
  }
  return out;
}

KnowledgeLedger build_actual_ledger(const CleanCorpus& corpus) {
  std::vector<ContributionEvent> events;
  for (auto const& c : corpus.commits) {
    events.push_back(commit_event(c));
  }
  for (auto const& pr : corpus.pull_requests) {
    for (auto const& reviewer : pr.reviewers()) {
      events.push_back(review_event(pr, reviewer, comments_of(pr, reviewer)));
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const ContributionEvent& a, const ContributionEvent& b) {
                     return std::tie(a.at, a.kind, a.source_id) < std::tie(b.at, b.kind, b.source_id);
                   });
  KnowledgeLedger ledger;
  for (auto const& ev : events) {
    ledger.apply(ev);
  }
  return ledger;
}

}  // namespace revsim
