#pragma once

// Fixture builders and brute-force oracles shared by the unit and acceptance
// tests. The oracles deliberately avoid the ledger and metrics code paths they
// are used to check.

#include "revsim/corpus.hpp"
#include "revsim/ledger.hpp"
#include "revsim/time.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace revsim::test {

inline Instant at(const char* text) { return parse_instant(text); }

struct ReviewSpec {
  std::string reviewer;
  std::string timestamp;
  std::optional<std::string> file;
};

/// Builds JSONL input from terse records; people are referred to by key and
/// get "<key>@example.com" as their email.
class CorpusBuilder {
 public:
  CorpusBuilder& commit(std::string id, std::string author, std::string timestamp,
                        std::vector<std::string> files) {
    commits_.push_back(RawCommit{std::move(id), author, email(author), std::move(timestamp),
                                 std::move(files)});
    return *this;
  }

  CorpusBuilder& pr(std::string id, std::string author, std::string created,
                    std::optional<std::string> merged, std::vector<std::string> files,
                    std::vector<ReviewSpec> reviews = {}) {
    RawPullRequest p{std::move(id), author, email(author), std::move(created), std::move(merged),
                     std::move(files), {}};
    for (auto& r : reviews) {
      p.reviews.push_back(RawReview{r.reviewer, email(r.reviewer), r.timestamp, r.file});
    }
    prs_.push_back(std::move(p));
    return *this;
  }

  std::string commits_jsonl() const {
    std::string out;
    for (auto const& c : commits_) out += to_jsonl_line(c) + "\n";
    return out;
  }

  std::string prs_jsonl() const {
    std::string out;
    for (auto const& p : prs_) out += to_jsonl_line(p) + "\n";
    return out;
  }

  CleanCorpus build(const CorpusConfig& config = {}) const {
    std::istringstream c(commits_jsonl());
    std::istringstream p(prs_jsonl());
    return clean_corpus(c, p, config);
  }

 private:
  static std::string email(const std::string& key) { return key + "@example.com"; }

  std::vector<RawCommit> commits_;
  std::vector<RawPullRequest> prs_;
};

/// A PR under review that is not part of any corpus.
inline PullRequest pending_pr(std::string id, std::string author, Instant created,
                              std::vector<std::string> files) {
  PullRequest pr;
  pr.id = std::move(id);
  pr.author = DeveloperId{std::move(author)};
  pr.created_at = created;
  pr.merged_at = created + std::chrono::hours{1};
  pr.files = std::move(files);
  return pr;
}

// ---------------------------------------------------------------------------
// Oracles

/// Gini from the ascending-rank formula: 2 sum(i x_i) / (n sum x) - (n + 1) / n.
inline std::optional<double> gini_by_rank(std::vector<double> counts) {
  double const total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (counts.empty() || total <= 0.0) return std::nullopt;
  std::sort(counts.begin(), counts.end());
  double weighted = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    weighted += static_cast<double>(i + 1) * counts[i];
  }
  double const n = static_cast<double>(counts.size());
  return 2.0 * weighted / (n * total) - (n + 1.0) / n;
}

inline double spearman_against_index(const std::vector<double>& y) {
  auto const n = y.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && y[order[j + 1]] == y[order[i]]) ++j;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = static_cast<double>(i + j) / 2.0 + 1.0;
    i = j + 1;
  }
  double const mean = (static_cast<double>(n) + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double const dx = static_cast<double>(i + 1) - mean;
    double const dy = rank[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return syy == 0.0 ? 0.0 : sxy / std::sqrt(sxx * syy);
}

/// Every contribution instant of every developer, straight from the corpus.
inline std::map<DeveloperId, std::vector<Instant>> contribution_instants(const CleanCorpus& corpus) {
  std::map<DeveloperId, std::vector<Instant>> out;
  for (auto const& c : corpus.commits) out[c.author].push_back(c.timestamp);
  for (auto const& pr : corpus.pull_requests) {
    for (auto const& e : pr.review_events) out[e.reviewer].push_back(e.timestamp);
  }
  return out;
}

/// Who knows each file strictly before `end`, by a scan of the raw events.
inline std::map<std::string, std::set<DeveloperId>> knowers_before(const CleanCorpus& corpus,
                                                                  Instant end, bool reviewers) {
  std::map<std::string, std::set<DeveloperId>> out;
  for (auto const& c : corpus.commits) {
    if (c.timestamp >= end) continue;
    for (auto const& f : c.files) out[f].insert(c.author);
  }
  for (auto const& pr : corpus.pull_requests) {
    if (pr.mega || pr.merged_at >= end) continue;
    std::set<DeveloperId> revs;
    for (auto const& e : pr.review_events) revs.insert(e.reviewer);
    for (auto const& f : pr.files) {
      auto& set = out[f];
      if (reviewers) set.insert(revs.begin(), revs.end());
    }
  }
  return out;
}

struct BruteFar {
  std::size_t abandoned = 0;
  std::size_t hoarded = 0;
  std::size_t tracked = 0;
};

/// Files at risk at the end of quarter `q`, computed per file from the raw
/// events: a knower is active when they contribute anywhere in the four
/// following quarters.
inline BruteFar brute_far(const CleanCorpus& corpus, const QuarterCalendar& calendar, int q,
                          bool reviewers) {
  auto const instants = contribution_instants(corpus);
  Instant const from = calendar[q + 1].start;
  Instant const to = calendar[q + 4].end;
  auto const active = [&](const DeveloperId& dev) {
    auto const it = instants.find(dev);
    if (it == instants.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](Instant t) { return t >= from && t < to; });
  };
  BruteFar out;
  // A file reviewed only before `end` under authors-only still counts as tracked.
  auto const tracked = knowers_before(corpus, calendar[q].end, true);
  auto const knowers = knowers_before(corpus, calendar[q].end, reviewers);
  for (auto const& [file, all] : tracked) {
    if (all.empty()) continue;
    ++out.tracked;
    std::size_t n = 0;
    if (auto const it = knowers.find(file); it != knowers.end()) {
      for (auto const& dev : it->second) n += active(dev) ? 1 : 0;
    }
    if (n == 0) ++out.abandoned;
    if (n == 1) ++out.hoarded;
  }
  return out;
}

}  // namespace revsim::test
