#include "revsim/recommenders.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace revsim {

namespace {

const CorpusConfig& default_bot_rules() {
  static const CorpusConfig config;
  return config;
}

bool has_event_by(const DeveloperActivity& activity, Instant at) {
  return (!activity.commits.empty() && activity.commits.front() <= at) ||
         (!activity.reviews.empty() && activity.reviews.front() <= at);
}

Recommendation finish(std::vector<CandidateScore> scores, std::optional<std::string> branch = {}) {
  rank_candidates(scores);
  return Recommendation{std::move(scores), std::move(branch)};
}

/// Share-of-total scoring shared by AuthorshipRec and RevOwnRec.
template <typename CountFn>
Recommendation ownership_share(const ReviewContext& ctx, CountFn count, const char* label) {
  std::map<DeveloperId, double> counts;
  for (auto const& path : ctx.pr.files) {
    auto const* record = ctx.snapshot.file(path);
    if (record == nullptr) {
      continue;
    }
    for (auto const& [dev, k] : record->devs) {
      if (auto const n = count(k); n > 0 && ctx.is_candidate(dev)) {
        counts[dev] += static_cast<double>(n);
      }
    }
  }
  double total = 0.0;
  for (auto const& [dev, n] : counts) {
    total += n;
  }
  std::vector<CandidateScore> scores;
  if (total <= 0.0) {
    return finish(std::move(scores));
  }
  for (auto const& [dev, n] : counts) {
    scores.push_back(CandidateScore{dev, n / total, {{label, n}, {"total", total}}});
  }
  return finish(std::move(scores));
}

double recency_weight(std::int64_t days, RecencyRule rule) {
  days = std::max<std::int64_t>(days, 0);
  switch (rule) {
    case RecencyRule::plus_one_day:
      return 1.0 / static_cast<double>(days + 1);
    case RecencyRule::raw_exclude_same_day:
      return days == 0 ? 0.0 : 1.0 / static_cast<double>(days);
  }
  return 0.0;
}

/// Candidates knowing at least one PR file, with their knowledge fraction.
std::vector<std::pair<DeveloperId, double>> knowledgeable_candidates(const ReviewContext& ctx) {
  std::map<DeveloperId, std::size_t> known;
  for (auto const& path : ctx.pr.files) {
    auto const* record = ctx.snapshot.file(path);
    if (record == nullptr) {
      continue;
    }
    for (auto const& [dev, k] : record->devs) {
      if (k.knows_at(ctx.at, KnowledgeSource::authors_and_reviewers) && ctx.is_candidate(dev)) {
        ++known[dev];
      }
    }
  }
  double const n_files = static_cast<double>(ctx.pr.files.size());
  std::vector<std::pair<DeveloperId, double>> out;
  for (auto const& [dev, n] : known) {
    out.emplace_back(dev, static_cast<double>(n) / n_files);
  }
  return out;
}

}  // namespace

void RecommenderParams::validate() const {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument(fmt::format("theta must lie in [0, 1], got {}", theta));
  }
  if (k < 0) {
    throw std::invalid_argument(fmt::format("k must be >= 0, got {}", k));
  }
  for (double c : {c1, c2, c3, c4}) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("coefficients C1..C4 must be positive and finite");
    }
  }
}

std::vector<DeveloperId> Recommendation::order() const {
  std::vector<DeveloperId> out;
  out.reserve(ranked.size());
  for (auto const& c : ranked) {
    out.push_back(c.dev);
  }
  return out;
}

bool ReviewContext::is_candidate(const DeveloperId& dev) const {
  return std::binary_search(candidates.begin(), candidates.end(), dev);
}

ReviewContext make_review_context(const PullRequest& pr, const KnowledgeLedger& snapshot) {
  return make_review_context(pr, snapshot, pr.created_at);
}

ReviewContext make_review_context(const PullRequest& pr, const KnowledgeLedger& snapshot,
                                  Instant at) {
  std::vector<DeveloperId> candidates;
  for (auto const& [dev, activity] : snapshot.developers()) {
    if (dev != pr.author && !is_bot(dev, default_bot_rules()) && has_event_by(activity, at)) {
      candidates.push_back(dev);
    }
  }
  return ReviewContext{pr, snapshot, at, std::move(candidates)};
}

ReviewContext make_review_context(const PullRequest& pr, const KnowledgeLedger& snapshot,
                                  Instant at, const ActivityTimeline& presence) {
  auto ctx = make_review_context(pr, snapshot, at);
  std::erase_if(ctx.candidates,
                [&](const DeveloperId& dev) { return !presence.present_at(dev, at); });
  return ctx;
}

void rank_candidates(std::vector<CandidateScore>& scores) {
  std::sort(scores.begin(), scores.end(), [](const CandidateScore& a, const CandidateScore& b) {
    if (a.score != b.score) {
      return a.score > b.score;
    }
    return a.dev < b.dev;
  });
}

// ---------------------------------------------------------------------------
// Ownership

Recommendation authorship_rec(const ReviewContext& ctx) {
  return ownership_share(ctx, [](const FileKnowledge& k) { return k.commits; }, "commits");
}

Recommendation rev_own_rec(const ReviewContext& ctx) {
  return ownership_share(ctx, [](const FileKnowledge& k) { return k.reviews; }, "reviews");
}

double xfactor(const DeveloperId& dev, std::string_view file, const KnowledgeLedger& snapshot) {
  auto const* record = snapshot.file(file);
  if (record == nullptr || record->total_comments == 0) {
    return 0.0;
  }
  auto const it = record->devs.find(dev);
  if (it == record->devs.end() || it->second.comments == 0) {
    return 0.0;
  }
  auto const& k = it->second;
  double const comment_share =
      static_cast<double>(k.comments) / static_cast<double>(record->total_comments);
  double const day_share =
      static_cast<double>(k.comment_days.size()) / static_cast<double>(record->comment_days.size());
  auto const gap = std::llabs(*record->last_comment_day - *k.last_comment_day);
  return comment_share + day_share + 1.0 / static_cast<double>(gap + 1);
}

Recommendation chrev_rec(const ReviewContext& ctx) {
  std::map<DeveloperId, double> totals;
  for (auto const& path : ctx.pr.files) {
    auto const* record = ctx.snapshot.file(path);
    if (record == nullptr || record->total_comments == 0) {
      continue;
    }
    for (auto const& [dev, k] : record->devs) {
      if (k.comments > 0 && ctx.is_candidate(dev)) {
        totals[dev] += xfactor(dev, path, ctx.snapshot);
      }
    }
  }
  std::vector<CandidateScore> scores;
  for (auto const& [dev, total] : totals) {
    if (total > 0.0) {
      scores.push_back(CandidateScore{dev, total, {{"xfactor_sum", total}}});
    }
  }
  return finish(std::move(scores));
}

// ---------------------------------------------------------------------------
// Turnover

double reviewer_knows(const DeveloperId& dev, const PullRequest& pr,
                      const KnowledgeLedger& snapshot, Instant at) {
  if (pr.files.empty()) {
    return 0.0;
  }
  std::size_t known = 0;
  for (auto const& path : pr.files) {
    if (snapshot.knows(dev, path, at)) {
      ++known;
    }
  }
  return static_cast<double>(known) / static_cast<double>(pr.files.size());
}

Recommendation learn_rec(const ReviewContext& ctx) {
  std::vector<CandidateScore> scores;
  for (auto const& [dev, knows] : knowledgeable_candidates(ctx)) {
    scores.push_back(CandidateScore{dev, 1.0 - knows, {{"knowledge", knows}}});
  }
  return finish(std::move(scores));
}

Recommendation retention_rec(const ReviewContext& ctx, const RecommenderParams& params) {
  auto const eligible = knowledgeable_candidates(ctx);
  std::vector<CandidateScore> scores;
  if (eligible.empty()) {
    return finish(std::move(scores));
  }
  double project_total = 0.0;
  for (auto const& [dev, activity] : ctx.snapshot.developers()) {
    project_total += static_cast<double>(activity_profile(ctx.snapshot, dev, ctx.at).total());
  }
  for (auto const& [dev, knows] : eligible) {
    auto const profile = activity_profile(ctx.snapshot, dev, ctx.at);
    double const consistency = profile.active_months_365 / 12.0;
    double const contribution =
        project_total > 0.0 ? static_cast<double>(profile.total()) / project_total : 0.0;
    double const score = params.c1 * consistency * params.c2 * contribution;
    scores.push_back(CandidateScore{
        dev, score, {{"consistency", consistency}, {"contribution", contribution}}});
  }
  return finish(std::move(scores));
}

Recommendation turnover_rec(const ReviewContext& ctx, const RecommenderParams& params) {
  auto const learn = learn_rec(ctx);
  auto const retention = retention_rec(ctx, params);
  std::map<DeveloperId, double> retention_by_dev;
  for (auto const& c : retention.ranked) {
    retention_by_dev.emplace(c.dev, c.score);
  }
  std::vector<CandidateScore> scores;
  for (auto const& c : learn.ranked) {
    auto const it = retention_by_dev.find(c.dev);
    if (it == retention_by_dev.end()) {
      continue;
    }
    double const score = params.c1 * c.score * params.c2 * it->second;
    scores.push_back(CandidateScore{c.dev, score, {{"learn", c.score}, {"retention", it->second}}});
  }
  return finish(std::move(scores));
}

std::vector<std::size_t> active_knower_counts(const ReviewContext& ctx) {
  std::map<DeveloperId, bool> recently_active;
  std::vector<std::size_t> counts;
  counts.reserve(ctx.pr.files.size());
  for (auto const& path : ctx.pr.files) {
    std::size_t n = 0;
    for (auto const& dev : ctx.snapshot.knowers(path, ctx.at)) {
      auto [it, inserted] = recently_active.try_emplace(dev, false);
      if (inserted) {
        it->second = activity_profile(ctx.snapshot, dev, ctx.at).total() > 0;
      }
      if (it->second) {
        ++n;
      }
    }
    counts.push_back(n);
  }
  return counts;
}

bool has_files_at_risk(const ReviewContext& ctx, int k) {
  if (k <= 0) {
    return false;
  }
  auto const counts = active_knower_counts(ctx);
  return std::any_of(counts.begin(), counts.end(),
                     [k](std::size_t n) { return n <= static_cast<std::size_t>(k); });
}

Recommendation sofia_rec(const ReviewContext& ctx, const RecommenderParams& params) {
  if (has_files_at_risk(ctx, params.k)) {
    auto rec = turnover_rec(ctx, params);
    rec.branch = "turnover";
    return rec;
  }
  auto rec = chrev_rec(ctx);
  rec.branch = "chrev";
  return rec;
}

// ---------------------------------------------------------------------------
// Workload

double whodo_load(std::size_t open_reviews, double theta) {
  return std::exp(theta * static_cast<double>(open_reviews));
}

Recommendation whodo_rec(const ReviewContext& ctx, const RecommenderParams& params) {
  struct Terms {
    double file_change = 0.0;
    double dir_change = 0.0;
    double file_review = 0.0;
    double dir_review = 0.0;
  };
  std::map<DeveloperId, Terms> terms;
  auto const weight = [&](std::size_t n, const std::optional<Instant>& last) {
    if (n == 0 || !last) {
      return 0.0;
    }
    return static_cast<double>(n) * recency_weight(days_between(*last, ctx.at), params.recency);
  };

  std::set<std::string> dirs;
  for (auto const& path : ctx.pr.files) {
    dirs.insert(parent_directory(path));
    auto const* record = ctx.snapshot.file(path);
    if (record == nullptr) {
      continue;
    }
    for (auto const& [dev, k] : record->devs) {
      if (!ctx.is_candidate(dev)) {
        continue;
      }
      auto& t = terms[dev];
      t.file_change += weight(k.commits, k.last_commit);
      t.file_review += weight(k.reviews, k.last_review);
    }
  }
  for (auto const& dir : dirs) {
    auto const* activity = ctx.snapshot.directory(dir);
    if (activity == nullptr) {
      continue;
    }
    for (auto const& [dev, d] : *activity) {
      if (!ctx.is_candidate(dev)) {
        continue;
      }
      auto& t = terms[dev];
      t.dir_change += weight(d.changes, d.last_change);
      t.dir_review += weight(d.reviews, d.last_review);
    }
  }

  std::vector<CandidateScore> scores;
  for (auto const& [dev, t] : terms) {
    double const raw = params.c1 * t.file_change + params.c2 * t.dir_change +
                       params.c3 * t.file_review + params.c4 * t.dir_review;
    if (raw <= 0.0) {
      continue;
    }
    auto const open = ctx.snapshot.open_reviews(dev);
    double const load = whodo_load(open, params.theta);
    scores.push_back(CandidateScore{dev,
                                    raw / load,
                                    {{"file_change", t.file_change},
                                     {"dir_change", t.dir_change},
                                     {"file_review", t.file_review},
                                     {"dir_review", t.dir_review},
                                     {"raw_score", raw},
                                     {"open_reviews", static_cast<double>(open)},
                                     {"load", load}}});
  }
  return finish(std::move(scores));
}

Recommendation sofia_wl_rec(const ReviewContext& ctx, const RecommenderParams& params) {
  if (has_files_at_risk(ctx, params.k)) {
    auto rec = turnover_rec(ctx, params);
    rec.branch = "turnover";
    return rec;
  }
  auto rec = whodo_rec(ctx, params);
  rec.branch = "whodo";
  return rec;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::string_view, 9> kNames = {
    "authorship", "revown", "chrev", "learn", "retention", "turnover", "sofia", "whodo", "sofiawl"};

Recommendation identity_rec(const ReviewContext& ctx, const RecommenderParams&) {
  std::vector<CandidateScore> scores;
  for (auto const& dev : ctx.pr.reviewers()) {
    scores.push_back(CandidateScore{dev, 1.0, {}});
  }
  return finish(std::move(scores));
}

}  // namespace

std::span<const std::string_view> recommender_names() { return kNames; }

bool is_known_recommender(std::string_view name) {
  return name == kIdentityRecommender ||
         std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

Recommender find_recommender(std::string_view name) {
  auto const ignore_params = [](Recommendation (*fn)(const ReviewContext&)) -> Recommender {
    return [fn](const ReviewContext& ctx, const RecommenderParams&) { return fn(ctx); };
  };
  if (name == "authorship") return ignore_params(&authorship_rec);
  if (name == "revown") return ignore_params(&rev_own_rec);
  if (name == "chrev") return ignore_params(&chrev_rec);
  if (name == "learn") return ignore_params(&learn_rec);
  if (name == "retention") return &retention_rec;
  if (name == "turnover") return &turnover_rec;
  if (name == "sofia") return &sofia_rec;
  if (name == "whodo") return &whodo_rec;
  if (name == "sofiawl") return &sofia_wl_rec;
  if (name == kIdentityRecommender) return &identity_rec;
  throw std::invalid_argument(fmt::format("unknown recommender '{}'", name));
}

}  // namespace revsim
