#pragma once

#include "revsim/corpus.hpp"
#include "revsim/ledger.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace revsim {

/// How WhoDo turns "days since" into a recency weight.
enum class RecencyRule {
  /// 1 / (days + 1); same-day activity weighs 1.
  plus_one_day,
  /// 1 / days; same-day activity contributes nothing.
  raw_exclude_same_day,
};

struct RecommenderParams {
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  double c4 = 1.0;
  /// WhoDo load-balancing strength, in [0, 1].
  double theta = 0.5;
  /// Sofia/SofiaWL: a file with <= k active knowers is at risk. 0 disables the
  /// turnover branch entirely.
  int k = 2;
  RecencyRule recency = RecencyRule::plus_one_day;

  /// Throws std::invalid_argument.
  void validate() const;
};

struct CandidateScore {
  DeveloperId dev;
  double score = 0.0;
  std::map<std::string, double> breakdown;
};

struct Recommendation {
  /// Score descending, ties by ascending key.
  std::vector<CandidateScore> ranked;
  /// Which delegate produced the list (Sofia, SofiaWL).
  std::optional<std::string> branch;

  std::vector<DeveloperId> order() const;
};

/// A pull request at the moment it is opened, and the ledger as of then.
struct ReviewContext {
  const PullRequest& pr;
  const KnowledgeLedger& snapshot;
  Instant at;
  /// Sorted. Excludes the author, bots, and anyone without a prior event.
  std::vector<DeveloperId> candidates;

  bool is_candidate(const DeveloperId& dev) const;
};

ReviewContext make_review_context(const PullRequest& pr, const KnowledgeLedger& snapshot);
ReviewContext make_review_context(const PullRequest& pr, const KnowledgeLedger& snapshot,
                                  Instant at);
/// Additionally drops developers not present in the project at `at`, so a
/// replay never hands a review to someone who has already left.
ReviewContext make_review_context(const PullRequest& pr, const KnowledgeLedger& snapshot,
                                  Instant at, const ActivityTimeline& presence);

/// Sorts by score descending, then key ascending.
void rank_candidates(std::vector<CandidateScore>& scores);

// Ownership
Recommendation authorship_rec(const ReviewContext& ctx);
Recommendation rev_own_rec(const ReviewContext& ctx);
/// cHRev expertise of `dev` on `file`: comment share + work-day share + recency.
double xfactor(const DeveloperId& dev, std::string_view file, const KnowledgeLedger& snapshot);
Recommendation chrev_rec(const ReviewContext& ctx);

// Turnover
/// Fraction of the PR's files `dev` authored or reviewed before `at`.
double reviewer_knows(const DeveloperId& dev, const PullRequest& pr,
                      const KnowledgeLedger& snapshot, Instant at);
Recommendation learn_rec(const ReviewContext& ctx);
Recommendation retention_rec(const ReviewContext& ctx, const RecommenderParams& params);
Recommendation turnover_rec(const ReviewContext& ctx, const RecommenderParams& params);
Recommendation sofia_rec(const ReviewContext& ctx, const RecommenderParams& params);

// Workload
/// e^(theta * open reviews).
double whodo_load(std::size_t open_reviews, double theta);
Recommendation whodo_rec(const ReviewContext& ctx, const RecommenderParams& params);
Recommendation sofia_wl_rec(const ReviewContext& ctx, const RecommenderParams& params);

/// Number of knowers of each PR file who contributed within the last 365 days.
std::vector<std::size_t> active_knower_counts(const ReviewContext& ctx);
/// True when the turnover branch fires for Sofia/SofiaWL.
bool has_files_at_risk(const ReviewContext& ctx, int k);

// ---------------------------------------------------------------------------
// Registry

using Recommender = std::function<Recommendation(const ReviewContext&, const RecommenderParams&)>;

/// The nine scoring functions, keyed "authorship", "revown", "chrev", "learn",
/// "retention", "turnover", "sofia", "whodo", "sofiawl".
std::span<const std::string_view> recommender_names();

/// Test double: recommends exactly the PR's actual reviewers.
inline constexpr std::string_view kIdentityRecommender = "identity";

bool is_known_recommender(std::string_view name);

/// Throws std::invalid_argument for unknown names. Accepts the identity double.
Recommender find_recommender(std::string_view name);

}  // namespace revsim
