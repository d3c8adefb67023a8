#pragma once

#include "revsim/corpus.hpp"
#include "revsim/ledger.hpp"
#include "revsim/recommenders.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace revsim {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

/// SipHash-2-4 of the PR id under key (seed, 0).
std::uint64_t replacement_hash(std::string_view pr_id, std::uint64_t seed);

/// The actual reviewer to replace: reviewers sorted by key, indexed by
/// replacement_hash modulo their count. Empty when the PR has no reviewers.
std::optional<DeveloperId> pick_replaced(const PullRequest& pr, std::uint64_t seed);

struct ReplacementRecord {
  std::string pr_id;
  DeveloperId replaced;
  DeveloperId substitute;
  /// 1-based rank of the best-ranked actual reviewer in the recommendation.
  std::optional<std::size_t> rank_of_actual;
  std::optional<std::string> branch;
  /// The recommender offered no eligible candidate; the original reviewer stayed.
  bool fallback = false;
  Instant recommended_at;
  Instant attributed_at;
};

/// One PR as reviewed in a (real or counterfactual) history.
struct ReviewOutcome {
  std::string pr_id;
  Instant created_at;
  /// Sorted.
  std::vector<DeveloperId> reviewers;
  std::size_t files = 0;
  /// Files known by at least one reviewer when the PR was opened.
  std::size_t known_files = 0;

  double expertise() const {
    return files == 0 ? 0.0 : static_cast<double>(known_files) / static_cast<double>(files);
  }
};

struct SimulationRun {
  std::uint64_t seed = kDefaultSeed;
  /// Empty for the actual history.
  std::string recommender;
  RecommenderParams params;
  KnowledgeLedger ledger;
  std::vector<ReplacementRecord> replacement_log;
  /// Every PR, in the order it was opened.
  std::vector<ReviewOutcome> reviews;

  std::size_t fallback_count() const;
};

enum class ReplayKind { commit, open, merge };

struct ReplayEvent {
  ReplayKind kind = ReplayKind::commit;
  Instant at;
  /// Into corpus.commits or corpus.pull_requests.
  std::size_t index = 0;
};

/// Commits at their timestamp, PR opens at created_at, merges at merged_at.
/// Ties: commits, then opens, then merges; then corpus order.
std::vector<ReplayEvent> replay_schedule(const CleanCorpus& corpus);

/// Replays a corpus event by event. Recommendations happen when a PR opens,
/// against the ledger as of that instant; knowledge is attributed on merge.
class Simulation {
 public:
  /// Replays the actual history without replacement.
  explicit Simulation(const CleanCorpus& corpus);
  Simulation(const CleanCorpus& corpus, std::string recommender_name, Recommender recommender,
             RecommenderParams params, std::uint64_t seed);

  /// Throws SimulationError for an event earlier than the previous one, a
  /// merge of a PR that was never opened, or a PR opened twice.
  void step(const ReplayEvent& event);
  void run();

  const SimulationRun& state() const { return run_; }
  SimulationRun release() && { return std::move(run_); }

 private:
  /// (counterfactual reviewer, actual reviewer whose review events it carries)
  using Assignment = std::vector<std::pair<DeveloperId, DeveloperId>>;

  void open_pull_request(const PullRequest& pr);
  void merge_pull_request(const PullRequest& pr);

  const CleanCorpus& corpus_;
  ActivityTimeline presence_;
  Recommender recommender_;
  SimulationRun run_;
  Instant clock_ = Instant::min();
  std::size_t next_scheduled_ = 0;
  std::map<std::string, Assignment> open_;
  std::vector<ReplayEvent> schedule_;
};

/// Full replay with `recommender` (a registry name or the identity double).
SimulationRun run_simulation(const CleanCorpus& corpus, std::string_view recommender,
                             const RecommenderParams& params, std::uint64_t seed);

SimulationRun replay_actual(const CleanCorpus& corpus);

}  // namespace revsim
