#include "revsim/simulator.hpp"

#include "revsim/siphash.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <tuple>

namespace revsim {

std::uint64_t replacement_hash(std::string_view pr_id, std::uint64_t seed) {
  return siphash24(seed, 0, pr_id);
}

std::optional<DeveloperId> pick_replaced(const PullRequest& pr, std::uint64_t seed) {
  auto const reviewers = pr.reviewers();
  if (reviewers.empty()) {
    return std::nullopt;
  }
  return reviewers[replacement_hash(pr.id, seed) % reviewers.size()];
}

std::size_t SimulationRun::fallback_count() const {
  return static_cast<std::size_t>(std::count_if(replacement_log.begin(), replacement_log.end(),
                                                [](const ReplacementRecord& r) { return r.fallback; }));
}

std::vector<ReplayEvent> replay_schedule(const CleanCorpus& corpus) {
  std::vector<ReplayEvent> events;
  events.reserve(corpus.commits.size() + 2 * corpus.pull_requests.size());
  for (std::size_t i = 0; i < corpus.commits.size(); ++i) {
    events.push_back({ReplayKind::commit, corpus.commits[i].timestamp, i});
  }
  for (std::size_t i = 0; i < corpus.pull_requests.size(); ++i) {
    events.push_back({ReplayKind::open, corpus.pull_requests[i].created_at, i});
    events.push_back({ReplayKind::merge, corpus.pull_requests[i].merged_at, i});
  }
  std::sort(events.begin(), events.end(), [](const ReplayEvent& a, const ReplayEvent& b) {
    return std::tie(a.at, a.kind, a.index) < std::tie(b.at, b.kind, b.index);
  });
  return events;
}

// ---------------------------------------------------------------------------

Simulation::Simulation(const CleanCorpus& corpus) : corpus_(corpus) {}

Simulation::Simulation(const CleanCorpus& corpus, std::string recommender_name,
                       Recommender recommender, RecommenderParams params, std::uint64_t seed)
    : corpus_(corpus),
      presence_(ActivityTimeline::from_corpus(corpus)),
      recommender_(std::move(recommender)) {
  params.validate();
  run_.seed = seed;
  run_.recommender = std::move(recommender_name);
  run_.params = params;
}

void Simulation::step(const ReplayEvent& event) {
  if (event.at < clock_) {
    throw SimulationError(fmt::format("out-of-order replay event at {} (clock {})",
                                      format_instant(event.at), format_instant(clock_)));
  }
  clock_ = event.at;
  switch (event.kind) {
    case ReplayKind::commit:
      run_.ledger.apply(commit_event(corpus_.commits.at(event.index)));
      break;
    case ReplayKind::open:
      open_pull_request(corpus_.pull_requests.at(event.index));
      break;
    case ReplayKind::merge:
      merge_pull_request(corpus_.pull_requests.at(event.index));
      break;
  }
}

void Simulation::run() {
  if (schedule_.empty() && next_scheduled_ == 0) {
    schedule_ = replay_schedule(corpus_);
  }
  for (; next_scheduled_ < schedule_.size(); ++next_scheduled_) {
    step(schedule_[next_scheduled_]);
  }
}

void Simulation::open_pull_request(const PullRequest& pr) {
  if (open_.contains(pr.id)) {
    throw SimulationError(fmt::format("pull request '{}' opened twice", pr.id));
  }
  auto const actual = pr.reviewers();
  Assignment assignment;
  for (auto const& r : actual) {
    assignment.emplace_back(r, r);
  }

  if (recommender_ && !actual.empty()) {
    auto const replaced = *pick_replaced(pr, run_.seed);
    auto const ctx = make_review_context(pr, run_.ledger, pr.created_at, presence_);
    auto const rec = recommender_(ctx, run_.params);

    ReplacementRecord record;
    record.pr_id = pr.id;
    record.replaced = replaced;
    record.substitute = replaced;
    record.fallback = true;
    record.branch = rec.branch;
    record.recommended_at = pr.created_at;
    record.attributed_at = pr.merged_at;

    auto const is_actual = [&](const DeveloperId& dev) {
      return std::binary_search(actual.begin(), actual.end(), dev);
    };
    for (std::size_t i = 0; i < rec.ranked.size(); ++i) {
      if (is_actual(rec.ranked[i].dev)) {
        record.rank_of_actual = i + 1;
        break;
      }
    }
    for (auto const& candidate : rec.ranked) {
      if (candidate.dev == pr.author || (is_actual(candidate.dev) && candidate.dev != replaced)) {
        continue;
      }
      record.substitute = candidate.dev;
      record.fallback = false;
      break;
    }
    for (auto& [reviewer, carried] : assignment) {
      if (carried == replaced) {
        reviewer = record.substitute;
      }
    }
    std::sort(assignment.begin(), assignment.end());
    run_.replacement_log.push_back(std::move(record));
  }

  ReviewOutcome outcome;
  outcome.pr_id = pr.id;
  outcome.created_at = pr.created_at;
  outcome.files = pr.files.size();
  for (auto const& [reviewer, carried] : assignment) {
    outcome.reviewers.push_back(reviewer);
    run_.ledger.open_review(reviewer);
  }
  for (auto const& path : pr.files) {
    bool const known = std::any_of(outcome.reviewers.begin(), outcome.reviewers.end(),
                                   [&](const DeveloperId& dev) {
                                     return run_.ledger.knows(dev, path, pr.created_at);
                                   });
    outcome.known_files += known ? 1 : 0;
  }
  run_.reviews.push_back(std::move(outcome));
  open_.emplace(pr.id, std::move(assignment));
}

void Simulation::merge_pull_request(const PullRequest& pr) {
  auto const it = open_.find(pr.id);
  if (it == open_.end()) {
    throw SimulationError(fmt::format("pull request '{}' merged before it was opened", pr.id));
  }
  for (auto const& [reviewer, carried] : it->second) {
    run_.ledger.close_review(reviewer);
    run_.ledger.apply(review_event(pr, reviewer, comments_of(pr, carried)));
  }
  open_.erase(it);
}

// ---------------------------------------------------------------------------

SimulationRun run_simulation(const CleanCorpus& corpus, std::string_view recommender,
                             const RecommenderParams& params, std::uint64_t seed) {
  Simulation sim(corpus, std::string{recommender}, find_recommender(recommender), params, seed);
  sim.run();
  return std::move(sim).release();
}

SimulationRun replay_actual(const CleanCorpus& corpus) {
  Simulation sim(corpus);
  sim.run();
  return std::move(sim).release();
}

}  // namespace revsim
