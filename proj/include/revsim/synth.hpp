#pragma once

#include "revsim/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace revsim {

class SynthError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Generator parameters for a synthetic repository history.
struct SynthParams {
  /// Team size; every leaver is replaced by a newcomer at the bottom of
  /// the seniority order.
  int devs = 20;
  int files = 300;
  int directories = 10;
  int quarters = 16;
  /// PRs per quarter on top of one PR per active developer.
  int prs_per_quarter = 20;
  /// Unreviewed direct commits per quarter.
  int commits_per_quarter = 10;
  /// Probability that a PR receives any review.
  double review_rate = 1.0;
  int max_reviewers = 3;
  /// Annual probability that a developer leaves.
  double turnover_rate = 0.1;
  /// 0 = every developer leaves at the mean rate; 1 = the most senior never
  /// leaves and the most junior leaves at twice the mean rate.
  double junior_churn = 0.5;
  /// Review weight of the i-th most senior developer is i^(-3 skew):
  /// 0 spreads reviews evenly, 1 puts nearly all on a few veterans.
  double skew = 0.3;
  /// Change frequency of the i-th file of a directory is i^(-file_skew).
  double file_skew = 1.0;
  /// Probability that a touched file lies outside the author's home directory.
  double noise = 0.2;
  /// Reviewer weight multiplier for developers whose home is the PR's directory.
  double directory_affinity = 2.0;
  std::uint64_t seed = 42;

  /// Throws SynthError.
  void validate() const;
};

struct SynthCorpus {
  std::vector<RawCommit> commits;
  std::vector<RawPullRequest> pull_requests;
  /// Developer keys that left before the final quarter, in order of departure.
  std::vector<std::string> departed;
};

/// Deterministic in the parameters, seed included.
SynthCorpus generate_corpus(const SynthParams& params);

/// JSONL lines, one record per line.
std::string commits_jsonl(const SynthCorpus& corpus);
std::string prs_jsonl(const SynthCorpus& corpus);

/// Runs the generated corpus through the normal cleaning pipeline.
CleanCorpus synth_clean(const SynthParams& params, const CorpusConfig& config = {});

}  // namespace revsim
