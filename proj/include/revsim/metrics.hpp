#pragma once

#include "revsim/corpus.hpp"
#include "revsim/ledger.hpp"
#include "revsim/recommenders.hpp"
#include "revsim/simulator.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace revsim {

// ---------------------------------------------------------------------------
// Workload concentration

/// Inverted Lorenz curve: reviewers sorted busiest first, points are
/// (cumulative reviewer fraction, cumulative review fraction), from (0,0) to (1,1).
struct LorenzCurve {
  std::vector<std::pair<double, double>> points;
};

/// Empty curve when the counts sum to zero.
LorenzCurve lorenz_curve(std::span<const double> counts);

/// Gini as area between the inverted Lorenz curve and the equality line,
/// divided by the area under the equality line. Empty for an empty curve.
std::optional<double> gini_from_lorenz(const LorenzCurve& curve);

/// Gini by mean absolute difference: sum_i sum_j |x_i - x_j| / (2 n^2 mean).
/// Empty when there is no reviewer or no review.
std::optional<double> gini_work(std::span<const double> counts);

/// Share of all reviews done by the busiest ceil(fraction * n) reviewers.
std::optional<double> top_share(std::span<const double> counts, double fraction = 0.2);

/// Nearest-rank percentile (p in (0, 100]) of `values`. Empty input -> empty.
std::optional<double> nearest_rank_percentile(std::vector<double> values, double p);

// ---------------------------------------------------------------------------
// Outcome measures

struct ExpertiseTotal {
  double sum = 0.0;
  std::size_t reviews = 0;
  double mean() const { return reviews == 0 ? 0.0 : sum / static_cast<double>(reviews); }
};

/// Sum of per-review expertise (known files / files under review).
ExpertiseTotal expertise(std::span<const ReviewOutcome> quarter_reviews);

struct FilesAtRisk {
  std::size_t abandoned = 0;
  std::size_t hoarded = 0;
  std::size_t tracked = 0;
  std::size_t total() const { return abandoned + hoarded; }
  bool operator==(const FilesAtRisk&) const = default;
};

/// Files known by at most one active developer at the end of `quarter`.
/// Empty when the quarter lacks four quarters of lookahead.
std::optional<FilesAtRisk> far(const KnowledgeLedger& ledger, const QuarterCalendar& calendar,
                               int quarter, const ActivityTimeline& timeline,
                               KnowledgeSource source = KnowledgeSource::authors_and_reviewers);

/// Mean reciprocal rank over the log; missing ranks count as 0. Empty log -> 0.
double mrr(std::span<const ReplacementRecord> log);

/// (simulated / actual - 1) * 100. Empty when actual is 0.
std::optional<double> percent_change(double actual, double simulated);

// ---------------------------------------------------------------------------
// Quarterly reports

struct QuarterReport {
  Quarter quarter;
  std::size_t reviews = 0;
  ExpertiseTotal expertise_actual;
  ExpertiseTotal expertise_simulated;
  std::optional<double> gini_actual;
  std::optional<double> gini_simulated;
  std::optional<FilesAtRisk> far_actual;
  std::optional<FilesAtRisk> far_simulated;
  std::optional<double> d_expertise;
  std::optional<double> d_gini;
  std::optional<double> d_far;
  std::optional<double> mrr;
};

/// Per-reviewer review counts of the reviews opened in each quarter.
std::vector<std::vector<double>> quarterly_review_counts(std::span<const ReviewOutcome> reviews,
                                                         const QuarterCalendar& calendar);

/// One report per non-final quarter.
std::vector<QuarterReport> quarter_reports(const SimulationRun& actual,
                                           const SimulationRun& simulated,
                                           const QuarterCalendar& calendar,
                                           const ActivityTimeline& timeline);

struct RunSummary {
  std::string recommender;
  std::size_t replacements = 0;
  std::size_t fallbacks = 0;
  double mrr = 0.0;
  /// Unweighted means over quarters where the delta is defined.
  std::optional<double> d_expertise;
  std::optional<double> d_gini;
  std::optional<double> d_far;
  std::size_t quarters_expertise = 0;
  std::size_t quarters_gini = 0;
  std::size_t quarters_far = 0;
};

RunSummary summarize(const SimulationRun& simulated, std::span<const QuarterReport> reports);

// ---------------------------------------------------------------------------
// Historical analyses

struct FarComparison {
  Quarter quarter;
  FilesAtRisk authors_only;
  FilesAtRisk authors_and_reviewers;
};

/// FaR with only authors as knowers vs authors and reviewers, for every
/// quarter with lookahead. No simulation.
std::vector<FarComparison> historical_far_comparison(const CleanCorpus& corpus,
                                                     const CorpusConfig& config);

enum class Period { day, week, month, quarter };

std::optional<Period> parse_period(std::string_view name);
std::string_view to_string(Period period);

struct WorkloadReport {
  Period period = Period::month;
  /// Reviews per (reviewer, period) with >= 1 review.
  std::size_t samples = 0;
  double median = 0.0;
  double p95 = 0.0;
  double mean = 0.0;
  /// Whole-history per-reviewer totals.
  std::size_t reviewers = 0;
  LorenzCurve lorenz;
  double top20_share = 0.0;
  double gini = 0.0;
};

/// Each (PR, reviewer) pair is one review, dated by the reviewer's earliest
/// review event on that PR.
WorkloadReport workload_distribution(const CleanCorpus& corpus, Period period,
                                     const CorpusConfig& config);

/// Inverted Lorenz curve of the reviews done in each quarter of the actual history.
std::vector<std::pair<Quarter, LorenzCurve>> quarterly_lorenz(const CleanCorpus& corpus,
                                                              const CorpusConfig& config);

// ---------------------------------------------------------------------------
// k sensitivity

struct SensitivityRow {
  int k = 0;
  RunSummary summary;
};

/// One full simulation of `recommender` (sofia or sofiawl) per k, same seed.
std::vector<SensitivityRow> k_sensitivity(const CleanCorpus& corpus, const CorpusConfig& config,
                                          std::string_view recommender,
                                          const RecommenderParams& params, std::uint64_t seed,
                                          int k_first = 1, int k_last = 8);

}  // namespace revsim
