#include "revsim/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace revsim {

namespace {

/// ceil(x) that ignores floating-point noise just above an integer.
std::size_t robust_ceil(double x) {
  return static_cast<std::size_t>(std::ceil(x - 1e-9));
}

template <typename T>
std::optional<double> mean_of(const std::vector<T>& values) {
  if (values.empty()) {
    return std::nullopt;
  }
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

/// Earliest review event of each reviewer on each PR.
std::vector<std::pair<DeveloperId, Instant>> review_instants(const CleanCorpus& corpus) {
  std::vector<std::pair<DeveloperId, Instant>> out;
  for (auto const& pr : corpus.pull_requests) {
    std::map<DeveloperId, Instant> first;
    for (auto const& e : pr.review_events) {
      first.try_emplace(e.reviewer, e.timestamp);
    }
    out.insert(out.end(), first.begin(), first.end());
  }
  return out;
}

std::vector<double> values_of(const std::map<DeveloperId, double>& counts) {
  std::vector<double> out;
  out.reserve(counts.size());
  for (auto const& [dev, n] : counts) {
    out.push_back(n);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

LorenzCurve lorenz_curve(std::span<const double> counts) {
  LorenzCurve curve;
  double const total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (counts.empty() || total <= 0.0) {
    return curve;
  }
  std::vector<double> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double const n = static_cast<double>(sorted.size());
  curve.points.reserve(sorted.size() + 1);
  curve.points.emplace_back(0.0, 0.0);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    curve.points.emplace_back(static_cast<double>(i + 1) / n, cumulative / total);
  }
  curve.points.back() = {1.0, 1.0};
  return curve;
}

std::optional<double> gini_from_lorenz(const LorenzCurve& curve) {
  if (curve.points.size() < 2) {
    return std::nullopt;
  }
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    auto const [x0, y0] = curve.points[i - 1];
    auto const [x1, y1] = curve.points[i];
    area += (x1 - x0) * (y0 + y1) / 2.0;
  }
  double const between = area - 0.5;
  double const under_equality = 0.5;
  return between / under_equality;
}

std::optional<double> gini_work(std::span<const double> counts) {
  double const total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (counts.empty() || total <= 0.0) {
    return std::nullopt;
  }
  double abs_diff = 0.0;
  for (double xi : counts) {
    for (double xj : counts) {
      abs_diff += std::abs(xi - xj);
    }
  }
  double const n = static_cast<double>(counts.size());
  double const mean = total / n;
  return abs_diff / (2.0 * n * n * mean);
}

std::optional<double> top_share(std::span<const double> counts, double fraction) {
  double const total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (counts.empty() || total <= 0.0) {
    return std::nullopt;
  }
  std::vector<double> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  auto const top = std::clamp<std::size_t>(robust_ceil(fraction * static_cast<double>(sorted.size())),
                                           1, sorted.size());
  return std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(top), 0.0) /
         total;
}

std::optional<double> nearest_rank_percentile(std::vector<double> values, double p) {
  if (values.empty()) {
    return std::nullopt;
  }
  std::sort(values.begin(), values.end());
  auto const rank = std::clamp<std::size_t>(robust_ceil(p / 100.0 * static_cast<double>(values.size())),
                                            1, values.size());
  return values[rank - 1];
}

// ---------------------------------------------------------------------------

ExpertiseTotal expertise(std::span<const ReviewOutcome> quarter_reviews) {
  ExpertiseTotal total;
  for (auto const& r : quarter_reviews) {
    if (r.reviewers.empty()) {
      continue;
    }
    total.sum += r.expertise();
    ++total.reviews;
  }
  return total;
}

std::optional<FilesAtRisk> far(const KnowledgeLedger& ledger, const QuarterCalendar& calendar,
                               int quarter, const ActivityTimeline& timeline,
                               KnowledgeSource source) {
  if (!calendar.has_lookahead(quarter)) {
    return std::nullopt;
  }
  Instant const end = calendar[quarter].end;
  Instant const last_instant = end - std::chrono::seconds{1};
  std::map<DeveloperId, bool> leaver;
  FilesAtRisk result;
  for (auto const& path : ledger.tracked_files(end)) {
    ++result.tracked;
    std::size_t active = 0;
    for (auto const& dev : ledger.knowers(path, last_instant, source)) {
      auto [it, inserted] = leaver.try_emplace(dev, false);
      if (inserted) {
        it->second = timeline.is_leaver(dev, calendar, quarter);
      }
      if (!it->second && ++active > 1) {
        break;
      }
    }
    if (active == 0) {
      ++result.abandoned;
    } else if (active == 1) {
      ++result.hoarded;
    }
  }
  return result;
}

double mrr(std::span<const ReplacementRecord> log) {
  if (log.empty()) {
    return 0.0;
  }
  double sum = 0.0;
  for (auto const& r : log) {
    if (r.rank_of_actual) {
      sum += 1.0 / static_cast<double>(*r.rank_of_actual);
    }
  }
  return sum / static_cast<double>(log.size());
}

std::optional<double> percent_change(double actual, double simulated) {
  if (actual == 0.0) {
    return std::nullopt;
  }
  return (simulated / actual - 1.0) * 100.0;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> quarterly_review_counts(std::span<const ReviewOutcome> reviews,
                                                         const QuarterCalendar& calendar) {
  std::vector<std::map<DeveloperId, double>> per_quarter(static_cast<std::size_t>(calendar.size()));
  for (auto const& r : reviews) {
    auto& counts = per_quarter[static_cast<std::size_t>(calendar.index_of(r.created_at))];
    for (auto const& dev : r.reviewers) {
      counts[dev] += 1.0;
    }
  }
  std::vector<std::vector<double>> out;
  out.reserve(per_quarter.size());
  for (auto const& counts : per_quarter) {
    out.push_back(values_of(counts));
  }
  return out;
}

std::vector<QuarterReport> quarter_reports(const SimulationRun& actual,
                                           const SimulationRun& simulated,
                                           const QuarterCalendar& calendar,
                                           const ActivityTimeline& timeline) {
  if (actual.reviews.size() != simulated.reviews.size()) {
    throw std::invalid_argument("actual and simulated runs cover different pull requests");
  }
  auto const n_quarters = static_cast<std::size_t>(calendar.size());
  std::vector<std::vector<ReviewOutcome>> actual_by_q(n_quarters);
  std::vector<std::vector<ReviewOutcome>> simulated_by_q(n_quarters);
  for (std::size_t i = 0; i < actual.reviews.size(); ++i) {
    auto const q = static_cast<std::size_t>(calendar.index_of(actual.reviews[i].created_at));
    actual_by_q[q].push_back(actual.reviews[i]);
    simulated_by_q[q].push_back(simulated.reviews[i]);
  }
  auto const counts_actual = quarterly_review_counts(actual.reviews, calendar);
  auto const counts_simulated = quarterly_review_counts(simulated.reviews, calendar);
  std::vector<std::vector<ReplacementRecord>> log_by_q(n_quarters);
  for (auto const& r : simulated.replacement_log) {
    log_by_q[static_cast<std::size_t>(calendar.index_of(r.recommended_at))].push_back(r);
  }

  std::vector<QuarterReport> reports;
  for (auto const& quarter : calendar.quarters()) {
    if (quarter.final) {
      continue;
    }
    auto const q = static_cast<std::size_t>(quarter.index);
    QuarterReport report;
    report.quarter = quarter;
    report.expertise_actual = expertise(actual_by_q[q]);
    report.expertise_simulated = expertise(simulated_by_q[q]);
    report.reviews = report.expertise_actual.reviews;
    if (report.reviews > 0) {
      report.d_expertise =
          percent_change(report.expertise_actual.sum, report.expertise_simulated.sum);
    }
    report.gini_actual = gini_work(counts_actual[q]);
    report.gini_simulated = gini_work(counts_simulated[q]);
    if (report.gini_actual && report.gini_simulated) {
      report.d_gini = percent_change(*report.gini_actual, *report.gini_simulated);
    }
    report.far_actual = far(actual.ledger, calendar, quarter.index, timeline);
    report.far_simulated = far(simulated.ledger, calendar, quarter.index, timeline);
    if (report.far_actual && report.far_simulated) {
      report.d_far = percent_change(static_cast<double>(report.far_actual->total()),
                                    static_cast<double>(report.far_simulated->total()));
    }
    if (!log_by_q[q].empty()) {
      report.mrr = mrr(log_by_q[q]);
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

RunSummary summarize(const SimulationRun& simulated, std::span<const QuarterReport> reports) {
  RunSummary summary;
  summary.recommender = simulated.recommender;
  summary.replacements = simulated.replacement_log.size();
  summary.fallbacks = simulated.fallback_count();
  summary.mrr = mrr(simulated.replacement_log);
  std::vector<double> de;
  std::vector<double> dg;
  std::vector<double> df;
  for (auto const& r : reports) {
    if (r.d_expertise) de.push_back(*r.d_expertise);
    if (r.d_gini) dg.push_back(*r.d_gini);
    if (r.d_far) df.push_back(*r.d_far);
  }
  summary.d_expertise = mean_of(de);
  summary.d_gini = mean_of(dg);
  summary.d_far = mean_of(df);
  summary.quarters_expertise = de.size();
  summary.quarters_gini = dg.size();
  summary.quarters_far = df.size();
  return summary;
}

// ---------------------------------------------------------------------------

std::vector<FarComparison> historical_far_comparison(const CleanCorpus& corpus,
                                                     const CorpusConfig& config) {
  auto const ledger = build_actual_ledger(corpus);
  auto const calendar = QuarterCalendar::for_corpus(corpus, config);
  auto const timeline = ActivityTimeline::from_corpus(corpus);
  std::vector<FarComparison> out;
  for (auto const& quarter : calendar.quarters()) {
    if (!calendar.has_lookahead(quarter.index)) {
      continue;
    }
    out.push_back(FarComparison{
        quarter,
        *far(ledger, calendar, quarter.index, timeline, KnowledgeSource::authors_only),
        *far(ledger, calendar, quarter.index, timeline, KnowledgeSource::authors_and_reviewers)});
  }
  return out;
}

std::optional<Period> parse_period(std::string_view name) {
  if (name == "day") return Period::day;
  if (name == "week") return Period::week;
  if (name == "month") return Period::month;
  if (name == "quarter") return Period::quarter;
  return std::nullopt;
}

std::string_view to_string(Period period) {
  switch (period) {
    case Period::day: return "day";
    case Period::week: return "week";
    case Period::month: return "month";
    case Period::quarter: return "quarter";
  }
  return "?";
}

WorkloadReport workload_distribution(const CleanCorpus& corpus, Period period,
                                     const CorpusConfig& config) {
  WorkloadReport report;
  report.period = period;
  auto const reviews = review_instants(corpus);
  if (reviews.empty()) {
    return report;
  }
  auto const calendar = QuarterCalendar::for_corpus(corpus, config);
  auto const period_key = [&](Instant t) -> std::int64_t {
    using namespace std::chrono;
    switch (period) {
      case Period::day:
        return utc_day(t);
      case Period::week: {
        // Weeks start on Monday; 1970-01-01 was a Thursday.
        auto const d = utc_day(t) + 3;
        return d >= 0 ? d / 7 : (d - 6) / 7;
      }
      case Period::month: {
        year_month_day const date{floor<days>(t)};
        return static_cast<std::int64_t>(static_cast<int>(date.year())) * 12 +
               static_cast<std::int64_t>(unsigned(date.month()));
      }
      case Period::quarter:
        return calendar.index_of(t);
    }
    return 0;
  };

  std::map<std::pair<DeveloperId, std::int64_t>, double> per_period;
  std::map<DeveloperId, double> totals;
  for (auto const& [dev, at] : reviews) {
    per_period[{dev, period_key(at)}] += 1.0;
    totals[dev] += 1.0;
  }
  std::vector<double> samples;
  samples.reserve(per_period.size());
  for (auto const& [key, n] : per_period) {
    samples.push_back(n);
  }
  report.samples = samples.size();
  report.median = *nearest_rank_percentile(samples, 50.0);
  report.p95 = *nearest_rank_percentile(samples, 95.0);
  report.mean = *mean_of(samples);

  auto const counts = values_of(totals);
  report.reviewers = counts.size();
  report.lorenz = lorenz_curve(counts);
  report.top20_share = top_share(counts, 0.2).value_or(0.0);
  report.gini = gini_work(counts).value_or(0.0);
  return report;
}

std::vector<std::pair<Quarter, LorenzCurve>> quarterly_lorenz(const CleanCorpus& corpus,
                                                              const CorpusConfig& config) {
  auto const calendar = QuarterCalendar::for_corpus(corpus, config);
  std::vector<std::map<DeveloperId, double>> per_quarter(static_cast<std::size_t>(calendar.size()));
  for (auto const& [dev, at] : review_instants(corpus)) {
    per_quarter[static_cast<std::size_t>(calendar.index_of(at))][dev] += 1.0;
  }
  std::vector<std::pair<Quarter, LorenzCurve>> out;
  for (auto const& quarter : calendar.quarters()) {
    auto const counts = values_of(per_quarter[static_cast<std::size_t>(quarter.index)]);
    if (!counts.empty()) {
      out.emplace_back(quarter, lorenz_curve(counts));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<SensitivityRow> k_sensitivity(const CleanCorpus& corpus, const CorpusConfig& config,
                                          std::string_view recommender,
                                          const RecommenderParams& params, std::uint64_t seed,
                                          int k_first, int k_last) {
  if (recommender != "sofia" && recommender != "sofiawl") {
    throw std::invalid_argument(
        fmt::format("k sensitivity applies to sofia or sofiawl, not '{}'", recommender));
  }
  if (k_first < 0 || k_last < k_first) {
    throw std::invalid_argument("invalid k range");
  }
  auto const actual = replay_actual(corpus);
  auto const calendar = QuarterCalendar::for_corpus(corpus, config);
  auto const timeline = ActivityTimeline::from_corpus(corpus);
  std::vector<SensitivityRow> rows;
  for (int k = k_first; k <= k_last; ++k) {
    auto row_params = params;
    row_params.k = k;
    auto const simulated = run_simulation(corpus, recommender, row_params, seed);
    auto const reports = quarter_reports(actual, simulated, calendar, timeline);
    rows.push_back(SensitivityRow{k, summarize(simulated, reports)});
  }
  return rows;
}

}  // namespace revsim
