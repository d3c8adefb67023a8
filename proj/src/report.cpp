#include "revsim/report.hpp"

#include <fmt/format.h>

#include <iterator>
#include <optional>

namespace revsim {

namespace {

std::string real(double v) { return fmt::format("{:.6f}", v); }

std::string real(const std::optional<double>& v) { return v ? real(*v) : std::string{"NA"}; }

template <typename T>
std::string count(const std::optional<T>& v) {
  return v ? fmt::format("{}", *v) : std::string{"NA"};
}

std::string quarter_start(const Quarter& q) {
  return format_instant(q.start).substr(0, 10);
}

}  // namespace

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string{value};
  }
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string quarterly_csv(std::span<const RecommenderReports> runs) {
  std::string out =
      "recommender,quarter,quarter_start,reviews,expertise_actual,expertise_simulated,"
      "expertise_mean_actual,expertise_mean_simulated,gini_actual,gini_simulated,"
      "far_actual,far_simulated,abandoned_actual,hoarded_actual,abandoned_simulated,"
      "hoarded_simulated,tracked_files,d_expertise,d_gini,d_far,mrr\n";
  auto it = std::back_inserter(out);
  for (auto const& run : runs) {
    for (auto const& r : run.quarters) {
      auto const far_field = [](const std::optional<FilesAtRisk>& f, auto member) {
        return f ? fmt::format("{}", member(*f)) : std::string{"NA"};
      };
      auto const total = [](const FilesAtRisk& f) { return f.total(); };
      auto const abandoned = [](const FilesAtRisk& f) { return f.abandoned; };
      auto const hoarded = [](const FilesAtRisk& f) { return f.hoarded; };
      auto const tracked = [](const FilesAtRisk& f) { return f.tracked; };
      fmt::format_to(it, "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                     csv_field(run.recommender), r.quarter.index, quarter_start(r.quarter),
                     r.reviews, real(r.expertise_actual.sum), real(r.expertise_simulated.sum),
                     real(r.expertise_actual.mean()), real(r.expertise_simulated.mean()),
                     real(r.gini_actual), real(r.gini_simulated),
                     far_field(r.far_actual, total), far_field(r.far_simulated, total),
                     far_field(r.far_actual, abandoned), far_field(r.far_actual, hoarded),
                     far_field(r.far_simulated, abandoned), far_field(r.far_simulated, hoarded),
                     far_field(r.far_actual, tracked), real(r.d_expertise), real(r.d_gini),
                     real(r.d_far), real(r.mrr));
    }
  }
  return out;
}

std::string replacement_log_csv(std::span<const ReplacementRecord> log) {
  std::string out = "pr_id,replaced,substitute,rank_of_actual,branch,fallback\n";
  auto it = std::back_inserter(out);
  for (auto const& r : log) {
    fmt::format_to(it, "{},{},{},{},{},{}\n", csv_field(r.pr_id), csv_field(r.replaced.key),
                   csv_field(r.substitute.key), count(r.rank_of_actual),
                   r.branch ? csv_field(*r.branch) : std::string{"NA"}, r.fallback ? 1 : 0);
  }
  return out;
}

std::string summary_csv(std::span<const RunSummary> summaries) {
  std::string out =
      "recommender,replacements,fallbacks,fallback_fraction,mrr,d_expertise,d_gini,d_far,"
      "quarters_expertise,quarters_gini,quarters_far\n";
  auto it = std::back_inserter(out);
  for (auto const& s : summaries) {
    double const fraction =
        s.replacements == 0 ? 0.0
                            : static_cast<double>(s.fallbacks) / static_cast<double>(s.replacements);
    fmt::format_to(it, "{},{},{},{},{},{},{},{},{},{},{}\n", csv_field(s.recommender),
                   s.replacements, s.fallbacks, real(fraction), real(s.mrr), real(s.d_expertise),
                   real(s.d_gini), real(s.d_far), s.quarters_expertise, s.quarters_gini,
                   s.quarters_far);
  }
  return out;
}

std::string lorenz_csv(std::span<const std::pair<Quarter, LorenzCurve>> curves) {
  std::string out = "quarter,quarter_start,x,y\n";
  auto it = std::back_inserter(out);
  for (auto const& [quarter, curve] : curves) {
    for (auto const& [x, y] : curve.points) {
      fmt::format_to(it, "{},{},{},{}\n", quarter.index, quarter_start(quarter), real(x), real(y));
    }
  }
  return out;
}

std::string sensitivity_csv(std::string_view recommender, std::span<const SensitivityRow> rows) {
  std::string out = "recommender,k,replacements,fallbacks,mrr,d_expertise,d_gini,d_far\n";
  auto it = std::back_inserter(out);
  for (auto const& row : rows) {
    auto const& s = row.summary;
    fmt::format_to(it, "{},{},{},{},{},{},{},{}\n", csv_field(recommender), row.k, s.replacements,
                   s.fallbacks, real(s.mrr), real(s.d_expertise), real(s.d_gini), real(s.d_far));
  }
  return out;
}

std::string far_comparison_csv(std::span<const FarComparison> rows) {
  std::string out =
      "quarter,quarter_start,tracked_files,far_authors,far_authors_reviewers,"
      "share_authors,share_authors_reviewers,abandoned_authors,hoarded_authors,"
      "abandoned_authors_reviewers,hoarded_authors_reviewers\n";
  auto it = std::back_inserter(out);
  for (auto const& r : rows) {
    auto const tracked = r.authors_only.tracked;
    auto const share = [&](std::size_t n) {
      return tracked == 0 ? std::string{"NA"}
                          : real(static_cast<double>(n) / static_cast<double>(tracked));
    };
    fmt::format_to(it, "{},{},{},{},{},{},{},{},{},{},{}\n", r.quarter.index,
                   quarter_start(r.quarter), tracked, r.authors_only.total(),
                   r.authors_and_reviewers.total(), share(r.authors_only.total()),
                   share(r.authors_and_reviewers.total()), r.authors_only.abandoned,
                   r.authors_only.hoarded, r.authors_and_reviewers.abandoned,
                   r.authors_and_reviewers.hoarded);
  }
  return out;
}

std::string workload_csv(std::span<const WorkloadReport> reports) {
  std::string out = "period,samples,median,p95,mean,reviewers,top20_share,gini\n";
  auto it = std::back_inserter(out);
  for (auto const& r : reports) {
    fmt::format_to(it, "{},{},{},{},{},{},{},{}\n", to_string(r.period), r.samples,
                   real(r.median), real(r.p95), real(r.mean), r.reviewers, real(r.top20_share),
                   real(r.gini));
  }
  return out;
}

std::string workload_lorenz_csv(std::span<const WorkloadReport> reports) {
  // The whole-history curve does not depend on the period; emit it once.
  std::string out = "x,y\n";
  if (reports.empty()) {
    return out;
  }
  auto it = std::back_inserter(out);
  for (auto const& [x, y] : reports.front().lorenz.points) {
    fmt::format_to(it, "{},{}\n", real(x), real(y));
  }
  return out;
}

std::string provenance_csv(const ProvenanceSummary& s) {
  std::string out = "record,input,retained,dropped_reason,dropped\n";
  auto it = std::back_inserter(out);
  auto const row = [&](std::string_view record, std::size_t input, std::size_t retained,
                       std::string_view reason, std::size_t dropped) {
    fmt::format_to(it, "{},{},{},{},{}\n", record, input, retained, reason, dropped);
  };
  row("commit", s.commits_input, s.commits_retained, "bot", s.commits_bot);
  row("commit", s.commits_input, s.commits_retained, "mega", s.commits_mega);
  row("commit", s.commits_input, s.commits_retained, "non_code", s.commits_non_code);
  row("pull_request", s.prs_input, s.prs_retained, "unmerged", s.prs_unmerged);
  row("pull_request", s.prs_input, s.prs_retained, "bot", s.prs_bot);
  row("pull_request", s.prs_input, s.prs_retained, "non_code", s.prs_non_code);
  row("pull_request", s.prs_input, s.prs_retained, "mega_flagged_kept", s.prs_mega_flagged);
  row("review", s.reviews_input, s.reviews_retained, "dropped_with_pr", s.reviews_dropped_with_pr);
  row("review", s.reviews_input, s.reviews_retained, "post_merge", s.reviews_post_merge);
  row("review", s.reviews_input, s.reviews_retained, "bot", s.reviews_bot);
  row("review", s.reviews_input, s.reviews_retained, "self", s.reviews_self);
  row("review", s.reviews_input, s.reviews_retained, "non_code", s.reviews_non_code);
  return out;
}

std::string ledger_snapshot_csv(const KnowledgeLedger& ledger, const QuarterCalendar& calendar,
                                const ActivityTimeline& timeline) {
  std::string out = "file,quarter,n_knowers,n_active_knowers\n";
  auto it = std::back_inserter(out);
  for (auto const& quarter : calendar.quarters()) {
    if (!calendar.has_lookahead(quarter.index)) {
      continue;
    }
    Instant const last_instant = quarter.end - std::chrono::seconds{1};
    for (auto const& path : ledger.tracked_files(quarter.end)) {
      auto const knowers = ledger.knowers(path, last_instant);
      auto const active = active_devs(ledger, calendar, quarter.index, path, timeline);
      fmt::format_to(it, "{},{},{},{}\n", csv_field(path), quarter.index, knowers.size(),
                     active.size());
    }
  }
  return out;
}

}  // namespace revsim
