#pragma once

#include "revsim/corpus.hpp"
#include "revsim/ledger.hpp"
#include "revsim/metrics.hpp"
#include "revsim/simulator.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

// CSV emitters. Every writer returns the full file contents so callers can
// compute all outputs before touching the filesystem. Reals use six decimals;
// undefined values are written as NA.

namespace revsim {

/// Quarterly reports of one recommender.
struct RecommenderReports {
  std::string recommender;
  std::vector<QuarterReport> quarters;
};

std::string quarterly_csv(std::span<const RecommenderReports> runs);
std::string replacement_log_csv(std::span<const ReplacementRecord> log);
std::string summary_csv(std::span<const RunSummary> summaries);
std::string lorenz_csv(std::span<const std::pair<Quarter, LorenzCurve>> curves);
std::string sensitivity_csv(std::string_view recommender, std::span<const SensitivityRow> rows);
std::string far_comparison_csv(std::span<const FarComparison> rows);
std::string workload_csv(std::span<const WorkloadReport> reports);
/// Whole-history Lorenz points of each workload period choice.
std::string workload_lorenz_csv(std::span<const WorkloadReport> reports);
std::string provenance_csv(const ProvenanceSummary& summary);

/// (file, quarter, n_knowers, n_active_knowers) for every tracked file at the
/// end of every quarter with lookahead.
std::string ledger_snapshot_csv(const KnowledgeLedger& ledger, const QuarterCalendar& calendar,
                                const ActivityTimeline& timeline);

/// Quoted when the value contains a comma, quote or newline.
std::string csv_field(std::string_view value);

}  // namespace revsim
