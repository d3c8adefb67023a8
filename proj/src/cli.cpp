#include "revsim/cli.hpp"

#include "revsim/corpus.hpp"
#include "revsim/ledger.hpp"
#include "revsim/report.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace revsim {

namespace {

struct LoadedCorpus {
  CorpusConfig config;
  CleanCorpus corpus;
};

LoadedCorpus load(const RunConfig& run) {
  if (run.commits.empty() || run.prs.empty()) {
    throw std::invalid_argument("both --commits and --prs are required");
  }
  LoadedCorpus loaded;
  if (run.aliases) {
    loaded.config.aliases = load_alias_table(*run.aliases);
  }
  loaded.config.validate();
  loaded.corpus = load_corpus(run.commits, run.prs, loaded.config);
  if (loaded.corpus.empty()) {
    throw CorpusError("corpus is empty after cleaning; nothing to analyze");
  }
  return loaded;
}

std::string drop_header(const std::string& csv) {
  auto const eol = csv.find('\n');
  return eol == std::string::npos ? std::string{} : csv.substr(eol + 1);
}

}  // namespace

OutputFiles cmd_simulate(const RunConfig& run) {
  if (run.recommenders.empty()) {
    throw std::invalid_argument("at least one --recommender is required");
  }
  run.params.validate();
  auto const [config, corpus] = load(run);
  auto const actual = replay_actual(corpus);
  auto const calendar = QuarterCalendar::for_corpus(corpus, config);
  auto const timeline = ActivityTimeline::from_corpus(corpus);

  OutputFiles files;
  std::vector<RecommenderReports> quarterly;
  std::vector<RunSummary> summaries;
  for (auto const& name : run.recommenders) {
    auto const simulated = run_simulation(corpus, name, run.params, run.seed);
    auto reports = quarter_reports(actual, simulated, calendar, timeline);
    summaries.push_back(summarize(simulated, reports));
    files[fmt::format("replacements_{}.csv", name)] = replacement_log_csv(simulated.replacement_log);
    quarterly.push_back({name, std::move(reports)});
  }
  files["quarterly.csv"] = quarterly_csv(quarterly);
  files["summary.csv"] = summary_csv(summaries);
  files["provenance.csv"] = provenance_csv(corpus.summary);
  return files;
}

OutputFiles cmd_analyze(const RunConfig& run) {
  auto const [config, corpus] = load(run);
  auto periods = run.periods;
  if (periods.empty()) {
    periods = {Period::day, Period::week, Period::month, Period::quarter};
  }
  std::vector<WorkloadReport> workload;
  for (auto const period : periods) {
    workload.push_back(workload_distribution(corpus, period, config));
  }
  auto const ledger = build_actual_ledger(corpus);
  auto const calendar = QuarterCalendar::for_corpus(corpus, config);
  auto const timeline = ActivityTimeline::from_corpus(corpus);

  OutputFiles files;
  files["far_history.csv"] = far_comparison_csv(historical_far_comparison(corpus, config));
  files["workload.csv"] = workload_csv(workload);
  files["workload_lorenz.csv"] = workload_lorenz_csv(workload);
  files["lorenz.csv"] = lorenz_csv(quarterly_lorenz(corpus, config));
  files["ledger_snapshot.csv"] = ledger_snapshot_csv(ledger, calendar, timeline);
  files["provenance.csv"] = provenance_csv(corpus.summary);
  return files;
}

OutputFiles cmd_sensitivity(const RunConfig& run) {
  run.params.validate();
  auto recommenders = run.recommenders;
  if (recommenders.empty()) {
    recommenders = {"sofia"};
  }
  auto const [config, corpus] = load(run);
  std::string csv;
  for (auto const& name : recommenders) {
    auto const rows = k_sensitivity(corpus, config, name, run.params, run.seed, run.k_first, run.k_last);
    auto const part = sensitivity_csv(name, rows);
    csv += csv.empty() ? part : drop_header(part);
  }
  return {{"sensitivity.csv", csv}};
}

OutputFiles cmd_synth(const RunConfig& run) {
  auto params = run.synth;
  params.seed = run.seed;
  auto const corpus = generate_corpus(params);
  return {{"commits.jsonl", commits_jsonl(corpus)}, {"prs.jsonl", prs_jsonl(corpus)}};
}

void write_outputs(const std::filesystem::path& dir, const OutputFiles& files) {
  std::filesystem::create_directories(dir);
  for (auto const& [name, contents] : files) {
    auto const path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << contents;
    if (!out) {
      throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Replay code-review history under reviewer recommenders"};
  app.name("revsim");
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(1, 1);

  auto* simulate = app.add_subcommand("simulate", "Seeded one-reviewer-replacement simulation");
  auto* analyze = app.add_subcommand("analyze", "Historical files-at-risk and workload analyses");
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  auto* sensitivity = app.add_subcommand("sensitivity", "Sweep k for sofia or sofiawl");

  RunConfig run;
  std::string commits;
  std::string prs;
  std::string aliases;
  std::vector<std::string> periods;
  std::string out_dir = ".";

  CLI::Validator const known_recommender(
      [](std::string& name) {
        return is_known_recommender(name) ? std::string{}
                                          : fmt::format("unknown recommender '{}'", name);
      },
      "NAME");
  CLI::Validator const known_period(
      [](std::string& name) {
        return parse_period(name) ? std::string{} : fmt::format("unknown period '{}'", name);
      },
      "day|week|month|quarter");

  app.add_option("--commits", commits, "Commit events (JSONL)");
  app.add_option("--prs", prs, "Pull request events (JSONL)");
  app.add_option("--aliases", aliases, "Identity alias table (JSON object)");
  app.add_option("--recommender", run.recommenders, "Recommender name; repeatable")
      ->delimiter(',')
      ->check(known_recommender);
  app.add_option("--seed", run.seed, "Seed for replacement and generation")->capture_default_str();
  app.add_option("--k", run.params.k, "Sofia files-at-risk threshold")->capture_default_str();
  app.add_option("--theta", run.params.theta, "WhoDo load weight")->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--period", periods, "Workload period; repeatable")
      ->delimiter(',')
      ->check(known_period);
  app.add_option("--k-from", run.k_first, "First k of the sweep")->capture_default_str();
  app.add_option("--k-to", run.k_last, "Last k of the sweep")->capture_default_str();

  auto& sp = run.synth;
  app.add_option("--devs", sp.devs, "Team size")->capture_default_str();
  app.add_option("--files", sp.files, "Number of files")->capture_default_str();
  app.add_option("--directories", sp.directories, "Number of directories")->capture_default_str();
  app.add_option("--quarters", sp.quarters, "Quarters of history")->capture_default_str();
  app.add_option("--prs-per-quarter", sp.prs_per_quarter, "Pull requests per quarter")
      ->capture_default_str();
  app.add_option("--commits-per-quarter", sp.commits_per_quarter, "Extra commits per quarter")
      ->capture_default_str();
  app.add_option("--review-rate", sp.review_rate, "Probability that a PR is reviewed")
      ->capture_default_str();
  app.add_option("--max-reviewers", sp.max_reviewers, "Reviewers per PR, at most")
      ->capture_default_str();
  app.add_option("--turnover", sp.turnover_rate, "Annual leave probability")->capture_default_str();
  app.add_option("--skew", sp.skew, "Review concentration in [0, 1]")->capture_default_str();
  app.add_option("--noise", sp.noise, "Probability of touching a file outside home")
      ->capture_default_str();
  app.add_option("--file-skew", sp.file_skew, "Zipf exponent of file change frequency")
      ->capture_default_str();
  app.add_option("--junior-churn", sp.junior_churn, "How much more often juniors leave, in [0, 1]")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    run.commits = commits;
    run.prs = prs;
    if (!aliases.empty()) {
      run.aliases = aliases;
    }
    for (auto const& p : periods) {
      run.periods.push_back(*parse_period(p));
    }
    run.out = out_dir;

    OutputFiles files;
    if (simulate->parsed()) {
      files = cmd_simulate(run);
    } else if (analyze->parsed()) {
      files = cmd_analyze(run);
    } else if (sensitivity->parsed()) {
      files = cmd_sensitivity(run);
    } else if (synth->parsed()) {
      files = cmd_synth(run);
    }
    write_outputs(run.out, files);
    for (auto const& [name, contents] : files) {
      out << (run.out / name).string() << '\n';
    }
    return 0;
  } catch (const std::exception& e) {
    err << "revsim: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace revsim
