#include "revsim/synth.hpp"

#include "revsim/time.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace revsim {

void SynthParams::validate() const {
  auto const require = [](bool ok, std::string_view what) {
    if (!ok) throw SynthError(fmt::format("invalid synth parameter: {}", what));
  };
  auto const unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  require(devs >= 2 && devs <= 200, "devs must be in [2, 200]");
  require(files >= 1, "files must be at least 1");
  require(directories >= 1 && directories <= files, "directories must be in [1, files]");
  require(quarters >= 1, "quarters must be at least 1");
  require(prs_per_quarter >= 0, "prs_per_quarter must be non-negative");
  require(commits_per_quarter >= 0, "commits_per_quarter must be non-negative");
  require(unit(review_rate), "review_rate must be in [0, 1]");
  require(max_reviewers >= 1, "max_reviewers must be at least 1");
  require(unit(turnover_rate), "turnover_rate must be in [0, 1]");
  require(unit(skew), "skew must be in [0, 1]");
  require(unit(noise), "noise must be in [0, 1]");
  require(file_skew >= 0.0, "file_skew must be non-negative");
  require(directory_affinity > 0.0, "directory_affinity must be positive");
  require(unit(junior_churn), "junior_churn must be in [0, 1]");
}

namespace {

// std distributions differ between standard libraries; the engine does not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  bool chance(double p) { return uniform() < p; }
  std::chrono::seconds seconds_below(std::chrono::seconds span) {
    return std::chrono::seconds{static_cast<std::int64_t>(uniform() * static_cast<double>(span.count()))};
  }
  std::size_t weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double target = uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      if (target < weights[i]) return i;
      target -= weights[i];
    }
    for (std::size_t i = weights.size(); i-- > 0;) {
      if (weights[i] > 0.0) return i;
    }
    return 0;
  }

 private:
  std::mt19937_64 engine_;
};

struct Developer {
  int number = 0;
  int home = 0;
  /// Works through the current quarter, authoring only the mandatory PR, then leaves.
  bool leaving = false;
  std::string name() const { return fmt::format("Dev {:03}", number); }
  std::string email() const { return fmt::format("dev{:03}@example.com", number); }
  std::string key() const { return fmt::format("dev{:03}", number); }
};

Instant quarter_start(int q) {
  using namespace std::chrono;
  year_month ym = year{2020} / January;
  ym += months{3 * q};
  return Instant{sys_days{ym / 1}};
}

class Generator {
 public:
  explicit Generator(const SynthParams& p) : p_(p), rng_(p.seed) {
    for (int f = 0; f < p_.files; ++f) {
      int const dir = f % p_.directories;
      paths_.push_back(fmt::format("src/mod{}/file{:02}.cpp", dir, f));
      by_dir_.resize(static_cast<std::size_t>(p_.directories));
      by_dir_[static_cast<std::size_t>(dir)].push_back(f);
    }
    for (auto const& pool : by_dir_) {
      auto& weights = file_weight_.emplace_back();
      for (std::size_t i = 0; i < pool.size(); ++i) {
        weights.push_back(std::pow(static_cast<double>(i + 1), -p_.file_skew));
      }
    }
    for (int s = 0; s < p_.devs; ++s) {
      slot_weight_.push_back(std::pow(static_cast<double>(s + 1), -3.0 * p_.skew));
    }
  }

  SynthCorpus run() {
    double const quarterly_leave = 1.0 - std::pow(1.0 - p_.turnover_rate, 0.25);
    for (int q = 0; q < p_.quarters; ++q) {
      // team_ is ordered by seniority, so newcomers start with the lightest review load.
      std::erase_if(team_, [&](const Developer& dev) {
        if (dev.leaving) out_.departed.push_back(dev.key());
        return dev.leaving;
      });
      while (team_.size() < static_cast<std::size_t>(p_.devs)) {
        team_.push_back(newcomer());
      }
      // Leave probability grows linearly with seniority rank around the mean rate.
      double const last_rank = std::max(1.0, static_cast<double>(team_.size() - 1));
      for (std::size_t rank = 0; rank < team_.size(); ++rank) {
        double const tilt = 2.0 * static_cast<double>(rank) / last_rank - 1.0;
        team_[rank].leaving = rng_.chance(quarterly_leave * (1.0 + p_.junior_churn * tilt));
      }
      staying_.clear();
      for (std::size_t i = 0; i < team_.size(); ++i) {
        if (!team_[i].leaving) staying_.push_back(i);
      }
      if (staying_.empty()) {
        for (std::size_t i = 0; i < team_.size(); ++i) staying_.push_back(i);
      }
      quarter(q);
    }
    return std::move(out_);
  }

 private:
  // Numbers are drawn at random so that key order, which breaks score ties,
  // says nothing about seniority.
  Developer newcomer() {
    int number = 0;
    do {
      number = 1 + static_cast<int>(rng_.below(999));
    } while (!used_numbers_.insert(number).second);
    return Developer{number, static_cast<int>(rng_.below(static_cast<std::size_t>(p_.directories)))};
  }

  int pick_file(int dir) {
    if (rng_.chance(p_.noise)) {
      return static_cast<int>(rng_.below(paths_.size()));
    }
    auto const d = static_cast<std::size_t>(dir);
    return by_dir_[d][rng_.weighted(file_weight_[d])];
  }

  std::vector<std::string> pick_files(int dir, std::size_t max_count) {
    std::set<int> chosen;
    std::size_t const n = 1 + rng_.below(max_count);
    for (std::size_t i = 0; i < n; ++i) {
      chosen.insert(pick_file(dir));
    }
    std::vector<std::string> out;
    for (int f : chosen) out.push_back(paths_[static_cast<std::size_t>(f)]);
    return out;
  }

  void commit(const Developer& dev, Instant at, std::vector<std::string> files) {
    RawCommit c;
    c.id = fmt::format("c{:06}", ++commit_count_);
    c.author_name = dev.name();
    c.author_email = dev.email();
    c.timestamp = format_instant(at);
    c.files = std::move(files);
    out_.commits.push_back(std::move(c));
  }

  void quarter(int q) {
    using namespace std::chrono;
    Instant const start = quarter_start(q);
    // Leave room for the longest review so merges stay inside the quarter.
    auto const span = duration_cast<seconds>(quarter_start(q + 1) - start) - days{9};

    // Every active developer authors at least one PR per quarter, so nobody
    // looks like a leaver unless they actually left.
    for (std::size_t slot = 0; slot < team_.size(); ++slot) {
      pull_request(slot, start + rng_.seconds_below(span));
    }
    for (int i = 0; i < p_.prs_per_quarter; ++i) {
      pull_request(staying_[rng_.below(staying_.size())], start + rng_.seconds_below(span));
    }
    for (int i = 0; i < p_.commits_per_quarter; ++i) {
      auto const& dev = team_[staying_[rng_.below(staying_.size())]];
      commit(dev, start + rng_.seconds_below(span), pick_files(dev.home, 3));
    }
  }

  void pull_request(std::size_t author_slot, Instant created) {
    using namespace std::chrono;
    Developer const author = team_[author_slot];
    int const dir = rng_.chance(p_.noise) ? static_cast<int>(rng_.below(static_cast<std::size_t>(p_.directories)))
                                          : author.home;
    Instant const merged = created + hours{1} + rng_.seconds_below(days{7});

    RawPullRequest pr;
    pr.id = fmt::format("pr{:05}", ++pr_count_);
    pr.author_name = author.name();
    pr.author_email = author.email();
    pr.created_at = format_instant(created);
    pr.merged_at = format_instant(merged);
    pr.files = pick_files(dir, 4);

    if (rng_.chance(p_.review_rate)) {
      std::vector<double> weights(team_.size());
      for (std::size_t s = 0; s < team_.size(); ++s) {
        double const affinity = team_[s].home == dir ? p_.directory_affinity : 1.0;
        weights[s] = s == author_slot ? 0.0 : slot_weight_[s] * affinity;
      }
      auto const limit = std::min<std::size_t>(static_cast<std::size_t>(p_.max_reviewers), team_.size() - 1);
      std::size_t const n = 1 + rng_.below(limit);
      for (std::size_t r = 0; r < n; ++r) {
        std::size_t const slot = rng_.weighted(weights);
        weights[slot] = 0.0;
        auto const& reviewer = team_[slot];
        std::size_t const events = 1 + rng_.below(3);
        for (std::size_t e = 0; e < events; ++e) {
          RawReview review;
          review.reviewer_name = reviewer.name();
          review.reviewer_email = reviewer.email();
          review.timestamp = format_instant(created + rng_.seconds_below(duration_cast<seconds>(merged - created)));
          if (rng_.chance(0.7)) {
            review.file = pr.files[rng_.below(pr.files.size())];
          }
          pr.reviews.push_back(std::move(review));
        }
      }
    }
    commit(author, merged, pr.files);
    out_.pull_requests.push_back(std::move(pr));
  }

  const SynthParams& p_;
  Rng rng_;
  std::vector<std::string> paths_;
  std::vector<std::vector<int>> by_dir_;
  std::vector<std::vector<double>> file_weight_;
  std::vector<double> slot_weight_;
  std::vector<Developer> team_;
  std::vector<std::size_t> staying_;
  std::set<int> used_numbers_;
  int commit_count_ = 0;
  int pr_count_ = 0;
  SynthCorpus out_;
};

}  // namespace

SynthCorpus generate_corpus(const SynthParams& params) {
  params.validate();
  return Generator(params).run();
}

std::string commits_jsonl(const SynthCorpus& corpus) {
  std::string out;
  for (auto const& c : corpus.commits) {
    out += to_jsonl_line(c);
    out += '\n';
  }
  return out;
}

std::string prs_jsonl(const SynthCorpus& corpus) {
  std::string out;
  for (auto const& pr : corpus.pull_requests) {
    out += to_jsonl_line(pr);
    out += '\n';
  }
  return out;
}

CleanCorpus synth_clean(const SynthParams& params, const CorpusConfig& config) {
  auto const raw = generate_corpus(params);
  std::istringstream commits(commits_jsonl(raw));
  std::istringstream prs(prs_jsonl(raw));
  return clean_corpus(commits, prs, config, "synth-commits", "synth-prs");
}

}  // namespace revsim
