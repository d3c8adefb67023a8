#pragma once

#include "revsim/metrics.hpp"
#include "revsim/recommenders.hpp"
#include "revsim/simulator.hpp"
#include "revsim/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace revsim {

/// Everything a subcommand needs, after flags and the config file are merged.
struct RunConfig {
  std::filesystem::path commits;
  std::filesystem::path prs;
  std::optional<std::filesystem::path> aliases;
  std::vector<std::string> recommenders;
  std::uint64_t seed = kDefaultSeed;
  RecommenderParams params;
  std::vector<Period> periods;
  std::filesystem::path out = ".";
  int k_first = 1;
  int k_last = 8;
  SynthParams synth;
};

/// Output file name -> contents.
using OutputFiles = std::map<std::string, std::string>;

/// Each command computes every output before anything is written.
OutputFiles cmd_simulate(const RunConfig& config);
OutputFiles cmd_analyze(const RunConfig& config);
OutputFiles cmd_sensitivity(const RunConfig& config);
OutputFiles cmd_synth(const RunConfig& config);

void write_outputs(const std::filesystem::path& dir, const OutputFiles& files);

/// Parses arguments, runs the subcommand and writes its outputs.
/// Returns the process exit status; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace revsim
