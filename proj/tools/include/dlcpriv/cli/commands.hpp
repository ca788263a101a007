#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlcpriv/cli/config.hpp"
#include "dlcpriv/cli/csv.hpp"

namespace dlcpriv::cli {

struct CommonOptions {
  std::optional<std::string> config;   ///< simulation config path
  std::optional<std::uint64_t> seed;   ///< overrides seeds.base
  std::string out = "dlcpriv";
  int threads = 0;
};

struct SweepCommandOptions {
  std::vector<double> h_list{1, 2, 5, 10, 15, 30, 60};
  std::size_t trials = 500;
  bool check_comfort = true;
};

struct PrivacyCommandOptions {
  std::string scenario = "recs-income";
  std::optional<std::vector<double>> h_list;  ///< default depends on the scaling rule
  std::optional<std::vector<std::string>> methods;
  std::size_t n_mc = 100000;
  std::optional<std::string> scaling;
};

/// What a command produced. Files are (suffix, contents) pairs, written by
/// the caller as out + suffix; nothing here touches the filesystem except
/// reading inputs.
struct CommandOutput {
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<std::string> warnings;

  const std::string* file(const std::string& suffix) const;
};

CommandOutput cmd_gen_population(const CommonOptions& common);
CommandOutput cmd_simulate(const CommonOptions& common);
CommandOutput cmd_sweep(const CommonOptions& common, const SweepCommandOptions& sweep);
CommandOutput cmd_privacy(const CommonOptions& common, const PrivacyCommandOptions& privacy);
/// Sweep and privacy over one shared h-list, inner-joined on h_min.
CommandOutput cmd_tradeoff(const CommonOptions& common, const SweepCommandOptions& sweep,
                           PrivacyCommandOptions privacy);

/// Writes every file of `output` under `prefix`.
void write_outputs(const std::string& prefix, const CommandOutput& output);

/// Table builders, exposed for tests.
CsvTable trajectory_table(const TrialResult& result, double step_min);
CsvTable sweep_table(const SweepResult& result);
CsvTable privacy_table(const std::vector<privacy::PrivacyRow>& rows);

std::vector<std::string> split_list(const std::string& text);
std::vector<double> parse_number_list(const std::string& text);

}  // namespace dlcpriv::cli
