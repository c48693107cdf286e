#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bimod/modularity.hpp"

namespace bimod {

struct LambdaSweep {
  double start = 1.0;
  double stop = 1.0;
  double step = 0.5;

  /// Parses "start:stop:step". Throws UsageError.
  static LambdaSweep parse(const std::string& spec);
  void validate() const;
  std::vector<double> values() const;
};

/// Everything a command needs; mirrors the command-line flags.
struct RunConfig {
  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> train;
  std::optional<std::filesystem::path> test;
  std::optional<std::filesystem::path> seeds;
  /// Stoplist file; "none" disables stop-word removal, unset means SMART.
  std::optional<std::string> stoplist;
  bool stem = true;
  std::size_t min_df = 5;
  bool bigrams = false;
  double lambda = 1.0;
  std::optional<std::filesystem::path> lambda_file;
  std::optional<LambdaSweep> sweep;
  std::optional<std::size_t> n_clusters;
  Schedule schedule = Schedule::kInterleaved;
  std::uint64_t seed = 0;
  bool final_pass = false;
  std::filesystem::path out = "bimod_out";
  /// Cap on concurrent sweep points (BIMOD_THREADS); 0 means OpenMP default.
  unsigned threads = 0;

  nlohmann::json to_json() const;
};

/// Exit codes.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitInternal = 3 };

int cmd_cluster(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);
int cmd_classify(const RunConfig& cfg);

/// Parses arguments, dispatches, and maps errors to exit codes.
int run_cli(int argc, const char* const* argv);

}  // namespace bimod
