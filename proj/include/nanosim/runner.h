#ifndef NANOSIM_RUNNER_H
#define NANOSIM_RUNNER_H

#include "nanosim/config.h"
#include "nanosim/metrics.h"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace nanosim
{

inline constexpr const char *kVersion = "0.1.0";

/// "1..10", "3,5,8" or a mix such as "1..3,7".
std::vector<std::uint64_t> ParseSeeds (const std::string &text);
/// Comma-separated protocol names.
std::vector<ProtocolKind> ParseProtocols (const std::string &text);

/// FNV-1a 64 over the canonical config dump.
std::uint64_t ConfigHash (const ScenarioConfig &config);

struct BatchOptions
{
  ScenarioConfig config;
  std::vector<ProtocolKind> protocols;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path outDir;
  /// Detail written to the per-run log files; kNone writes no logs.
  LogDetail fileDetail = LogDetail::kPackets;
  std::function<void (const std::string &)> progress;
};

struct BatchResult
{
  std::vector<MetricsRow> rows;
  std::vector<std::filesystem::path> logs;
  std::filesystem::path csv;
  std::filesystem::path manifest;
};

/// Per-seed metrics of one run, keyed by bucket. `log` receives every
/// record at `fileDetail` or coarser when non-null.
std::map<int, SeedMetrics> RunSeed (const ScenarioConfig &config, std::ostream *log,
                                    LogDetail fileDetail);

/// Runs every (protocol, seed), writes logs, metrics.csv and manifest.json.
BatchResult RunBatch (const BatchOptions &options);

std::string LogFileName (ProtocolKind protocol, std::uint64_t seed);

} // namespace nanosim

#endif /* NANOSIM_RUNNER_H */
