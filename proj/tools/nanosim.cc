#include "nanosim/config.h"
#include "nanosim/runner.h"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{

enum ExitCode
{
  kOk = 0,
  kFailure = 1,
  kBadArguments = 2,
  kUnreadableConfig = 3,
  kInvalidConfig = 4,
  kUnwritableOutput = 5,
};

std::shared_ptr<spdlog::logger>
MakeLogger ()
{
  auto logger = spdlog::stderr_color_mt ("nanosim");
  logger->set_pattern ("%^[%l]%$ %v");
  logger->set_level (spdlog::level::warn);
  if (const char *env = std::getenv ("NANOSIM_LOG_LEVEL"))
    {
      const std::string name (env);
      if (name == "error" || name == "warn" || name == "info" || name == "debug")
        {
          logger->set_level (spdlog::level::from_str (name));
        }
      else
        {
          logger->warn ("ignoring NANOSIM_LOG_LEVEL='{}' (expected error, warn, info or debug)", name);
        }
    }
  return logger;
}

struct RunArgs
{
  std::string config;
  std::string protocols = "rmrls,sfr,random";
  std::string seeds = "1";
  std::string out = "results";
  std::optional<double> simTime;
  std::vector<std::string> overrides;
  std::string logDetail = "packets";
};

/// Loads the config file and applies command-line overrides.
int
BuildConfig (const RunArgs &args, spdlog::logger &log, nanosim::ScenarioConfig &config)
{
  try
    {
      config = args.config.empty () ? nanosim::ScenarioConfig{} : nanosim::LoadConfig (args.config);
    }
  catch (const nanosim::FileError &e)
    {
      log.error ("{}", e.what ());
      return kUnreadableConfig;
    }
  catch (const nanosim::InvalidInput &e)
    {
      log.error ("invalid config: {}", e.what ());
      return kInvalidConfig;
    }
  try
    {
      for (const std::string &o : args.overrides)
        {
          nanosim::ApplyOverride (config, o);
        }
      if (args.simTime)
        {
          config.simTime = *args.simTime;
        }
      config.Validate ();
    }
  catch (const nanosim::InvalidInput &e)
    {
      log.error ("invalid config: {}", e.what ());
      return kInvalidConfig;
    }
  return kOk;
}

int
Run (const RunArgs &args, spdlog::logger &log)
{
  nanosim::BatchOptions options;
  try
    {
      options.protocols = nanosim::ParseProtocols (args.protocols);
      options.seeds = nanosim::ParseSeeds (args.seeds);
      options.fileDetail = nanosim::ParseLogDetail (args.logDetail);
    }
  catch (const nanosim::InvalidInput &e)
    {
      log.error ("{}", e.what ());
      return kBadArguments;
    }
  if (const int rc = BuildConfig (args, log, options.config); rc != kOk)
    {
      return rc;
    }
  options.outDir = args.out;
  options.progress = [&log] (const std::string &msg) { log.info ("{}", msg); };

  try
    {
      const nanosim::BatchResult result = nanosim::RunBatch (options);
      log.info ("wrote {} logs, {} and {}", result.logs.size (), result.csv.string (),
                result.manifest.string ());
    }
  catch (const nanosim::FileError &e)
    {
      log.error ("{}", e.what ());
      return kUnwritableOutput;
    }
  catch (const std::exception &e)
    {
      log.error ("run failed: {}", e.what ());
      return kFailure;
    }
  return kOk;
}

} // namespace

int
main (int argc, char **argv)
{
  auto log = MakeLogger ();

  CLI::App app{"Nanosensor network routing simulator"};
  app.set_version_flag ("--version", std::string (nanosim::kVersion));
  app.require_subcommand (1);

  RunArgs args;
  CLI::App *run = app.add_subcommand ("run", "Run protocols over seeds and write logs, metrics.csv and manifest.json");
  run->add_option ("--config", args.config, "INI scenario file")->required ();
  run->add_option ("--protocols", args.protocols, "Comma-separated list of rmrls, sfr, random")
      ->capture_default_str ();
  run->add_option ("--seeds", args.seeds, "Seeds such as 1..10 or 1,4,7")->capture_default_str ();
  run->add_option ("--out", args.out, "Output directory")->capture_default_str ();
  run->add_option ("--sim-time", args.simTime, "Simulated seconds per distance bucket");
  run->add_option ("--override", args.overrides, "section.key=value, repeatable");
  run->add_option ("--log-detail", args.logDetail, "none, summary, packets, control or full")
      ->capture_default_str ();

  RunArgs showArgs;
  CLI::App *show = app.add_subcommand ("show-config", "Print the effective configuration");
  show->add_option ("--config", showArgs.config, "INI scenario file");
  show->add_option ("--sim-time", showArgs.simTime, "Simulated seconds per distance bucket");
  show->add_option ("--override", showArgs.overrides, "section.key=value, repeatable");

  try
    {
      app.parse (argc, argv);
    }
  catch (const CLI::ParseError &e)
    {
      const int rc = app.exit (e);
      return rc == 0 ? kOk : kBadArguments;
    }

  if (*run)
    {
      return Run (args, *log);
    }
  nanosim::ScenarioConfig config;
  if (const int rc = BuildConfig (showArgs, *log, config); rc != kOk)
    {
      return rc;
    }
  std::cout << "# config hash " << std::hex << nanosim::ConfigHash (config) << std::dec << '\n'
            << nanosim::DumpConfig (config);
  return kOk;
}
