#include "nanosim/runner.h"

#include "nanosim/simulator.h"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace nanosim
{

namespace
{

std::string
Trim (const std::string &s)
{
  const auto b = s.find_first_not_of (" \t");
  const auto e = s.find_last_not_of (" \t");
  return b == std::string::npos ? std::string () : s.substr (b, e - b + 1);
}

std::uint64_t
ParseUnsigned (const std::string &s)
{
  if (s.empty () || !std::all_of (s.begin (), s.end (), [] (unsigned char c) { return std::isdigit (c); }))
    {
      throw InvalidInput ("invalid seed '" + s + "'");
    }
  try
    {
      return std::stoull (s);
    }
  catch (const std::out_of_range &)
    {
      throw InvalidInput ("seed out of range '" + s + "'");
    }
}

std::vector<std::string>
SplitComma (const std::string &text)
{
  std::vector<std::string> parts;
  std::stringstream ss (text);
  std::string item;
  while (std::getline (ss, item, ','))
    {
      item = Trim (item);
      if (!item.empty ())
        {
          parts.push_back (item);
        }
    }
  return parts;
}

} // namespace

std::vector<std::uint64_t>
ParseSeeds (const std::string &text)
{
  std::vector<std::uint64_t> seeds;
  for (const std::string &part : SplitComma (text))
    {
      const auto dots = part.find ("..");
      if (dots == std::string::npos)
        {
          seeds.push_back (ParseUnsigned (part));
          continue;
        }
      const std::uint64_t lo = ParseUnsigned (Trim (part.substr (0, dots)));
      const std::uint64_t hi = ParseUnsigned (Trim (part.substr (dots + 2)));
      if (hi < lo)
        {
          throw InvalidInput ("empty seed range '" + part + "'");
        }
      for (std::uint64_t s = lo; s <= hi; ++s)
        {
          seeds.push_back (s);
        }
    }
  if (seeds.empty ())
    {
      throw InvalidInput ("no seeds given");
    }
  return seeds;
}

std::vector<ProtocolKind>
ParseProtocols (const std::string &text)
{
  std::vector<ProtocolKind> out;
  for (const std::string &part : SplitComma (text))
    {
      const ProtocolKind k = ParseProtocol (part);
      if (std::find (out.begin (), out.end (), k) == out.end ())
        {
          out.push_back (k);
        }
    }
  if (out.empty ())
    {
      throw InvalidInput ("no protocols given");
    }
  return out;
}

std::uint64_t
ConfigHash (const ScenarioConfig &config)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : DumpConfig (config))
    {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  return h;
}

std::string
LogFileName (ProtocolKind protocol, std::uint64_t seed)
{
  std::string name = ToString (protocol);
  std::transform (name.begin (), name.end (), name.begin (),
                  [] (unsigned char c) { return static_cast<char> (std::tolower (c)); });
  return name + "-seed" + std::to_string (seed) + ".ndjson";
}

std::map<int, SeedMetrics>
RunSeed (const ScenarioConfig &config, std::ostream *log, LogDetail fileDetail)
{
  config.Validate ();
  const LogDetail keep = std::max (fileDetail, LogDetail::kPackets);
  std::map<int, SeedMetrics> out;
  for (int bucket : config.buckets)
    {
      EventLog bucketLog (keep);
      BucketSimulation sim (config, bucket, bucketLog);
      sim.Finish ();
      const auto totals = Tally (bucketLog);
      const auto it = totals.find (bucket);
      out[bucket] = ComputeSeedMetrics (it == totals.end () ? BucketTotals{bucket} : it->second,
                                        config.simTime);
      if (log != nullptr && fileDetail != LogDetail::kNone)
        {
          for (const LogRecord &r : bucketLog.Records ())
            {
              if (RequiredDetail (r) <= fileDetail)
                {
                  *log << ToJson (r).dump () << '\n';
                }
            }
        }
    }
  return out;
}

BatchResult
RunBatch (const BatchOptions &options)
{
  BatchResult result;
  std::error_code ec;
  std::filesystem::create_directories (options.outDir, ec);
  if (ec)
    {
      throw FileError ("cannot create output directory '" + options.outDir.string () + "': " +
                       ec.message ());
    }
  {
    const auto probe = options.outDir / ".nanosim-probe";
    std::ofstream test (probe, std::ios::binary | std::ios::trunc);
    if (!test)
      {
        throw FileError ("output directory '" + options.outDir.string () + "' is not writable");
      }
    test.close ();
    std::filesystem::remove (probe, ec);
  }
  std::map<std::pair<ProtocolKind, int>, std::vector<SeedMetrics>> perSeed;

  for (ProtocolKind protocol : options.protocols)
    {
      for (std::uint64_t seed : options.seeds)
        {
          ScenarioConfig cfg = options.config;
          cfg.protocol = protocol;
          cfg.rngSeed = seed;
          if (options.progress)
            {
              options.progress (std::string ("running ") + ToString (protocol) + " seed " +
                                std::to_string (seed));
            }
          std::ofstream file;
          std::ostream *sink = nullptr;
          if (options.fileDetail != LogDetail::kNone)
            {
              const auto path = options.outDir / LogFileName (protocol, seed);
              file.open (path, std::ios::binary | std::ios::trunc);
              if (!file)
                {
                  throw FileError ("cannot write " + path.string ());
                }
              sink = &file;
              result.logs.push_back (path);
            }
          for (const auto &[bucket, m] : RunSeed (cfg, sink, options.fileDetail))
            {
              perSeed[{protocol, bucket}].push_back (m);
            }
        }
    }

  for (ProtocolKind protocol : options.protocols)
    {
      for (int bucket : options.config.buckets)
        {
          result.rows.push_back (Aggregate (protocol, bucket, perSeed.at ({protocol, bucket})));
        }
    }

  result.csv = options.outDir / "metrics.csv";
  {
    std::ofstream csv (result.csv, std::ios::binary | std::ios::trunc);
    if (!csv)
      {
        throw FileError ("cannot write " + result.csv.string ());
      }
    WriteCsv (csv, result.rows);
  }

  nlohmann::json manifest;
  std::ostringstream hash;
  hash << std::hex << ConfigHash (options.config);
  manifest["tool"] = "nanosim";
  manifest["version"] = kVersion;
  manifest["config_hash"] = hash.str ();
  std::vector<std::string> lines;
  std::stringstream dump (DumpConfig (options.config));
  for (std::string line; std::getline (dump, line);)
    {
      lines.push_back (line);
    }
  manifest["config"] = lines;
  std::vector<std::string> protocols;
  for (ProtocolKind p : options.protocols)
    {
      protocols.push_back (ToString (p));
    }
  manifest["protocols"] = protocols;
  manifest["seeds"] = options.seeds;
  manifest["log_detail"] = ToString (options.fileDetail);
  std::vector<std::string> logs;
  for (const auto &p : result.logs)
    {
      logs.push_back (p.filename ().string ());
    }
  manifest["logs"] = logs;
  manifest["metrics"] = "metrics.csv";
#if defined(__VERSION__)
  manifest["compiler"] = __VERSION__;
#endif
  manifest["json_library"] = std::to_string (NLOHMANN_JSON_VERSION_MAJOR) + "." +
                             std::to_string (NLOHMANN_JSON_VERSION_MINOR) + "." +
                             std::to_string (NLOHMANN_JSON_VERSION_PATCH);
  result.manifest = options.outDir / "manifest.json";
  std::ofstream mf (result.manifest, std::ios::binary | std::ios::trunc);
  if (!mf)
    {
      throw FileError ("cannot write " + result.manifest.string ());
    }
  mf << manifest.dump (2) << '\n';
  return result;
}

} // namespace nanosim
