#include "nanosim/runner.h"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nanosim;
namespace fs = std::filesystem;

namespace
{

ScenarioConfig
Tiny ()
{
  ScenarioConfig c;
  c.nodeCount = 60;
  c.sourcesPerBucket = 4;
  c.buckets = {1, 3};
  c.simTime = 2.0;
  return c;
}

std::string
Slurp (const fs::path &p)
{
  std::ifstream in (p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf ();
  return ss.str ();
}

fs::path
Scratch (const std::string &name)
{
  const fs::path dir = fs::temp_directory_path () / ("nanosim-runner-" + name);
  fs::remove_all (dir);
  return dir;
}

} // namespace

TEST_CASE ("seed lists")
{
  CHECK (ParseSeeds ("1..4") == std::vector<std::uint64_t>{1, 2, 3, 4});
  CHECK (ParseSeeds ("3, 5,8") == std::vector<std::uint64_t>{3, 5, 8});
  CHECK (ParseSeeds ("1..2,7") == std::vector<std::uint64_t>{1, 2, 7});
  CHECK_THROWS_AS (ParseSeeds ("5..2"), InvalidInput);
  CHECK_THROWS_AS (ParseSeeds ("x"), InvalidInput);
  CHECK_THROWS_AS (ParseSeeds (""), InvalidInput);
}

TEST_CASE ("protocol lists")
{
  CHECK (ParseProtocols ("rmrls,sfr") ==
         std::vector<ProtocolKind>{ProtocolKind::kRmrls, ProtocolKind::kSfr});
  CHECK (ParseProtocols ("random, rmrls, random").size () == 2);
  CHECK_THROWS_AS (ParseProtocols ("rmrls,flood"), InvalidInput);
  CHECK (LogFileName (ProtocolKind::kRandomNextHop, 4) == "random_next_hop-seed4.ndjson");
}

TEST_CASE ("config hash follows the canonical dump")
{
  ScenarioConfig a;
  ScenarioConfig b;
  CHECK (ConfigHash (a) == ConfigHash (b));
  b.simTime = 30.0;
  CHECK (ConfigHash (a) != ConfigHash (b));
}

TEST_CASE ("a batch writes logs, metrics and a manifest")
{
  BatchOptions opt;
  opt.config = Tiny ();
  opt.protocols = {ProtocolKind::kRmrls, ProtocolKind::kSfr};
  opt.seeds = {1, 2};
  opt.outDir = Scratch ("batch");
  const BatchResult r = RunBatch (opt);
  CHECK (r.logs.size () == 4);
  for (const auto &p : r.logs)
    {
      CHECK (fs::file_size (p) > 0);
    }
  CHECK (r.rows.size () == 4);

  const std::string csv = Slurp (r.csv);
  std::istringstream lines (csv);
  std::string header;
  std::getline (lines, header);
  CHECK (header == "protocol,distance_bucket,energy_per_bit,delivery_ratio,avg_throughput,seeds,"
                   "energy_per_bit_stderr,delivery_ratio_stderr,avg_throughput_stderr");
  int rows = 0;
  for (std::string line; std::getline (lines, line);)
    {
      ++rows;
      CHECK (std::count (line.begin (), line.end (), ',') == 8);
    }
  CHECK (rows == 4);

  const auto manifest = nlohmann::json::parse (Slurp (r.manifest));
  std::ostringstream hash;
  hash << std::hex << ConfigHash (opt.config);
  CHECK (manifest["config_hash"] == hash.str ());
  CHECK (manifest["seeds"] == std::vector<int>{1, 2});
  CHECK (manifest["version"] == kVersion);
  CHECK (manifest["logs"].size () == 4);

  opt.outDir = Scratch ("batch-again");
  CHECK (Slurp (RunBatch (opt).csv) == csv);
  fs::remove_all (Scratch ("batch"));
  fs::remove_all (opt.outDir);
}

TEST_CASE ("CSV totals match a replay of the written logs")
{
  BatchOptions opt;
  opt.config = Tiny ();
  opt.protocols = {ProtocolKind::kRandomNextHop};
  opt.seeds = {3};
  opt.outDir = Scratch ("replay");
  const BatchResult r = RunBatch (opt);

  struct Sums
  {
    double energy = 0.0;
    double bits = 0.0;
    double generated = 0.0;
    double delivered = 0.0;
  };
  std::map<int, Sums> sums;
  std::ifstream in (r.logs.at (0));
  for (std::string line; std::getline (in, line);)
    {
      const auto j = nlohmann::json::parse (line);
      Sums &s = sums[j["bucket"].get<int> ()];
      if (j["type"] == "energy")
        {
          s.energy += j["debited"].get<double> ();
        }
      else if (j["type"] == "pkt")
        {
          s.generated += 1.0;
          if (j["delivered"].get<bool> ())
            {
              s.delivered += 1.0;
              s.bits += j["bits"].get<double> ();
            }
        }
    }
  for (const MetricsRow &row : r.rows)
    {
      const Sums &s = sums.at (row.bucket);
      REQUIRE (s.bits > 0.0);
      CHECK (row.energyPerBit == doctest::Approx (s.energy / s.bits).epsilon (1e-12));
      CHECK (row.deliveryRatio == doctest::Approx (s.delivered / s.generated).epsilon (1e-12));
      CHECK (row.avgThroughput ==
             doctest::Approx (s.bits / opt.config.simTime).epsilon (1e-12));
    }
  fs::remove_all (opt.outDir);
}

TEST_CASE ("an unusable output directory raises a file error")
{
  const fs::path blocker = Scratch ("blocker");
  {
    std::ofstream f (blocker);
    f << "x";
  }
  BatchOptions opt;
  opt.config = Tiny ();
  opt.protocols = {ProtocolKind::kSfr};
  opt.seeds = {1};
  opt.outDir = blocker / "out";
  CHECK_THROWS_AS (RunBatch (opt), FileError);
  fs::remove (blocker);
}
