#include "nanosim/topology.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace nanosim
{

bool
Topology::Adjacent (NodeId a, NodeId b) const
{
  const auto &n = neighbors[Index (a)];
  return std::binary_search (n.begin (), n.end (), b,
                             [] (NodeId x, NodeId y) { return Index (x) < Index (y); });
}

std::vector<std::vector<NodeId>>
BuildAdjacency (const std::vector<Position> &positions, double range)
{
  std::vector<std::vector<NodeId>> adj (positions.size ());
  if (range <= 0.0)
    {
      return adj;
    }
  for (std::uint32_t i = 0; i < positions.size (); ++i)
    {
      for (std::uint32_t j = i + 1; j < positions.size (); ++j)
        {
          if (Distance (positions[i], positions[j]) <= range)
            {
              adj[i].push_back (MakeNodeId (j));
              adj[j].push_back (MakeNodeId (i));
            }
        }
    }
  for (auto &n : adj)
    {
      std::sort (n.begin (), n.end (), [] (NodeId x, NodeId y) { return Index (x) < Index (y); });
    }
  return adj;
}

std::uint64_t
MixSeed (std::uint64_t a, std::uint64_t b)
{
  // splitmix64 finalizer over a combined state
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Topology
BuildTopology (const ScenarioConfig &config, std::uint64_t seed, int bucket)
{
  if (bucket < 0)
    {
      throw InvalidInput ("bucket must be non-negative");
    }
  Topology topo;
  topo.bucket = bucket;
  topo.commRange = config.commRange;
  topo.positions.reserve (config.nodeCount + 1);
  topo.positions.push_back (config.ncPosition);

  const std::uint32_t sources = bucket == 0 ? 0 : config.sourcesPerBucket;
  const std::uint32_t background = config.nodeCount - sources;

  std::mt19937_64 bgRng (MixSeed (seed, 0x6267));
  std::uniform_real_distribution<double> coord (0.0, config.areaSize);
  for (std::uint32_t i = 0; i < background; ++i)
    {
      const double x = coord (bgRng);
      const double y = coord (bgRng);
      topo.positions.push_back ({x, y});
    }

  if (sources > 0)
    {
      std::mt19937_64 srcRng (MixSeed (seed, 0x7372630000ULL + static_cast<std::uint64_t> (bucket)));
      const double rIn = bucket - 1.0;
      const double rOut = bucket;
      std::uniform_real_distribution<double> r2 (rIn * rIn, rOut * rOut);
      std::uniform_real_distribution<double> angle (0.0, 2.0 * std::numbers::pi);
      const double xMax = std::max (config.areaSize, config.ncPosition.x);
      std::uint32_t placed = 0;
      std::uint64_t tries = 0;
      while (placed < sources)
        {
          if (++tries > 1000000)
            {
              throw InvalidInput ("distance bucket " + std::to_string (bucket) +
                                  " does not intersect the deployment area");
            }
          const double r = std::sqrt (r2 (srcRng));
          const double a = angle (srcRng);
          Position p{config.ncPosition.x + r * std::cos (a), config.ncPosition.y + r * std::sin (a)};
          if (r <= rIn || p.x < 0.0 || p.x > xMax || p.y < 0.0 || p.y > config.areaSize)
            {
              continue;
            }
          topo.sources.push_back (MakeNodeId (static_cast<std::uint32_t> (topo.positions.size ())));
          topo.positions.push_back (p);
          ++placed;
        }
    }

  topo.neighbors = BuildAdjacency (topo.positions, config.commRange);
  return topo;
}

} // namespace nanosim
