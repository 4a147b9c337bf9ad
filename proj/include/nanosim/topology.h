#ifndef NANOSIM_TOPOLOGY_H
#define NANOSIM_TOPOLOGY_H

#include "nanosim/config.h"
#include "nanosim/types.h"

#include <cstdint>
#include <vector>

namespace nanosim
{

/// Node placement and radio adjacency of one deployment. Index 0 is the NC.
struct Topology
{
  std::vector<Position> positions;
  std::vector<std::vector<NodeId>> neighbors; ///< sorted by id
  std::vector<NodeId> sources;
  int bucket = 0;
  double commRange = 0.0;

  std::size_t Size () const { return positions.size (); }
  bool Adjacent (NodeId a, NodeId b) const;
  double DistanceToNc (NodeId id) const { return Distance (positions[Index (id)], positions[0]); }
};

/// Pairs within `range` (inclusive) are adjacent; range 0 yields no links.
std::vector<std::vector<NodeId>> BuildAdjacency (const std::vector<Position> &positions,
                                                 double range);

/**
 * Uniform deployment in the square plus the NC. For bucket d >= 1 the last
 * `sourcesPerBucket` nanonodes are the traffic sources, drawn uniformly from
 * the ring d-1 < |p - NC| <= d clipped to x in [0, NC.x], y in [0, area].
 * The background deployment depends on `seed` only, so every bucket of a
 * run shares it. Bucket 0 places no sources.
 */
Topology BuildTopology (const ScenarioConfig &config, std::uint64_t seed, int bucket);

/// Stateless 64-bit mixer used to derive independent RNG streams.
std::uint64_t MixSeed (std::uint64_t a, std::uint64_t b);

/**
 * splitmix64 generator. Used for the per-frame radio stream, where it is
 * several times cheaper than std::mt19937_64.
 */
class SplitMix64
{
public:
  using result_type = std::uint64_t;

  explicit SplitMix64 (std::uint64_t seed) : m_state (seed) {}

  static constexpr result_type min () { return 0; }
  static constexpr result_type max () { return ~result_type{0}; }

  result_type operator() ()
  {
    std::uint64_t z = (m_state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t m_state;
};

} // namespace nanosim

#endif /* NANOSIM_TOPOLOGY_H */
