#include "nanosim/similarity.h"

#include <algorithm>
#include <cmath>

namespace nanosim
{

void
SimilarityParams::Validate () const
{
  if (!(kSim > 0.0 && kSim < 1.0) || !(sigma > 0.0 && sigma < 1.0))
    {
      throw InvalidInput ("similarity weights must lie in (0, 1)");
    }
  if (std::abs (kSim + sigma - 1.0) > 1e-12)
    {
      throw InvalidInput ("similarity weights must sum to 1");
    }
}

double
Similarity (const RoutePath &main, const RoutePath &candidate, const SimilarityParams &params)
{
  if (main.hops.size () < 2 || candidate.hops.size () < 2)
    {
      throw InvalidInput ("similarity needs paths with at least two nodes");
    }
  if (main.Source () != candidate.Source () || main.Destination () != candidate.Destination ())
    {
      throw InvalidInput ("similarity needs paths with identical endpoints");
    }
  auto n = static_cast<double> (SharedNodeCount (main, candidate));
  if (params.convention == NodeCountConvention::kExcludeSource)
    {
      n -= 1.0;
    }
  const auto l = static_cast<double> (SharedLinkCount (main, candidate));
  return params.kSim * std::max (0.0, n - 2.0) + params.sigma * l;
}

std::optional<RoutePath>
SelectBackup (const RoutePath &main, std::span<const RoutePath> candidates,
              const SimilarityParams &params)
{
  if (candidates.empty ())
    {
      return std::nullopt;
    }
  const RoutePath *best = nullptr;
  double bestOmega = 0.0;
  for (const auto &c : candidates)
    {
      const double omega = Similarity (main, c, params);
      if (best == nullptr)
        {
          best = &c;
          bestOmega = omega;
          continue;
        }
      bool better = false;
      if (std::abs (omega - bestOmega) > 1e-12)
        {
          better = omega < bestOmega;
        }
      else if (c.totalStability != best->totalStability)
        {
          better = c.totalStability > best->totalStability;
        }
      else if (c.HopCount () != best->HopCount ())
        {
          better = c.HopCount () < best->HopCount ();
        }
      else
        {
          better = HopsLess (c, *best);
        }
      if (better)
        {
          best = &c;
          bestOmega = omega;
        }
    }
  return *best;
}

} // namespace nanosim
