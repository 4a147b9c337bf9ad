#ifndef NANOSIM_SIMILARITY_H
#define NANOSIM_SIMILARITY_H

#include "nanosim/types.h"

#include <optional>
#include <span>

namespace nanosim
{

/// How the shared-node term of the similarity counts nodes.
enum class NodeCountConvention
{
  /// Shared nodes except the common source. Reproduces the textbook
  /// A-B-D-G-H-J / A-C-E-F-I-G-H-J example (N = 3, Omega = 1.5).
  kExcludeSource,
  /// Plain set intersection (N = 4 and Omega = 2.0 for the same example).
  kSetIntersection,
};

struct SimilarityParams
{
  double kSim = 0.5;  ///< node-correlation weight
  double sigma = 0.5; ///< link-correlation weight
  NodeCountConvention convention = NodeCountConvention::kExcludeSource;

  /// 0 < kSim, sigma < 1 and kSim + sigma = 1.
  void Validate () const;
};

/// Omega = k * max(0, N - 2) + sigma * L.
double Similarity (const RoutePath &main, const RoutePath &candidate,
                   const SimilarityParams &params);

/**
 * Backup path: lowest similarity to `main`. Ties go to the higher total
 * stability, then the shorter path, then the lexicographically smaller hop
 * sequence. Returns nullopt for an empty candidate list.
 */
std::optional<RoutePath> SelectBackup (const RoutePath &main,
                                       std::span<const RoutePath> candidates,
                                       const SimilarityParams &params);

} // namespace nanosim

#endif /* NANOSIM_SIMILARITY_H */
