#ifndef NANOSIM_STABILITY_H
#define NANOSIM_STABILITY_H

#include "nanosim/types.h"

#include <array>
#include <optional>
#include <vector>

namespace nanosim
{

/// One candidate next hop as reported through neighbor feedback.
struct FactorRow
{
  double residualEnergy = 0.0; ///< joules, larger is better
  double linkQuality = 0.0;    ///< (0, 1), larger is better
  double distanceToNc = 0.0;   ///< millimeters, smaller is better
};

struct FactorMatrix
{
  std::vector<FactorRow> rows;
  std::vector<NodeId> candidateIds;

  std::size_t Size () const { return rows.size (); }
  /// Throws InvalidInput when rows/ids disagree or a value is out of domain.
  void Validate () const;
};

/// n×3 matrix of min-max normalized factors, all entries in [0, 1].
using NormalizedMatrix = std::vector<std::array<double, 3>>;

struct StabilityWeights
{
  std::array<double, 3> w{};
  std::array<double, 3> e{};
  std::array<double, 3> z{};
  double kEnt = 0.0;
  /// Set when every factor carried zero information and equal weights were used.
  bool uniformFallback = false;
};

/**
 * Min-max normalize energy and link quality as benefit factors and the
 * distance to the NC as a cost factor. A constant column becomes all ones.
 *
 * Returns nullopt for a single candidate: it is selected without scoring.
 */
std::optional<NormalizedMatrix> Normalize (const FactorMatrix &matrix);

/// Entropy weights of a normalized matrix with at least two rows.
StabilityWeights EntropyWeights (const NormalizedMatrix &normalized);

/// s_i = Σ_j w_j b'_ij for each row.
std::vector<double> StabilityScores (const NormalizedMatrix &normalized,
                                     const StabilityWeights &weights);

/// Fan-out: n when n <= tau, otherwise floor(n / tau).
std::size_t NextHopCount (std::size_t n, std::size_t tau);

struct ScoredCandidate
{
  NodeId id{};
  double score = 0.0;
};

/// Highest-stability m candidates, best first. Ties go to the better link,
/// then to the lower node id. A lone candidate is returned with score 1.
std::vector<ScoredCandidate> SelectNextHops (const FactorMatrix &matrix, std::size_t tau);

} // namespace nanosim

#endif /* NANOSIM_STABILITY_H */
