#include "nanosim/stability.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nanosim
{

void
FactorMatrix::Validate () const
{
  if (rows.empty ())
    {
      throw InvalidInput ("factor matrix needs at least one candidate");
    }
  if (rows.size () != candidateIds.size ())
    {
      throw InvalidInput ("factor matrix rows and candidate ids are misaligned");
    }
  for (const auto &r : rows)
    {
      if (!std::isfinite (r.residualEnergy) || !std::isfinite (r.linkQuality) ||
          !std::isfinite (r.distanceToNc))
        {
          throw InvalidInput ("factor matrix entries must be finite");
        }
      if (r.residualEnergy < 0.0 || r.linkQuality <= 0.0 || r.linkQuality >= 1.0 ||
          r.distanceToNc <= 0.0)
        {
          throw InvalidInput ("factor matrix entry out of domain");
        }
    }
}

namespace
{

double
Column (const FactorRow &r, int j)
{
  switch (j)
    {
    case 0:
      return r.residualEnergy;
    case 1:
      return r.linkQuality;
    default:
      return r.distanceToNc;
    }
}

} // namespace

std::optional<NormalizedMatrix>
Normalize (const FactorMatrix &matrix)
{
  matrix.Validate ();
  const std::size_t n = matrix.Size ();
  if (n == 1)
    {
      return std::nullopt;
    }
  NormalizedMatrix out (n);
  for (int j = 0; j < 3; ++j)
    {
      double lo = Column (matrix.rows[0], j);
      double hi = lo;
      for (const auto &r : matrix.rows)
        {
          lo = std::min (lo, Column (r, j));
          hi = std::max (hi, Column (r, j));
        }
      const bool negative = (j == 2);
      for (std::size_t i = 0; i < n; ++i)
        {
          if (hi == lo)
            {
              out[i][j] = 1.0;
              continue;
            }
          const double b = Column (matrix.rows[i], j);
          out[i][j] = negative ? (hi - b) / (hi - lo) : (b - lo) / (hi - lo);
        }
    }
  return out;
}

StabilityWeights
EntropyWeights (const NormalizedMatrix &normalized)
{
  const std::size_t n = normalized.size ();
  if (n < 2)
    {
      throw InvalidInput ("entropy weights need at least two candidates");
    }
  StabilityWeights out;
  out.kEnt = 1.0 / std::log (static_cast<double> (n));
  for (int j = 0; j < 3; ++j)
    {
      double colSum = 0.0;
      for (const auto &row : normalized)
        {
          colSum += row[j];
        }
      if (!(colSum > 0.0))
        {
          throw InvalidInput ("normalized column has zero sum");
        }
      double acc = 0.0;
      for (const auto &row : normalized)
        {
          const double p = row[j] / colSum;
          if (p > 0.0)
            {
              acc += p * std::log (p);
            }
        }
      // Rounding can push a uniform column a few ulps past 1.
      out.e[j] = std::clamp (-out.kEnt * acc, 0.0, 1.0);
      out.z[j] = 1.0 - out.e[j];
    }
  const double zSum = out.z[0] + out.z[1] + out.z[2];
  if (zSum <= 0.0)
    {
      out.w = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
      out.uniformFallback = true;
      return out;
    }
  for (int j = 0; j < 3; ++j)
    {
      out.w[j] = out.z[j] / zSum;
    }
  return out;
}

std::vector<double>
StabilityScores (const NormalizedMatrix &normalized, const StabilityWeights &weights)
{
  std::vector<double> s;
  s.reserve (normalized.size ());
  for (const auto &row : normalized)
    {
      s.push_back (weights.w[0] * row[0] + weights.w[1] * row[1] + weights.w[2] * row[2]);
    }
  return s;
}

std::size_t
NextHopCount (std::size_t n, std::size_t tau)
{
  if (n == 0 || tau == 0)
    {
      throw InvalidInput ("next-hop count needs n >= 1 and tau >= 1");
    }
  return n <= tau ? n : n / tau;
}

std::vector<ScoredCandidate>
SelectNextHops (const FactorMatrix &matrix, std::size_t tau)
{
  auto normalized = Normalize (matrix);
  if (!normalized)
    {
      return {ScoredCandidate{matrix.candidateIds.front (), 1.0}};
    }
  const auto scores = StabilityScores (*normalized, EntropyWeights (*normalized));

  std::vector<std::size_t> order (matrix.Size ());
  std::iota (order.begin (), order.end (), 0);
  std::sort (order.begin (), order.end (), [&] (std::size_t a, std::size_t b) {
    if (scores[a] != scores[b])
      {
        return scores[a] > scores[b];
      }
    if (matrix.rows[a].linkQuality != matrix.rows[b].linkQuality)
      {
        return matrix.rows[a].linkQuality > matrix.rows[b].linkQuality;
      }
    return Index (matrix.candidateIds[a]) < Index (matrix.candidateIds[b]);
  });

  const std::size_t m = NextHopCount (matrix.Size (), tau);
  std::vector<ScoredCandidate> out;
  out.reserve (m);
  for (std::size_t k = 0; k < m; ++k)
    {
      out.push_back ({matrix.candidateIds[order[k]], scores[order[k]]});
    }
  return out;
}

} // namespace nanosim
