#ifndef NANOSIM_BASELINES_H
#define NANOSIM_BASELINES_H

#include "nanosim/energy.h"
#include "nanosim/protocol.h"

#include <optional>
#include <vector>

namespace nanosim
{

/// Neighbors of `node` that are alive, pass the energy gate and lie
/// strictly closer to the NC. The NC itself is included when in range.
std::vector<NodeId> CloserQualifiedNeighbors (Network &net, NodeId node, const EnergyGate &gate);
/// Same as above, written into `out`.
void CloserQualifiedNeighbors (Network &net, NodeId node, const EnergyGate &gate,
                               std::vector<NodeId> &out);

/**
 * Selective flooding: every node holding the packet forwards it to all
 * qualified neighbors closer to the NC, or only to the NC when in range.
 * Copies reaching a node that already holds the packet are discarded.
 */
class SfrProtocol : public Protocol
{
public:
  explicit SfrProtocol (Network &net);

  ProtocolKind Kind () const override { return ProtocolKind::kSfr; }
  void Send (const DataPacket &packet) override;

  /// Data transmissions made by the most recent Send().
  std::uint64_t LastTransmissions () const { return m_lastTx; }

private:
  EnergyGate m_gate;
  std::uint64_t m_lastTx = 0;
  std::vector<double> m_arrival;
  std::vector<std::int64_t> m_parent;
  std::vector<std::pair<double, std::uint32_t>> m_holders; ///< max-heap on distance
  static constexpr std::int8_t kUnchecked = -1;
  std::vector<std::int8_t> m_qualified; ///< per-Send gate result, or kUnchecked
};

/// Forwards hop by hop to a uniformly drawn qualified closer neighbor.
class RandomNextHopProtocol : public Protocol
{
public:
  explicit RandomNextHopProtocol (Network &net);

  ProtocolKind Kind () const override { return ProtocolKind::kRandomNextHop; }
  void Send (const DataPacket &packet) override;

  /// Uniform choice used by Send(); nullopt for an empty set.
  static std::optional<NodeId> Pick (const std::vector<NodeId> &candidates, std::mt19937_64 &rng);

private:
  EnergyGate m_gate;
  std::vector<NodeId> m_scratch;
};

} // namespace nanosim

#endif /* NANOSIM_BASELINES_H */
