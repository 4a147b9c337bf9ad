#ifndef NANOSIM_NETWORK_H
#define NANOSIM_NETWORK_H

#include "nanosim/channel.h"
#include "nanosim/config.h"
#include "nanosim/energy.h"
#include "nanosim/event-log.h"
#include "nanosim/event-queue.h"
#include "nanosim/topology.h"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace nanosim
{

/// Precomputed radio characteristics of a directed link.
struct Link
{
  NodeId to{};
  double distanceMm = 0.0;
  double meanRxW = 0.0;     ///< mean received power at `to`
  double meanMarginDb = 0.0; ///< above `to`'s sensitivity, receive gain included
  double success = 0.0;     ///< per-attempt delivery probability
  Seconds propagationDelay = 0.0;
};

struct Reception
{
  NodeId node{};
  double rssiW = 0.0;
  double marginDb = 0.0; ///< sampled dB above the receiver sensitivity
};

struct UnicastResult
{
  bool delivered = false;
  std::uint32_t attempts = 0;
  Seconds duration = 0.0; ///< air time of all attempts plus propagation
};

struct DataPacket
{
  std::uint64_t id = 0;
  NodeId source{};
  Seconds generated = 0.0;
  std::uint32_t bits = 0;
};

/**
 * \brief Radio medium, batteries and bookkeeping shared by every protocol.
 *
 * All energy flows through this class so that per-node ledgers stay
 * consistent with the transmission log.
 */
class Network
{
public:
  Network (const ScenarioConfig &config, Topology topology, std::uint64_t seed, EventLog &log);

  const ScenarioConfig &Config () const { return m_config; }
  const Topology &Topo () const { return m_topo; }
  const ChannelModel &Channel () const { return m_channel; }
  EventQueue &Queue () { return m_queue; }
  Seconds Now () const { return m_queue.Now (); }
  EventLog &Log () { return m_log; }
  int Bucket () const { return m_topo.bucket; }
  std::mt19937_64 &Rng () { return m_protocolRng; }

  std::size_t Size () const { return m_topo.Size (); }
  const std::vector<Link> &Links (NodeId id) const { return m_links[Index (id)]; }
  /// Link from `a` to `b`, or nullptr when out of range.
  const Link *FindLink (NodeId a, NodeId b) const;
  double DistanceToNc (NodeId id) const { return m_distToNc[Index (id)]; }
  /// Links of `id` toward strictly closer neighbors, or only the NC link
  /// when the NC is in range.
  const std::vector<const Link *> &CloserLinks (NodeId id) const { return m_closer[Index (id)]; }

  bool Alive (NodeId id) const { return m_batteries[Index (id)].Alive (); }
  /// Residual energy after settling harvest up to Now().
  double Energy (NodeId id)
  {
    Settle (Index (id));
    return m_batteries[Index (id)].Energy ();
  }
  const Battery &BatteryOf (NodeId id) const { return m_batteries[Index (id)]; }
  void Kill (NodeId id, const char *cause);
  /// Called once for every node death, after the ledger has been updated.
  void SetDeathCallback (std::function<void (NodeId)> cb) { m_onDeath = std::move (cb); }

  double TxCost (std::uint32_t bits) const;
  double RxCost (std::uint32_t bits) const;

  /// Addressed frame with link-layer retries. The receive side pays for
  /// every attempt it hears.
  UnicastResult Unicast (NodeId from, NodeId to, std::uint32_t bits, MessageKind kind);
  /// Same as above over a link of `from` that the caller already holds.
  UnicastResult Unicast (NodeId from, const Link &link, std::uint32_t bits, MessageKind kind);
  /// One frame to every neighbor; returns neighbors whose sample cleared
  /// the sensitivity.
  std::vector<Reception> Broadcast (NodeId from, std::uint32_t bits, MessageKind kind);
  /// Frame delay for one attempt over a link.
  Seconds HopDelay (NodeId from, NodeId to, std::uint32_t bits) const;

  /// Between Begin and End the receive debits of frames heard by every
  /// neighbor are accumulated and applied at the outermost End, once per
  /// listener unless full logging asks for per-frame records. Batches nest.
  void BeginBatch ();
  void EndBatch ();

  /// Records the single outcome of a generated packet.
  void Complete (const DataPacket &packet, bool delivered, Seconds finished, std::string reason,
                 std::vector<NodeId> route);
  std::uint64_t NextPacketId () { return m_nextPacket++; }
  bool Completed (std::uint64_t packet) const;

  /// Settles every battery at Now() and logs the ledgers.
  void LogLedgers ();
  void SettleAll ();

private:
  /// Cumulative harvest per node up to Now().
  double HarvestLevel ()
  {
    if (Now () != m_levelTime)
      {
        m_levelTime = Now ();
        m_level = m_config.energy.harvestRate * m_slots.HarvestingPrefix (m_levelTime);
      }
    return m_level;
  }
  void Settle (std::uint32_t i)
  {
    const double level = HarvestLevel ();
    m_batteries[i].Credit (level - m_nodeLevel[i]);
    m_nodeLevel[i] = level;
  }
  bool Spend (std::uint32_t i, double amount)
  {
    Battery &b = m_batteries[i];
    if (!b.Alive ())
      {
        return false;
      }
    Settle (i);
    const bool ok = b.Debit (amount);
    if (!b.Alive ())
      {
        OnEnergyDeath (i);
      }
    return ok;
  }
  void OnEnergyDeath (std::uint32_t i);
  /// Receive debits for one frame. Without an addressee every neighbor pays.
  void ChargeReceivers (NodeId from, std::optional<NodeId> addressee, std::uint32_t bits);
  void ChargeNeighbors (NodeId from, double cost);
  double Uniform () { return static_cast<double> (m_radioRng () >> 11) * 0x1.0p-53; }

  ScenarioConfig m_config;
  Topology m_topo;
  EventLog &m_log;
  ChannelModel m_channel;
  SlotSchedule m_slots;
  EventQueue m_queue;
  SplitMix64 m_radioRng;
  std::mt19937_64 m_protocolRng;
  std::normal_distribution<double> m_shadow;

  std::vector<std::vector<Link>> m_links;
  std::vector<std::vector<std::uint32_t>> m_neighborIdx;
  std::vector<std::vector<const Link *>> m_closer;
  std::vector<double> m_distToNc;
  std::vector<Battery> m_batteries;
  std::vector<double> m_nodeLevel;
  Seconds m_levelTime = 0.0;
  double m_level = 0.0;
  std::function<void (NodeId)> m_onDeath;

  int m_batchDepth = 0;
  std::vector<std::uint64_t> m_pendingBits;
  std::vector<NodeId> m_pendingSenders;
  std::vector<std::uint64_t> m_heardBits;
  std::vector<std::uint32_t> m_listeners;

  std::uint64_t m_nextPacket = 0;
  std::vector<bool> m_completed;
};

} // namespace nanosim

#endif /* NANOSIM_NETWORK_H */
