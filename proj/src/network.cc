#include "nanosim/network.h"

#include <algorithm>
#include <cmath>

namespace nanosim
{

Network::Network (const ScenarioConfig &config, Topology topology, std::uint64_t seed,
                  EventLog &log)
    : m_config (config),
      m_topo (std::move (topology)),
      m_log (log),
      m_channel (config.channel),
      m_slots (config.energy.wetSlot, config.energy.swiptSlot, config.energy.witSlot),
      m_radioRng (MixSeed (seed, 0x726164000ULL + static_cast<std::uint64_t> (m_topo.bucket))),
      m_protocolRng (MixSeed (seed, 0x70726f000ULL + static_cast<std::uint64_t> (m_topo.bucket))),
      m_shadow (0.0, config.channel.fluctuationStdDb > 0.0 ? config.channel.fluctuationStdDb : 1.0)
{
  const std::size_t n = m_topo.Size ();
  m_links.resize (n);
  m_distToNc.resize (n);
  for (std::uint32_t i = 0; i < n; ++i)
    {
      const NodeId id = MakeNodeId (i);
      m_distToNc[i] = m_topo.DistanceToNc (id);
      for (NodeId nb : m_topo.neighbors[i])
        {
          Link l;
          l.to = nb;
          l.distanceMm = std::max (1e-9, Distance (m_topo.positions[i], m_topo.positions[Index (nb)]));
          const double gain = nb == kNcId ? config.channel.ncRxGainDb : 0.0;
          l.meanRxW = m_channel.MeanRxPowerW (l.distanceMm) * std::pow (10.0, gain / 10.0);
          l.meanMarginDb = m_channel.MeanMarginDb (l.distanceMm, gain);
          l.success = m_channel.SuccessProbability (l.meanMarginDb);
          l.propagationDelay = l.distanceMm * 1e-3 / config.channel.propagationSpeed;
          m_links[i].push_back (l);
        }
    }
  m_neighborIdx.resize (n);
  m_closer.resize (n);
  for (std::uint32_t i = 0; i < n; ++i)
    {
      for (const Link &l : m_links[i])
        {
          m_neighborIdx[i].push_back (Index (l.to));
          if (m_distToNc[Index (l.to)] < m_distToNc[i])
            {
              m_closer[i].push_back (&l);
            }
        }
      if (!m_links[i].empty () && m_links[i].front ().to == kNcId)
        {
          m_closer[i].assign (1, &m_links[i].front ());
        }
    }
  m_nodeLevel.assign (n, 0.0);
  m_batteries.reserve (n);
  m_batteries.emplace_back (0.0, 0.0, true);
  for (std::size_t i = 1; i < n; ++i)
    {
      m_batteries.emplace_back (config.energy.initialEnergy, config.energy.batteryCapacity);
    }
  m_pendingBits.assign (n, 0);
  m_heardBits.assign (n, 0);
}

const Link *
Network::FindLink (NodeId a, NodeId b) const
{
  const auto &links = m_links[Index (a)];
  auto it = std::lower_bound (links.begin (), links.end (), b,
                              [] (const Link &l, NodeId id) { return Index (l.to) < Index (id); });
  if (it == links.end () || it->to != b)
    {
      return nullptr;
    }
  return &*it;
}

void
Network::SettleAll ()
{
  for (std::uint32_t i = 0; i < m_batteries.size (); ++i)
    {
      Settle (i);
    }
}

double
Network::TxCost (std::uint32_t bits) const
{
  return m_config.energy.eBit * bits;
}

double
Network::RxCost (std::uint32_t bits) const
{
  return m_config.energy.receiveRatio * m_config.energy.eBit * bits;
}

void
Network::OnEnergyDeath (std::uint32_t i)
{
  const NodeId id = MakeNodeId (i);
  m_log.Add (DeathRecord{Bucket (), Now (), id, "energy"});
  if (m_onDeath)
    {
      auto cb = m_onDeath;
      m_queue.Schedule (Now (), [cb, id] () { cb (id); });
    }
}

void
Network::Kill (NodeId id, const char *cause)
{
  Battery &b = m_batteries[Index (id)];
  if (!b.Alive () || b.Infinite ())
    {
      return;
    }
  Settle (Index (id));
  b.Kill ();
  m_log.Add (DeathRecord{Bucket (), Now (), id, cause});
  if (m_onDeath)
    {
      auto cb = m_onDeath;
      m_queue.Schedule (Now (), [cb, id] () { cb (id); });
    }
}

void
Network::ChargeNeighbors (NodeId from, double cost)
{
  if (!m_log.Wants (LogDetail::kFull))
    {
      for (std::uint32_t v : m_neighborIdx[Index (from)])
        {
          Spend (v, cost);
        }
      return;
    }
  RxChargeRecord rec{Bucket (), Now (), from, {}};
  for (std::uint32_t v : m_neighborIdx[Index (from)])
    {
      if (!m_batteries[v].Alive ())
        {
          continue;
        }
      const double before = m_batteries[v].Debited ();
      Spend (v, cost);
      rec.charges.emplace_back (MakeNodeId (v), m_batteries[v].Debited () - before);
    }
  if (!rec.charges.empty ())
    {
      m_log.Add (std::move (rec));
    }
}

void
Network::ChargeReceivers (NodeId from, std::optional<NodeId> addressee, std::uint32_t bits)
{
  const bool everyone = !addressee || m_config.energy.overhearing;
  if (everyone)
    {
      if (m_batchDepth > 0)
        {
          if (m_pendingBits[Index (from)] == 0)
            {
              m_pendingSenders.push_back (from);
            }
          m_pendingBits[Index (from)] += bits;
          return;
        }
      ChargeNeighbors (from, RxCost (bits));
      return;
    }
  const std::uint32_t v = Index (*addressee);
  if (!m_batteries[v].Alive ())
    {
      return;
    }
  const double before = m_batteries[v].Debited ();
  Spend (v, RxCost (bits));
  if (m_log.Wants (LogDetail::kFull))
    {
      m_log.Add (RxChargeRecord{Bucket (), Now (), from, {{*addressee, m_batteries[v].Debited () - before}}});
    }
}

UnicastResult
Network::Unicast (NodeId from, NodeId to, std::uint32_t bits, MessageKind kind)
{
  const Link *link = FindLink (from, to);
  if (link == nullptr)
    {
      return {};
    }
  return Unicast (from, *link, bits, kind);
}

UnicastResult
Network::Unicast (NodeId from, const Link &link, std::uint32_t bits, MessageKind kind)
{
  UnicastResult res;
  const std::uint32_t f = Index (from);
  if (!m_batteries[f].Alive ())
    {
      return res;
    }
  const double txCost = TxCost (bits);
  const double before = m_batteries[f].Debited ();
  const bool deferRx = m_batchDepth > 0 && m_config.energy.overhearing;
  const std::uint32_t to = Index (link.to);
  // One draw decides the whole exchange: attempt k is the first success
  // when (1 - p)^k <= u < (1 - p)^(k - 1).
  const double u = Uniform ();
  const double miss = 1.0 - link.success;
  double tail = miss;
  for (std::uint32_t a = 0; a <= m_config.linkRetries; ++a)
    {
      if (!Spend (f, txCost))
        {
          break;
        }
      ++res.attempts;
      if (deferRx)
        {
          if (m_pendingBits[f] == 0)
            {
              m_pendingSenders.push_back (from);
            }
          m_pendingBits[f] += bits;
        }
      else
        {
          ChargeReceivers (from, link.to, bits);
        }
      if (!m_batteries[to].Alive ())
        {
          continue;
        }
      if (u >= tail)
        {
          res.delivered = true;
          break;
        }
      tail *= miss;
    }
  res.duration = res.attempts * (bits / m_config.dataRate) + link.propagationDelay;
  if (m_log.Wants (LogDetail::kFull))
    {
      m_log.Add (TxRecord{Bucket (), Now (), from, static_cast<std::int64_t> (Index (link.to)), kind,
                          bits, res.attempts, res.delivered, m_batteries[f].Debited () - before});
    }
  return res;
}

std::vector<Reception>
Network::Broadcast (NodeId from, std::uint32_t bits, MessageKind kind)
{
  std::vector<Reception> out;
  if (!Alive (from))
    {
      return out;
    }
  const double before = m_batteries[Index (from)].Debited ();
  const bool sent = Spend (Index (from), TxCost (bits));
  if (m_log.Wants (LogDetail::kFull))
    {
      m_log.Add (TxRecord{Bucket (), Now (), from, -1, kind, bits, sent ? 1u : 0u, sent,
                          m_batteries[Index (from)].Debited () - before});
    }
  if (!sent)
    {
      return out;
    }
  ChargeReceivers (from, std::nullopt, bits);

  const double sigma = m_config.channel.fluctuationStdDb;
  for (const Link &l : m_links[Index (from)])
    {
      if (!Alive (l.to))
        {
          continue;
        }
      const double noise = sigma > 0.0 ? m_shadow (m_radioRng) : 0.0;
      const double margin = l.meanMarginDb + noise;
      if (margin >= 0.0)
        {
          out.push_back ({l.to, l.meanRxW * std::pow (10.0, noise / 10.0), margin});
        }
    }
  return out;
}

Seconds
Network::HopDelay (NodeId from, NodeId to, std::uint32_t bits) const
{
  const Link *link = FindLink (from, to);
  return bits / m_config.dataRate + (link != nullptr ? link->propagationDelay : 0.0);
}

void
Network::BeginBatch ()
{
  ++m_batchDepth;
}

void
Network::EndBatch ()
{
  if (m_batchDepth == 0 || --m_batchDepth > 0)
    {
      return;
    }
  if (!m_log.Wants (LogDetail::kFull))
    {
      // Without per-frame records each listener is charged once for the
      // sum of everything it overheard during the batch.
      for (NodeId from : m_pendingSenders)
        {
          const std::uint64_t bits = m_pendingBits[Index (from)];
          m_pendingBits[Index (from)] = 0;
          for (std::uint32_t v : m_neighborIdx[Index (from)])
            {
              if (m_heardBits[v] == 0)
                {
                  m_listeners.push_back (v);
                }
              m_heardBits[v] += bits;
            }
        }
      m_pendingSenders.clear ();
      const double perBit = m_config.energy.receiveRatio * m_config.energy.eBit;
      for (std::uint32_t v : m_listeners)
        {
          Spend (v, perBit * static_cast<double> (m_heardBits[v]));
          m_heardBits[v] = 0;
        }
      m_listeners.clear ();
      return;
    }
  for (NodeId from : m_pendingSenders)
    {
      const std::uint64_t bits = m_pendingBits[Index (from)];
      m_pendingBits[Index (from)] = 0;
      ChargeNeighbors (from, m_config.energy.receiveRatio * m_config.energy.eBit *
                                 static_cast<double> (bits));
    }
  m_pendingSenders.clear ();
}

void
Network::Complete (const DataPacket &packet, bool delivered, Seconds finished, std::string reason,
                   std::vector<NodeId> route)
{
  if (packet.id >= m_completed.size ())
    {
      m_completed.resize (packet.id + 1, false);
    }
  if (m_completed[packet.id])
    {
      throw StateError ("packet " + std::to_string (packet.id) + " completed twice");
    }
  m_completed[packet.id] = true;
  m_log.Add (PacketRecord{Bucket (), packet.id, packet.source, packet.generated, finished, delivered,
                          std::move (reason), packet.bits, std::move (route)});
}

bool
Network::Completed (std::uint64_t packet) const
{
  return packet < m_completed.size () && m_completed[packet];
}

void
Network::LogLedgers ()
{
  SettleAll ();
  for (std::uint32_t i = 0; i < m_batteries.size (); ++i)
    {
      const Battery &b = m_batteries[i];
      m_log.Add (EnergyRecord{Bucket (), MakeNodeId (i), b.Initial (), b.Credited (), b.Debited (),
                              b.Energy (), b.Alive ()});
    }
}

} // namespace nanosim
