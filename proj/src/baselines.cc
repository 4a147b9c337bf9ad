#include "nanosim/baselines.h"

#include <limits>
#include <algorithm>

namespace nanosim
{

std::vector<NodeId>
CloserQualifiedNeighbors (Network &net, NodeId node, const EnergyGate &gate)
{
  std::vector<NodeId> out;
  CloserQualifiedNeighbors (net, node, gate, out);
  return out;
}

void
CloserQualifiedNeighbors (Network &net, NodeId node, const EnergyGate &gate, std::vector<NodeId> &out)
{
  out.clear ();
  for (const Link *l : net.CloserLinks (node))
    {
      if (l->to == kNcId || (net.Alive (l->to) && gate.Qualifies (net.Energy (l->to))))
        {
          out.push_back (l->to);
        }
    }
}

SfrProtocol::SfrProtocol (Network &net)
    : Protocol (net),
      m_gate (EnergyGate::FromConfig (net.Config ())),
      m_arrival (net.Size (), 0.0),
      m_parent (net.Size (), -1),
      m_qualified (net.Size (), kUnchecked)
{
}

void
SfrProtocol::Send (const DataPacket &packet)
{
  m_lastTx = 0;
  if (!m_net.Alive (packet.source))
    {
      m_net.Complete (packet, false, m_net.Now (), "source-dead", {packet.source});
      return;
    }
  const double inf = std::numeric_limits<double>::infinity ();
  std::fill (m_arrival.begin (), m_arrival.end (), inf);
  std::fill (m_parent.begin (), m_parent.end (), -1);

  // Distances strictly decrease along every forwarding edge, so handling
  // holders farthest-first visits each node after all of its senders.
  auto &holders = m_holders;
  holders.clear ();
  m_arrival[Index (packet.source)] = m_net.Now ();
  holders.push_back ({m_net.DistanceToNc (packet.source), Index (packet.source)});

  // A node's energy cannot change between the first check and its own
  // turn to transmit: receive debits wait for the batch to end and every
  // sender toward it is handled earlier. One check per node is enough.
  const double threshold = m_gate.Threshold ();
  std::fill (m_qualified.begin (), m_qualified.end (), kUnchecked);
  m_net.BeginBatch ();
  while (!holders.empty ())
    {
      std::pop_heap (holders.begin (), holders.end ());
      const NodeId u = MakeNodeId (holders.back ().second);
      holders.pop_back ();
      for (const Link *link : m_net.CloserLinks (u))
        {
          const NodeId v = link->to;
          std::int8_t &q = m_qualified[Index (v)];
          if (q == kUnchecked)
            {
              q = v == kNcId || (m_net.Alive (v) && m_net.Energy (v) >= threshold) ? 1 : 0;
            }
          if (q == 0)
            {
              continue;
            }
          const UnicastResult r = m_net.Unicast (u, *link, packet.bits, MessageKind::kData);
          m_lastTx += r.attempts;
          if (!r.delivered)
            {
              continue;
            }
          const double t = m_arrival[Index (u)] + r.duration;
          if (m_arrival[Index (v)] == inf && v != kNcId)
            {
              holders.push_back ({m_net.DistanceToNc (v), Index (v)});
              std::push_heap (holders.begin (), holders.end ());
            }
          if (t < m_arrival[Index (v)])
            {
              m_arrival[Index (v)] = t;
              m_parent[Index (v)] = Index (u);
            }
        }
    }
  m_net.EndBatch ();

  if (m_arrival[0] == inf)
    {
      m_net.Complete (packet, false, m_net.Now (), "flood-exhausted", {packet.source});
      return;
    }
  std::vector<NodeId> route;
  for (std::int64_t n = 0; n >= 0; n = m_parent[static_cast<std::size_t> (n)])
    {
      route.insert (route.begin (), MakeNodeId (static_cast<std::uint32_t> (n)));
    }
  m_net.Complete (packet, true, m_arrival[0], "delivered", std::move (route));
}

RandomNextHopProtocol::RandomNextHopProtocol (Network &net)
    : Protocol (net),
      m_gate (EnergyGate::FromConfig (net.Config ()))
{
}

std::optional<NodeId>
RandomNextHopProtocol::Pick (const std::vector<NodeId> &candidates, std::mt19937_64 &rng)
{
  if (candidates.empty ())
    {
      return std::nullopt;
    }
  std::uniform_int_distribution<std::size_t> pick (0, candidates.size () - 1);
  return candidates[pick (rng)];
}

void
RandomNextHopProtocol::Send (const DataPacket &packet)
{
  std::vector<NodeId> route{packet.source};
  NodeId node = packet.source;
  double t = m_net.Now ();
  if (!m_net.Alive (node))
    {
      m_net.Complete (packet, false, t, "source-dead", route);
      return;
    }
  m_net.BeginBatch ();
  while (node != kNcId)
    {
      CloserQualifiedNeighbors (m_net, node, m_gate, m_scratch);
      const auto next = Pick (m_scratch, m_net.Rng ());
      if (!next)
        {
          m_net.EndBatch ();
          m_net.Complete (packet, false, t, "no-next-hop", route);
          return;
        }
      const UnicastResult r = m_net.Unicast (node, *next, packet.bits, MessageKind::kData);
      t += r.duration;
      if (!r.delivered)
        {
          m_net.EndBatch ();
          m_net.Complete (packet, false, t, "forward-failure", route);
          return;
        }
      route.push_back (*next);
      node = *next;
    }
  m_net.EndBatch ();
  m_net.Complete (packet, true, t, "delivered", std::move (route));
}

} // namespace nanosim
