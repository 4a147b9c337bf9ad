#include "nanosim/rmrls.h"

#include <algorithm>
#include <cmath>

namespace nanosim
{

namespace
{

std::uint64_t
RequestKey (NodeId source, std::uint32_t requestId)
{
  return (static_cast<std::uint64_t> (Index (source)) << 32) | requestId;
}

const char *
ConventionName (NodeCountConvention c)
{
  return c == NodeCountConvention::kExcludeSource ? "exclude_source" : "set_intersection";
}

} // namespace

std::size_t
SelectMainIndex (const std::vector<RoutePath> &paths)
{
  if (paths.empty ())
    {
      throw InvalidInput ("no collected path to select from");
    }
  std::size_t best = 0;
  for (std::size_t i = 1; i < paths.size (); ++i)
    {
      const RoutePath &a = paths[i];
      const RoutePath &b = paths[best];
      if (a.totalStability != b.totalStability)
        {
          if (a.totalStability > b.totalStability)
            {
              best = i;
            }
          continue;
        }
      if (a.HopCount () != b.HopCount ())
        {
          if (a.HopCount () < b.HopCount ())
            {
              best = i;
            }
          continue;
        }
      if (HopsLess (a, b))
        {
          best = i;
        }
    }
  return best;
}

RmrlsProtocol::RmrlsProtocol (Network &net)
    : Protocol (net),
      m_gate (EnergyGate::FromConfig (net.Config ())),
      m_similarity (net.Config ().rmrls.similarity)
{
  const std::size_t n = net.Size ();
  const KalmanConfig &kc = net.Config ().kalman;
  m_estimators.resize (n);
  m_lastHeard.resize (n);
  for (std::uint32_t i = 0; i < n; ++i)
    {
      const std::size_t degree = net.Links (MakeNodeId (i)).size ();
      m_estimators[i].assign (degree, LinkEstimator (kc.params, kc.batchSize));
      m_lastHeard[i].assign (degree, 0.0);
    }
  m_cache.resize (n);
  m_seen.resize (n);
  m_sources.resize (n);
}

void
RmrlsProtocol::Start ()
{
  m_net.Queue ().Schedule (m_net.Now (), [this] () { HelloRound (); });
}

std::size_t
RmrlsProtocol::LinkIndex (NodeId node, NodeId neighbor) const
{
  const auto &links = m_net.Links (node);
  auto it = std::lower_bound (links.begin (), links.end (), neighbor,
                              [] (const Link &l, NodeId id) { return Index (l.to) < Index (id); });
  if (it == links.end () || it->to != neighbor)
    {
      return links.size ();
    }
  return static_cast<std::size_t> (it - links.begin ());
}

double
RmrlsProtocol::LinkQualityEstimate (NodeId node, NodeId neighbor) const
{
  const std::size_t idx = LinkIndex (node, neighbor);
  if (idx >= m_estimators[Index (node)].size ())
    {
      throw InvalidInput ("nodes are not neighbors");
    }
  return m_estimators[Index (node)][idx].Quality ();
}

const RoutingTableEntry *
RmrlsProtocol::Entry (NodeId source) const
{
  const auto &e = m_sources[Index (source)].entry;
  return e ? &*e : nullptr;
}

const CachedRoute *
RmrlsProtocol::Cache (NodeId node) const
{
  const auto &c = m_cache[Index (node)];
  return c ? &*c : nullptr;
}

void
RmrlsProtocol::HelloRound ()
{
  const ScenarioConfig &cfg = m_net.Config ();
  const bool decibel = cfg.kalman.mode == EstimatorMode::kDecibel;
  const Seconds now = m_net.Now ();
  m_net.BeginBatch ();
  for (std::uint32_t i = 1; i < m_net.Size (); ++i)
    {
      const NodeId sender = MakeNodeId (i);
      if (!m_net.Alive (sender))
        {
          continue;
        }
      for (const Reception &r : m_net.Broadcast (sender, cfg.rmrls.bits.hello, MessageKind::kHello))
        {
          const std::size_t idx = LinkIndex (r.node, sender);
          m_estimators[Index (r.node)][idx].AddSample (decibel ? r.marginDb : r.rssiW);
          m_lastHeard[Index (r.node)][idx] = now;
        }
    }
  m_net.EndBatch ();
  CheckNeighbors ();
  m_net.Queue ().Schedule (now + cfg.rmrls.helloPeriod, [this] () { HelloRound (); });
}

void
RmrlsProtocol::CheckNeighbors ()
{
  const RmrlsConfig &rc = m_net.Config ().rmrls;
  const Seconds limit = rc.helloMissLimit * rc.helloPeriod + 1e-9;
  const Seconds now = m_net.Now ();
  for (std::uint32_t s = 0; s < m_sources.size (); ++s)
    {
      const auto &entry = m_sources[s].entry;
      if (!entry)
        {
          continue;
        }
      const std::vector<NodeId> hops = entry->Active ().hops;
      const std::uint32_t requestId = entry->requestId;
      for (std::size_t i = 0; i + 1 < hops.size (); ++i)
        {
          const NodeId u = hops[i];
          const NodeId v = hops[i + 1];
          if (v == kNcId || !m_net.Alive (u))
            {
              continue;
            }
          const std::size_t idx = LinkIndex (u, v);
          if (now - m_lastHeard[Index (u)][idx] > limit)
            {
              ReportFailure (hops, i, requestId);
              break;
            }
        }
    }
}

std::vector<Candidate>
RmrlsProtocol::DiscoverCandidates (NodeId node)
{
  std::vector<Candidate> out;
  if (!m_net.Alive (node))
    {
      return out;
    }
  const MessageBits &bits = m_net.Config ().rmrls.bits;
  for (const Reception &r : m_net.Broadcast (node, bits.ndis, MessageKind::kNdis))
    {
      const double energy = r.node == kNcId ? 0.0 : m_net.Energy (r.node);
      if (r.node != kNcId && !m_gate.Qualifies (energy))
        {
          continue;
        }
      if (m_net.Unicast (r.node, node, bits.nfee, MessageKind::kNfee).delivered)
        {
          out.push_back ({r.node, energy});
        }
    }
  return out;
}

std::uint32_t
RmrlsProtocol::Originate (NodeId source)
{
  SourceState &st = m_sources[Index (source)];
  if (!m_net.Alive (source))
    {
      return 0;
    }
  if (st.discoveries >= m_net.Config ().iterations)
    {
      m_net.Log ().Add (DiscoveryRecord{m_net.Bucket (), m_net.Now (), source, 0, "exhausted"});
      return 0;
    }
  const std::uint32_t requestId = st.nextRequestId++;
  ++st.discoveries;
  st.pendingRequest = requestId;
  m_net.Log ().Add (DiscoveryRecord{m_net.Bucket (), m_net.Now (), source, requestId, "start"});
  m_net.Queue ().Schedule (m_net.Now () + m_net.Config ().rmrls.discoveryTimeout,
                           [this, source, requestId] () { DiscoveryTimeout (source, requestId); });

  RreqPayload rreq;
  rreq.source = source;
  rreq.record.hops = {source};
  rreq.requestId = requestId;
  m_seen[Index (source)].insert (RequestKey (source, requestId));
  m_net.BeginBatch ();
  ForwardRreq (source, rreq);
  m_net.EndBatch ();
  return requestId;
}

void
RmrlsProtocol::ForwardRreq (NodeId node, const RreqPayload &rreq)
{
  const auto &cache = m_cache[Index (node)];
  if (cache && node != rreq.source && m_net.Now () < cache->expires)
    {
      const NodeId next = cache->suffix[1];
      const bool fresh = !rreq.record.Contains (next) && m_net.Alive (next);
      const double energy = next == kNcId ? 0.0 : m_net.Energy (next);
      if (fresh && (next == kNcId || m_gate.Qualifies (energy)))
        {
          SendRreq (node, next, rreq, cache->nextHopStability, energy, 1, true);
          return;
        }
    }

  std::vector<Candidate> candidates = DiscoverCandidates (node);
  const bool progressOnly = m_net.Config ().rmrls.progressOnly;
  const double own = m_net.DistanceToNc (node);
  std::erase_if (candidates, [&] (const Candidate &c) {
    return rreq.record.Contains (c.id) || (progressOnly && m_net.DistanceToNc (c.id) >= own);
  });
  for (const Candidate &c : candidates)
    {
      if (c.id == kNcId)
        {
          SendRreq (node, kNcId, rreq, 1.0, c.residualEnergy, 1, false);
          return;
        }
    }
  if (candidates.empty ())
    {
      m_net.Log ().Add (RreqDropRecord{m_net.Bucket (), m_net.Now (), node, rreq.source,
                                       rreq.requestId, "no-candidates"});
      return;
    }

  FactorMatrix matrix;
  for (const Candidate &c : candidates)
    {
      const double q = std::clamp (LinkQualityEstimate (node, c.id), 1e-9, 1.0 - 1e-9);
      matrix.rows.push_back ({c.residualEnergy, q, m_net.DistanceToNc (c.id)});
      matrix.candidateIds.push_back (c.id);
    }
  const std::vector<ScoredCandidate> chosen = SelectNextHops (matrix, m_net.Config ().rmrls.tau);
  for (const ScoredCandidate &sc : chosen)
    {
      const auto it = std::find_if (candidates.begin (), candidates.end (),
                                    [&] (const Candidate &c) { return c.id == sc.id; });
      SendRreq (node, sc.id, rreq, sc.score, it->residualEnergy, chosen.size (), false);
    }
}

void
RmrlsProtocol::SendRreq (NodeId from, NodeId to, const RreqPayload &base, double hopScore,
                         double toEnergy, std::size_t fanout, bool viaCache)
{
  const UnicastResult r = m_net.Unicast (from, to, m_net.Config ().rmrls.bits.rreq, MessageKind::kRreq);
  if (!r.delivered)
    {
      return;
    }
  RreqPayload next = base;
  next.record.hops.push_back (to);
  next.record.totalStability += hopScore;
  next.hopScores.push_back (hopScore);
  m_net.Log ().Add (RreqRecord{m_net.Bucket (), m_net.Now (), base.source, base.requestId, from, to,
                               toEnergy, hopScore, next.record.totalStability, fanout, viaCache,
                               next.record.hops, next.hopScores});
  m_net.Queue ().Schedule (m_net.Now () + r.duration,
                           [this, to, next = std::move (next)] () mutable { HandleRreq (to, std::move (next)); });
}

void
RmrlsProtocol::HandleRreq (NodeId node, RreqPayload rreq)
{
  const std::uint64_t key = RequestKey (rreq.source, rreq.requestId);
  const MessageBits &bits = m_net.Config ().rmrls.bits;
  const auto drop = [&] (const char *reason) {
    m_net.Log ().Add (RreqDropRecord{m_net.Bucket (), m_net.Now (), node, rreq.source, rreq.requestId, reason});
  };
  const auto &hops = rreq.record.hops;
  const bool inRecord = std::find (hops.begin (), hops.end () - 1, node) != hops.end () - 1;

  if (node == kNcId)
    {
      const NodeId previous = hops[hops.size () - 2];
      m_net.Unicast (node, previous, bits.ack, MessageKind::kAck);
      auto [it, fresh] = m_pending.try_emplace (key);
      PendingRequest &p = it->second;
      if (fresh)
        {
          p.source = rreq.source;
          p.requestId = rreq.requestId;
          p.windowDeadline = m_net.Now () + m_net.Config ().rmrls.collectionWindow;
          m_net.Queue ().Schedule (p.windowDeadline, [this, key] () { CloseWindow (key); });
        }
      const bool duplicate = std::any_of (p.collected.begin (), p.collected.end (),
                                          [&] (const RoutePath &c) { return c.hops == hops; });
      if (!duplicate)
        {
          p.collected.push_back (rreq.record);
          p.hopScores.push_back (rreq.hopScores);
        }
      return;
    }
  if (!m_net.Alive (node))
    {
      drop ("dead");
      return;
    }
  if (inRecord)
    {
      drop ("loop");
      return;
    }
  if (!m_seen[Index (node)].insert (key).second)
    {
      drop ("duplicate");
      return;
    }
  m_net.BeginBatch ();
  m_net.Unicast (node, hops[hops.size () - 2], bits.ack, MessageKind::kAck);
  ForwardRreq (node, rreq);
  m_net.EndBatch ();
}

void
RmrlsProtocol::CloseWindow (std::uint64_t key)
{
  auto it = m_pending.find (key);
  if (it == m_pending.end ())
    {
      return;
    }
  PendingRequest p = std::move (it->second);
  m_pending.erase (it);

  const std::size_t mainIdx = SelectMainIndex (p.collected);
  std::vector<RoutePath> others;
  for (std::size_t i = 0; i < p.collected.size (); ++i)
    {
      if (i != mainIdx)
        {
          others.push_back (p.collected[i]);
        }
    }
  const std::optional<RoutePath> backup = SelectBackup (p.collected[mainIdx], others, m_similarity);

  SelectionRecord rec{m_net.Bucket (), m_net.Now (), p.source, p.requestId, {}, static_cast<int> (mainIdx),
                      -1, m_similarity.kSim, m_similarity.sigma, ConventionName (m_similarity.convention)};
  for (std::size_t i = 0; i < p.collected.size (); ++i)
    {
      rec.collected.push_back ({p.collected[i].hops, p.collected[i].totalStability, p.hopScores[i]});
      if (backup && i != mainIdx && p.collected[i].hops == backup->hops)
        {
          rec.backup = static_cast<int> (i);
        }
    }
  m_net.Log ().Add (std::move (rec));

  RrepPayload rrep;
  rrep.main = p.collected[mainIdx];
  rrep.backup = backup;
  rrep.mainHopScores = p.hopScores[mainIdx];
  rrep.requestId = p.requestId;
  const std::size_t ncPosition = rrep.main.hops.size () - 1;
  SendRrep (std::move (rrep), ncPosition);
}

void
RmrlsProtocol::SendRrep (RrepPayload rrep, std::size_t position)
{
  const NodeId from = rrep.main.hops[position];
  const NodeId to = rrep.main.hops[position - 1];
  const UnicastResult r = m_net.Unicast (from, to, m_net.Config ().rmrls.bits.rrep, MessageKind::kRrep);
  if (!r.delivered)
    {
      return;
    }
  m_net.Queue ().Schedule (m_net.Now () + r.duration, [this, rrep = std::move (rrep), position] () mutable {
    const std::size_t at = position - 1;
    const NodeId node = rrep.main.hops[at];
    if (at == 0)
      {
        InstallRoute (node, rrep);
        return;
      }
    CachedRoute c;
    c.suffix.assign (rrep.main.hops.begin () + static_cast<std::ptrdiff_t> (at), rrep.main.hops.end ());
    c.nextHopStability = rrep.mainHopScores[at];
    c.expires = m_net.Now () + m_net.Config ().rmrls.routeTtl;
    m_cache[Index (node)] = std::move (c);
    SendRrep (std::move (rrep), at);
  });
}

void
RmrlsProtocol::InstallRoute (NodeId source, const RrepPayload &rrep)
{
  SourceState &st = m_sources[Index (source)];
  if (rrep.requestId != st.pendingRequest && st.entry)
    {
      return;
    }
  if (rrep.requestId == st.pendingRequest)
    {
      st.pendingRequest = 0;
    }
  st.failedDiscoveries = 0;
  RoutingTableEntry e;
  e.main = rrep.main;
  e.backup = rrep.backup;
  e.requestId = rrep.requestId;
  e.mainHopScores = rrep.mainHopScores;
  e.expires = m_net.Now () + m_net.Config ().rmrls.routeTtl;
  st.entry = std::move (e);
  m_net.Log ().Add (RouteRecord{m_net.Bucket (), m_net.Now (), source, rrep.requestId, "installed",
                                rrep.main.hops, rrep.backup ? rrep.backup->hops : std::vector<NodeId>{}});

  std::deque<DataPacket> queued;
  queued.swap (st.buffer);
  for (const DataPacket &p : queued)
    {
      Send (p);
    }
}

void
RmrlsProtocol::DiscoveryTimeout (NodeId source, std::uint32_t requestId)
{
  SourceState &st = m_sources[Index (source)];
  if (st.pendingRequest != requestId)
    {
      return;
    }
  st.pendingRequest = 0;
  m_net.Log ().Add (DiscoveryRecord{m_net.Bucket (), m_net.Now (), source, requestId, "timeout"});
  if (st.failedDiscoveries++ < m_net.Config ().rmrls.discoveryRetries && Originate (source) != 0)
    {
      return;
    }
  st.failedDiscoveries = 0;
  st.holdoffUntil = m_net.Now () + m_net.Config ().rmrls.discoveryHoldoff;
  DropBuffered (source, "no-route");
}

void
RmrlsProtocol::DropBuffered (NodeId source, const char *reason)
{
  std::deque<DataPacket> queued;
  queued.swap (m_sources[Index (source)].buffer);
  for (const DataPacket &p : queued)
    {
      m_net.Complete (p, false, m_net.Now (), reason, {source});
    }
}

void
RmrlsProtocol::Send (const DataPacket &packet)
{
  const NodeId src = packet.source;
  SourceState &st = m_sources[Index (src)];
  if (!m_net.Alive (src))
    {
      m_net.Complete (packet, false, m_net.Now (), "source-dead", {src});
      return;
    }
  if (m_net.FindLink (src, kNcId) != nullptr)
    {
      const UnicastResult r = m_net.Unicast (src, kNcId, packet.bits, MessageKind::kData);
      if (r.delivered)
        {
          m_net.Complete (packet, true, m_net.Now () + r.duration, "delivered", {src, kNcId});
        }
      else
        {
          m_net.Complete (packet, false, m_net.Now () + r.duration, "forward-failure", {src});
        }
      return;
    }
  if (st.entry && m_net.Now () >= st.entry->expires)
    {
      m_net.Log ().Add (RouteRecord{m_net.Bucket (), m_net.Now (), src, st.entry->requestId, "expired",
                                    st.entry->Active ().hops, {}});
      st.entry.reset ();
    }
  if (st.entry)
    {
      Transmit (packet);
      return;
    }
  if (st.pendingRequest == 0)
    {
      if (m_net.Now () < st.holdoffUntil)
        {
          m_net.Complete (packet, false, m_net.Now (), "no-route", {src});
          return;
        }
      if (Originate (src) == 0)
        {
          m_net.Complete (packet, false, m_net.Now (), "discovery-limit", {src});
          return;
        }
    }
  if (st.buffer.size () >= m_net.Config ().rmrls.bufferLimit)
    {
      m_net.Complete (packet, false, m_net.Now (), "buffer-full", {src});
      return;
    }
  st.buffer.push_back (packet);
}

void
RmrlsProtocol::Transmit (const DataPacket &packet)
{
  const RoutingTableEntry &entry = *m_sources[Index (packet.source)].entry;
  const std::vector<NodeId> path = entry.Active ().hops;
  const std::uint32_t requestId = entry.requestId;
  Seconds t = m_net.Now ();
  std::vector<NodeId> route{path[0]};
  m_net.BeginBatch ();
  for (std::size_t i = 0; i + 1 < path.size (); ++i)
    {
      const UnicastResult r = m_net.Unicast (path[i], path[i + 1], packet.bits, MessageKind::kData);
      t += r.duration;
      if (!r.delivered)
        {
          m_net.EndBatch ();
          m_net.Complete (packet, false, t, "forward-failure", std::move (route));
          ReportFailure (path, i, requestId);
          return;
        }
      route.push_back (path[i + 1]);
    }
  m_net.EndBatch ();
  m_net.Complete (packet, true, t, "delivered", std::move (route));
}

void
RmrlsProtocol::ReportFailure (const std::vector<NodeId> &path, std::size_t failedHop,
                              std::uint32_t requestId)
{
  const NodeId source = path[0];
  const NodeId from = path[failedHop];
  const NodeId to = path[failedHop + 1];
  auto &cache = m_cache[Index (from)];
  if (cache && cache->suffix.size () > 1 && cache->suffix[1] == to)
    {
      cache.reset ();
    }

  // End-to-end safety net for when the error report never arrives.
  Seconds rtt = 0.0;
  for (std::size_t i = 0; i + 1 < path.size (); ++i)
    {
      rtt += 2.0 * m_net.HopDelay (path[i], path[i + 1], m_net.Config ().PacketBits ());
    }
  m_net.Queue ().Schedule (m_net.Now () + m_net.Config ().rmrls.ackTimeoutFactor * rtt,
                           [this, source, requestId, path] () {
                             const auto &e = m_sources[Index (source)].entry;
                             if (e && e->requestId == requestId && e->Active ().hops == path)
                               {
                                 HandleRouteError (source, source, source, requestId);
                               }
                           });

  if (failedHop == 0)
    {
      HandleRouteError (source, from, to, requestId);
      return;
    }
  RerrPayload rerr;
  rerr.failedFrom = from;
  rerr.failedTo = to;
  rerr.source = source;
  rerr.requestId = requestId;
  for (std::size_t i = failedHop + 1; i-- > 0;)
    {
      rerr.reversePath.push_back (path[i]);
    }
  m_net.Log ().Add (RerrRecord{m_net.Bucket (), m_net.Now (), from, source, from, to, "sent"});
  SendRerr (std::move (rerr), 0);
}

void
RmrlsProtocol::SendRerr (RerrPayload rerr, std::size_t position)
{
  const NodeId from = rerr.reversePath[position];
  const NodeId to = rerr.reversePath[position + 1];
  const UnicastResult r = m_net.Unicast (from, to, m_net.Config ().rmrls.bits.rerr, MessageKind::kRerr);
  if (!r.delivered)
    {
      m_net.Log ().Add (RerrRecord{m_net.Bucket (), m_net.Now (), from, rerr.source, rerr.failedFrom,
                                   rerr.failedTo, "lost"});
      return;
    }
  m_net.Queue ().Schedule (m_net.Now () + r.duration, [this, rerr = std::move (rerr), position] () mutable {
    const std::size_t at = position + 1;
    const NodeId node = rerr.reversePath[at];
    if (at + 1 == rerr.reversePath.size ())
      {
        m_net.Log ().Add (RerrRecord{m_net.Bucket (), m_net.Now (), node, rerr.source, rerr.failedFrom,
                                     rerr.failedTo, "received"});
        HandleRouteError (rerr.source, rerr.failedFrom, rerr.failedTo, rerr.requestId);
        return;
      }
    auto &cache = m_cache[Index (node)];
    if (cache)
      {
        const RoutePath suffix{cache->suffix, 0.0};
        if (suffix.ContainsLink (rerr.failedFrom, rerr.failedTo))
          {
            cache.reset ();
          }
      }
    SendRerr (std::move (rerr), at);
  });
}

void
RmrlsProtocol::HandleRouteError (NodeId source, NodeId failedFrom, NodeId failedTo,
                                 std::uint32_t requestId)
{
  SourceState &st = m_sources[Index (source)];
  if (!st.entry || st.entry->requestId != requestId)
    {
      return;
    }
  RoutingTableEntry &e = *st.entry;
  // failedFrom == failedTo marks a timeout where the broken link is unknown
  const bool located = failedFrom != failedTo;
  if (located && !e.Active ().ContainsLink (failedFrom, failedTo))
    {
      return;
    }
  const bool backupUsable =
      !e.onBackup && e.backup &&
      (!located || (!e.backup->Contains (failedTo) && !e.backup->ContainsLink (failedFrom, failedTo)));
  if (backupUsable)
    {
      e.onBackup = true;
      m_net.Log ().Add (RouteRecord{m_net.Bucket (), m_net.Now (), source, requestId, "failover",
                                    e.backup->hops, {}});
      return;
    }
  m_net.Log ().Add (RouteRecord{m_net.Bucket (), m_net.Now (), source, requestId, "invalidated",
                                e.Active ().hops, {}});
  st.entry.reset ();
  if (st.pendingRequest == 0 && m_net.Now () >= st.holdoffUntil)
    {
      Originate (source);
    }
}

void
RmrlsProtocol::Finish ()
{
  for (std::uint32_t i = 0; i < m_sources.size (); ++i)
    {
      DropBuffered (MakeNodeId (i), "sim-end");
    }
}

} // namespace nanosim
