#include "nanosim/event-log.h"

#include <ostream>
#include <sstream>

namespace nanosim
{

namespace
{

using nlohmann::json;

json
Ids (const std::vector<NodeId> &ids)
{
  json a = json::array ();
  for (NodeId id : ids)
    {
      a.push_back (Index (id));
    }
  return a;
}

struct JsonVisitor
{
  json operator() (const TopologyRecord &r) const
  {
    json pos = json::array ();
    for (const Position &p : r.positions)
      {
        pos.push_back (json::array ({p.x, p.y}));
      }
    return {{"type", "topology"}, {"bucket", r.bucket},       {"seed", r.seed},
            {"range", r.commRange}, {"positions", pos}, {"sources", Ids (r.sources)}};
  }

  json operator() (const PacketRecord &r) const
  {
    return {{"type", "pkt"},
            {"bucket", r.bucket},
            {"packet", r.packet},
            {"source", Index (r.source)},
            {"t_gen", r.generated},
            {"t_end", r.finished},
            {"delivered", r.delivered},
            {"reason", r.reason},
            {"bits", r.bits},
            {"route", Ids (r.route)}};
  }

  json operator() (const RreqRecord &r) const
  {
    return {{"type", "rreq"},
            {"bucket", r.bucket},
            {"t", r.time},
            {"source", Index (r.source)},
            {"req", r.requestId},
            {"from", Index (r.from)},
            {"to", Index (r.to)},
            {"to_energy", r.toEnergy},
            {"hop_score", r.hopScore},
            {"total", r.total},
            {"fanout", r.fanout},
            {"via_cache", r.viaCache},
            {"record", Ids (r.record)},
            {"hop_scores", r.hopScores}};
  }

  json operator() (const RreqDropRecord &r) const
  {
    return {{"type", "rreq_drop"},   {"bucket", r.bucket},   {"t", r.time},
            {"node", Index (r.node)}, {"source", Index (r.source)}, {"req", r.requestId},
            {"reason", r.reason}};
  }

  json operator() (const SelectionRecord &r) const
  {
    json paths = json::array ();
    for (const CollectedPath &p : r.collected)
      {
        paths.push_back ({{"hops", Ids (p.hops)}, {"total", p.total}, {"hop_scores", p.hopScores}});
      }
    return {{"type", "select"},
            {"bucket", r.bucket},
            {"t", r.time},
            {"source", Index (r.source)},
            {"req", r.requestId},
            {"collected", paths},
            {"main", r.main},
            {"backup", r.backup},
            {"k_sim", r.kSim},
            {"sigma", r.sigma},
            {"convention", r.convention}};
  }

  json operator() (const RouteRecord &r) const
  {
    return {{"type", "route"},      {"bucket", r.bucket},         {"t", r.time},
            {"source", Index (r.source)}, {"req", r.requestId},   {"event", r.event},
            {"active", Ids (r.active)},   {"backup", Ids (r.backup)}};
  }

  json operator() (const RerrRecord &r) const
  {
    return {{"type", "rerr"},
            {"bucket", r.bucket},
            {"t", r.time},
            {"reporter", Index (r.reporter)},
            {"source", Index (r.source)},
            {"failed_from", Index (r.failedFrom)},
            {"failed_to", Index (r.failedTo)},
            {"outcome", r.outcome}};
  }

  json operator() (const DiscoveryRecord &r) const
  {
    return {{"type", "discovery"}, {"bucket", r.bucket}, {"t", r.time},
            {"source", Index (r.source)}, {"req", r.requestId}, {"event", r.event}};
  }

  json operator() (const DeathRecord &r) const
  {
    return {{"type", "death"}, {"bucket", r.bucket}, {"t", r.time},
            {"node", Index (r.node)}, {"cause", r.cause}};
  }

  json operator() (const EnergyRecord &r) const
  {
    return {{"type", "energy"},    {"bucket", r.bucket},     {"node", Index (r.node)},
            {"initial", r.initial}, {"credited", r.credited}, {"debited", r.debited},
            {"final", r.final},     {"alive", r.alive}};
  }

  json operator() (const TxRecord &r) const
  {
    return {{"type", "tx"},       {"bucket", r.bucket},     {"t", r.time},
            {"from", Index (r.from)}, {"to", r.to},         {"kind", ToString (r.kind)},
            {"bits", r.bits},     {"attempts", r.attempts}, {"ok", r.ok},
            {"energy", r.energy}};
  }

  json operator() (const RxChargeRecord &r) const
  {
    json c = json::array ();
    for (const auto &[id, amount] : r.charges)
      {
        c.push_back (json::array ({Index (id), amount}));
      }
    return {{"type", "rx"}, {"bucket", r.bucket}, {"t", r.time}, {"from", Index (r.from)}, {"charges", c}};
  }
};

struct DetailVisitor
{
  LogDetail operator() (const TopologyRecord &) const { return LogDetail::kSummary; }
  LogDetail operator() (const PacketRecord &) const { return LogDetail::kPackets; }
  LogDetail operator() (const RreqRecord &) const { return LogDetail::kControl; }
  LogDetail operator() (const RreqDropRecord &) const { return LogDetail::kControl; }
  LogDetail operator() (const SelectionRecord &) const { return LogDetail::kSummary; }
  LogDetail operator() (const RouteRecord &) const { return LogDetail::kSummary; }
  LogDetail operator() (const RerrRecord &) const { return LogDetail::kControl; }
  LogDetail operator() (const DiscoveryRecord &) const { return LogDetail::kControl; }
  LogDetail operator() (const DeathRecord &) const { return LogDetail::kSummary; }
  LogDetail operator() (const EnergyRecord &) const { return LogDetail::kSummary; }
  LogDetail operator() (const TxRecord &) const { return LogDetail::kFull; }
  LogDetail operator() (const RxChargeRecord &) const { return LogDetail::kFull; }
};

} // namespace

LogDetail
RequiredDetail (const LogRecord &record)
{
  return std::visit (DetailVisitor{}, record);
}

nlohmann::json
ToJson (const LogRecord &record)
{
  return std::visit (JsonVisitor{}, record);
}

EventLog::EventLog (LogDetail detail)
    : m_detail (detail)
{
}

void
EventLog::Add (LogRecord record)
{
  if (Wants (RequiredDetail (record)))
    {
      m_records.push_back (std::move (record));
    }
}

void
EventLog::WriteNdjson (std::ostream &os) const
{
  for (const auto &r : m_records)
    {
      os << ToJson (r).dump () << '\n';
    }
}

std::string
EventLog::ToNdjson () const
{
  std::ostringstream os;
  WriteNdjson (os);
  return os.str ();
}

} // namespace nanosim
