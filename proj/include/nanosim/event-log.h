#ifndef NANOSIM_EVENT_LOG_H
#define NANOSIM_EVENT_LOG_H

#include "nanosim/config.h"
#include "nanosim/event-queue.h"
#include "nanosim/types.h"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nanosim
{

struct TopologyRecord
{
  int bucket = 0;
  std::uint64_t seed = 0;
  double commRange = 0.0;
  std::vector<Position> positions;
  std::vector<NodeId> sources;
};

/// Final outcome of one generated data packet.
struct PacketRecord
{
  int bucket = 0;
  std::uint64_t packet = 0;
  NodeId source{};
  Seconds generated = 0.0;
  Seconds finished = 0.0;
  bool delivered = false;
  std::string reason; ///< "delivered" or the drop reason
  std::uint32_t bits = 0;
  std::vector<NodeId> route; ///< nodes the packet traversed, source first
};

/// One RREQ handed to a next hop.
struct RreqRecord
{
  int bucket = 0;
  Seconds time = 0.0;
  NodeId source{};
  std::uint32_t requestId = 0;
  NodeId from{};
  NodeId to{};
  double toEnergy = 0.0;  ///< residual energy the next hop reported
  double hopScore = 0.0;
  double total = 0.0;     ///< total stability after this hop
  std::size_t fanout = 0; ///< m chosen at `from`
  bool viaCache = false;
  std::vector<NodeId> record; ///< route record including `to`
  std::vector<double> hopScores;
};

struct RreqDropRecord
{
  int bucket = 0;
  Seconds time = 0.0;
  NodeId node{};
  NodeId source{};
  std::uint32_t requestId = 0;
  std::string reason; ///< "duplicate", "loop", "dead", "no-candidates"
};

struct CollectedPath
{
  std::vector<NodeId> hops;
  double total = 0.0;
  std::vector<double> hopScores;
};

/// Path choice made by the NC when a collection window closes.
struct SelectionRecord
{
  int bucket = 0;
  Seconds time = 0.0;
  NodeId source{};
  std::uint32_t requestId = 0;
  std::vector<CollectedPath> collected;
  int main = -1;
  int backup = -1;
  double kSim = 0.0;
  double sigma = 0.0;
  std::string convention;
};

/// Route installed at a source by an RREP, or a switch of the active path.
struct RouteRecord
{
  int bucket = 0;
  Seconds time = 0.0;
  NodeId source{};
  std::uint32_t requestId = 0;
  std::string event; ///< "installed", "failover", "invalidated", "expired"
  std::vector<NodeId> active;
  std::vector<NodeId> backup;
};

struct RerrRecord
{
  int bucket = 0;
  Seconds time = 0.0;
  NodeId reporter{};
  NodeId source{};
  NodeId failedFrom{};
  NodeId failedTo{};
  std::string outcome; ///< "sent", "received", "lost"
};

struct DiscoveryRecord
{
  int bucket = 0;
  Seconds time = 0.0;
  NodeId source{};
  std::uint32_t requestId = 0;
  std::string event; ///< "start", "timeout", "exhausted", "no-candidates"
};

struct DeathRecord
{
  int bucket = 0;
  Seconds time = 0.0;
  NodeId node{};
  std::string cause; ///< "energy" or "injected"
};

/// Per-node battery ledger at the end of a bucket run.
struct EnergyRecord
{
  int bucket = 0;
  NodeId node{};
  double initial = 0.0;
  double credited = 0.0;
  double debited = 0.0;
  double final = 0.0;
  bool alive = true;
};

/// A frame put on the air (all attempts of one unicast, or one broadcast).
struct TxRecord
{
  int bucket = 0;
  Seconds time = 0.0;
  NodeId from{};
  std::int64_t to = -1; ///< -1 for broadcasts
  MessageKind kind = MessageKind::kHello;
  std::uint32_t bits = 0;
  std::uint32_t attempts = 0;
  bool ok = false;
  double energy = 0.0; ///< debited from the sender
};

/// Receive-side debits caused by transmissions of `from`.
struct RxChargeRecord
{
  int bucket = 0;
  Seconds time = 0.0;
  NodeId from{};
  std::vector<std::pair<NodeId, double>> charges;
};

using LogRecord =
    std::variant<TopologyRecord, PacketRecord, RreqRecord, RreqDropRecord, SelectionRecord,
                 RouteRecord, RerrRecord, DiscoveryRecord, DeathRecord, EnergyRecord, TxRecord,
                 RxChargeRecord>;

/// Least detail level at which a record kind is kept.
LogDetail RequiredDetail (const LogRecord &record);

nlohmann::json ToJson (const LogRecord &record);

/**
 * \brief Ordered simulation records filtered by detail level.
 */
class EventLog
{
public:
  explicit EventLog (LogDetail detail = LogDetail::kPackets);

  LogDetail Detail () const { return m_detail; }
  /// True when records requiring `level` are kept.
  bool Wants (LogDetail level) const
  {
    return m_detail != LogDetail::kNone && static_cast<int> (level) <= static_cast<int> (m_detail);
  }

  void Add (LogRecord record);
  const std::vector<LogRecord> &Records () const { return m_records; }
  std::size_t Size () const { return m_records.size (); }

  void WriteNdjson (std::ostream &os) const;
  std::string ToNdjson () const;

  template <typename T>
  std::vector<const T *> Select () const
  {
    std::vector<const T *> out;
    for (const auto &r : m_records)
      {
        if (const T *p = std::get_if<T> (&r))
          {
            out.push_back (p);
          }
      }
    return out;
  }

private:
  LogDetail m_detail;
  std::vector<LogRecord> m_records;
};

} // namespace nanosim

#endif /* NANOSIM_EVENT_LOG_H */
