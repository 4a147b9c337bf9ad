#ifndef NANOSIM_RMRLS_H
#define NANOSIM_RMRLS_H

#include "nanosim/energy.h"
#include "nanosim/kalman.h"
#include "nanosim/protocol.h"
#include "nanosim/similarity.h"
#include "nanosim/stability.h"

#include <deque>
#include <map>
#include <optional>
#include <unordered_set>
#include <vector>

namespace nanosim
{

/// Neighbor that answered a discovery with its residual energy.
struct Candidate
{
  NodeId id{};
  double residualEnergy = 0.0;
};

/// Source-side route state toward the NC.
struct RoutingTableEntry
{
  RoutePath main;
  std::optional<RoutePath> backup;
  bool onBackup = false;
  std::uint32_t requestId = 0;
  std::vector<double> mainHopScores;
  Seconds expires = 0.0;

  const RoutePath &Active () const { return onBackup ? *backup : main; }
};

/// Relay-side cached suffix toward the NC learned from a passing RREP.
struct CachedRoute
{
  std::vector<NodeId> suffix; ///< starts at the caching node, ends at the NC
  double nextHopStability = 0.0;
  Seconds expires = 0.0;
};

/// NC-side collection of RREQs for one (source, request id).
struct PendingRequest
{
  NodeId source{};
  std::uint32_t requestId = 0;
  std::vector<RoutePath> collected;
  std::vector<std::vector<double>> hopScores;
  Seconds windowDeadline = 0.0;
};

/// Main path by highest total stability, then fewer hops, then hop order.
std::size_t SelectMainIndex (const std::vector<RoutePath> &paths);

/**
 * \brief Reliable multipath routing based on link stability.
 *
 * Nodes estimate link quality from HELLO beacons with a Kalman filter,
 * discover energy-qualified neighbors on demand, and forward route requests
 * to the most stable neighbors only. The NC keeps the most stable collected
 * path as the main route and the least similar one as the backup.
 */
class RmrlsProtocol : public Protocol
{
public:
  explicit RmrlsProtocol (Network &net);

  ProtocolKind Kind () const override { return ProtocolKind::kRmrls; }
  void Start () override;
  void Send (const DataPacket &packet) override;
  void Finish () override;

  /// NDIS broadcast and NFEE replies; responders pass the energy gate.
  std::vector<Candidate> DiscoverCandidates (NodeId node);
  /// Route entry held by `source`, if any.
  const RoutingTableEntry *Entry (NodeId source) const;
  const CachedRoute *Cache (NodeId node) const;
  /// Installs a relay cache entry directly; intended for tests.
  void SetCache (NodeId node, CachedRoute route) { m_cache[Index (node)] = std::move (route); }
  /// Link quality `node` currently estimates toward `neighbor`.
  double LinkQualityEstimate (NodeId node, NodeId neighbor) const;
  const EnergyGate &Gate () const { return m_gate; }

  /// Starts route discovery at `source` now; returns the request id or 0
  /// when discovery is not allowed (dead source, cap reached).
  std::uint32_t Originate (NodeId source);
  /// Delivers an RREQ to `node` as if it had just arrived.
  void HandleRreq (NodeId node, RreqPayload rreq);

private:
  struct SourceState
  {
    std::optional<RoutingTableEntry> entry;
    std::uint32_t nextRequestId = 1;
    std::uint32_t pendingRequest = 0;
    Seconds holdoffUntil = 0.0;
    std::uint32_t failedDiscoveries = 0; ///< consecutive timeouts
    std::uint32_t discoveries = 0;
    std::deque<DataPacket> buffer;
  };

  void HelloRound ();
  void CheckNeighbors ();
  std::size_t LinkIndex (NodeId node, NodeId neighbor) const;

  void ForwardRreq (NodeId node, const RreqPayload &rreq);
  void SendRreq (NodeId from, NodeId to, const RreqPayload &base, double hopScore, double toEnergy,
                 std::size_t fanout, bool viaCache);
  void CloseWindow (std::uint64_t key);
  void SendRrep (RrepPayload rrep, std::size_t position);
  void InstallRoute (NodeId source, const RrepPayload &rrep);
  void DiscoveryTimeout (NodeId source, std::uint32_t requestId);

  void Transmit (const DataPacket &packet);
  void ReportFailure (const std::vector<NodeId> &path, std::size_t failedHop,
                      std::uint32_t requestId);
  void SendRerr (RerrPayload rerr, std::size_t position);
  void HandleRouteError (NodeId source, NodeId failedFrom, NodeId failedTo, std::uint32_t requestId);
  void DropBuffered (NodeId source, const char *reason);

  EnergyGate m_gate;
  SimilarityParams m_similarity;
  std::vector<std::vector<LinkEstimator>> m_estimators; ///< aligned with Network::Links
  std::vector<std::vector<Seconds>> m_lastHeard;
  std::vector<std::optional<CachedRoute>> m_cache;
  std::vector<std::unordered_set<std::uint64_t>> m_seen;
  std::vector<SourceState> m_sources;
  std::map<std::uint64_t, PendingRequest> m_pending;
};

} // namespace nanosim

#endif /* NANOSIM_RMRLS_H */
