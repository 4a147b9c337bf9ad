#ifndef NANOSIM_SIMULATOR_H
#define NANOSIM_SIMULATOR_H

#include "nanosim/config.h"
#include "nanosim/event-log.h"
#include "nanosim/network.h"
#include "nanosim/protocol.h"

#include <memory>

namespace nanosim
{

class RmrlsProtocol;

/// Packet interval of a run: the configured value, or a per-seed draw
/// from [0.001, 0.01] s when sampling is enabled.
double EffectivePacketInterval (const ScenarioConfig &config);

/**
 * \brief One distance-bucket sub-run: shared background deployment, the
 * bucket's sources, a protocol instance and its event queue.
 */
class BucketSimulation
{
public:
  /// Validates `config` and logs the topology record.
  BucketSimulation (const ScenarioConfig &config, int bucket, EventLog &log);

  Network &Net () { return *m_net; }
  Protocol &Proto () { return *m_protocol; }
  /// The protocol as RMRLS, or nullptr for the baselines.
  RmrlsProtocol *Rmrls ();

  /// Advances the simulation clock to min(t, simTime).
  void RunUntil (Seconds t);
  /// Kills a nanonode immediately (failure injection).
  void InjectDeath (NodeId node);
  /// Runs to the configured end, drops pending packets and logs ledgers.
  void Finish ();

  std::uint64_t Generated () const { return m_generated; }

private:
  void Begin ();
  void Generate (NodeId source);

  ScenarioConfig m_config;
  EventLog &m_log;
  std::unique_ptr<Network> m_net;
  std::unique_ptr<Protocol> m_protocol;
  double m_interval = 0.01;
  bool m_started = false;
  bool m_finished = false;
  std::uint64_t m_generated = 0;
};

/// Runs every configured bucket in order with config.protocol and
/// config.rngSeed.
EventLog Run (const ScenarioConfig &config);

} // namespace nanosim

#endif /* NANOSIM_SIMULATOR_H */
