#include "nanosim/simulator.h"

#include "nanosim/baselines.h"
#include "nanosim/rmrls.h"

#include <random>

namespace nanosim
{

std::unique_ptr<Protocol>
MakeProtocol (ProtocolKind kind, Network &net)
{
  switch (kind)
    {
    case ProtocolKind::kRmrls:
      return std::make_unique<RmrlsProtocol> (net);
    case ProtocolKind::kSfr:
      return std::make_unique<SfrProtocol> (net);
    case ProtocolKind::kRandomNextHop:
      return std::make_unique<RandomNextHopProtocol> (net);
    }
  throw InvalidInput ("unknown protocol");
}

double
EffectivePacketInterval (const ScenarioConfig &config)
{
  if (!config.samplePacketInterval)
    {
      return config.packetInterval;
    }
  std::mt19937_64 rng (MixSeed (config.rngSeed, 0x696e74));
  return std::uniform_real_distribution<double> (0.001, 0.01) (rng);
}

BucketSimulation::BucketSimulation (const ScenarioConfig &config, int bucket, EventLog &log)
    : m_config (config),
      m_log (log)
{
  m_config.Validate ();
  Topology topo = BuildTopology (m_config, m_config.rngSeed, bucket);
  m_log.Add (TopologyRecord{bucket, m_config.rngSeed, topo.commRange, topo.positions, topo.sources});
  m_net = std::make_unique<Network> (m_config, std::move (topo), m_config.rngSeed, m_log);
  m_protocol = MakeProtocol (m_config.protocol, *m_net);
  m_interval = EffectivePacketInterval (m_config);
}

RmrlsProtocol *
BucketSimulation::Rmrls ()
{
  return dynamic_cast<RmrlsProtocol *> (m_protocol.get ());
}

void
BucketSimulation::Begin ()
{
  m_started = true;
  if (m_config.simTime <= 0.0)
    {
      return;
    }
  m_protocol->Start ();
  std::mt19937_64 phaseRng (MixSeed (m_config.rngSeed, 0x706800ULL + static_cast<std::uint64_t> (m_net->Bucket ())));
  std::uniform_real_distribution<double> phase (0.0, m_interval);
  for (NodeId src : m_net->Topo ().sources)
    {
      const Seconds first = m_config.trafficStart + phase (phaseRng);
      if (first < m_config.simTime)
        {
          m_net->Queue ().Schedule (first, [this, src] () { Generate (src); });
        }
    }
}

void
BucketSimulation::Generate (NodeId source)
{
  const Seconds now = m_net->Now ();
  DataPacket p{m_net->NextPacketId (), source, now, m_config.PacketBits ()};
  ++m_generated;
  m_protocol->Send (p);
  const Seconds next = now + m_interval;
  if (next < m_config.simTime)
    {
      m_net->Queue ().Schedule (next, [this, source] () { Generate (source); });
    }
}

void
BucketSimulation::RunUntil (Seconds t)
{
  if (m_finished)
    {
      throw StateError ("simulation already finished");
    }
  if (!m_started)
    {
      Begin ();
    }
  const Seconds until = std::min (t, m_config.simTime);
  if (until > m_net->Now ())
    {
      m_net->Queue ().RunUntil (until);
    }
}

void
BucketSimulation::InjectDeath (NodeId node)
{
  if (node == kNcId || Index (node) >= m_net->Size ())
    {
      throw InvalidInput ("only existing nanonodes can be killed");
    }
  m_net->Kill (node, "injected");
}

void
BucketSimulation::Finish ()
{
  RunUntil (m_config.simTime);
  m_finished = true;
  if (m_config.simTime <= 0.0)
    {
      return;
    }
  m_protocol->Finish ();
  m_net->LogLedgers ();
}

EventLog
Run (const ScenarioConfig &config)
{
  config.Validate ();
  EventLog log (config.logDetail);
  for (int bucket : config.buckets)
    {
      BucketSimulation sim (config, bucket, log);
      sim.Finish ();
    }
  return log;
}

} // namespace nanosim
