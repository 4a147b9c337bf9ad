#include "nanosim/network.h"

#include <doctest.h>

#include <cmath>

using namespace nanosim;

namespace
{

Topology
Line (const std::vector<Position> &pos, double range = 2.0)
{
  Topology t;
  t.positions = pos;
  t.neighbors = BuildAdjacency (pos, range);
  t.commRange = range;
  t.bucket = 1;
  return t;
}

ScenarioConfig
Quiet ()
{
  ScenarioConfig c;
  c.channel.fluctuationStdDb = 0.0;
  c.energy.overhearing = false;
  c.energy.harvestRate = 0.0;
  return c;
}

} // namespace

TEST_CASE ("one-hop unicast charges sender and addressee")
{
  EventLog log (LogDetail::kFull);
  const ScenarioConfig cfg = Quiet ();
  Network net (cfg, Line ({{11, 5}, {10, 5}, {9.5, 5}}), 1, log);
  const UnicastResult r = net.Unicast (MakeNodeId (1), kNcId, 1024, MessageKind::kData);
  CHECK (r.delivered);
  CHECK (r.attempts == 1);
  const double eBit = cfg.energy.eBit;
  CHECK (net.BatteryOf (MakeNodeId (1)).Debited () == doctest::Approx (1024 * eBit));
  CHECK (net.BatteryOf (kNcId).Debited () == doctest::Approx (512 * eBit));
  CHECK (net.BatteryOf (MakeNodeId (2)).Debited () == 0.0);
  CHECK (r.duration == doctest::Approx (1024 / cfg.dataRate + 1e-3 / 3e8));
  CHECK (net.HopDelay (MakeNodeId (1), kNcId, 1024) == doctest::Approx (r.duration));
  CHECK (log.Select<TxRecord> ().size () == 1);
  CHECK (log.Select<RxChargeRecord> ().size () == 1);
}

TEST_CASE ("overhearing charges every neighbor")
{
  EventLog log (LogDetail::kPackets);
  ScenarioConfig cfg = Quiet ();
  cfg.energy.overhearing = true;
  Network net (cfg, Line ({{11, 5}, {10, 5}, {9.5, 5}}), 1, log);
  net.Unicast (MakeNodeId (1), kNcId, 1024, MessageKind::kData);
  CHECK (net.BatteryOf (MakeNodeId (2)).Debited () == doctest::Approx (512 * cfg.energy.eBit));
}

TEST_CASE ("out-of-range and dead endpoints")
{
  EventLog log;
  Network net (Quiet (), Line ({{11, 5}, {10, 5}, {5, 5}}), 1, log);
  CHECK (net.FindLink (MakeNodeId (2), kNcId) == nullptr);
  const UnicastResult far = net.Unicast (MakeNodeId (2), kNcId, 1024, MessageKind::kData);
  CHECK_FALSE (far.delivered);
  CHECK (far.attempts == 0);

  net.Kill (MakeNodeId (1), "injected");
  CHECK_FALSE (net.Alive (MakeNodeId (1)));
  CHECK (net.Unicast (MakeNodeId (1), kNcId, 16, MessageKind::kHello).attempts == 0);
  net.Kill (kNcId, "injected");
  CHECK (net.Alive (kNcId));
  CHECK (log.Select<DeathRecord> ().size () == 1);
}

TEST_CASE ("a dead addressee consumes every attempt")
{
  EventLog log;
  ScenarioConfig cfg = Quiet ();
  cfg.linkRetries = 2;
  Network net (cfg, Line ({{11, 5}, {10, 5}, {9, 5}}), 1, log);
  net.Kill (MakeNodeId (1), "injected");
  const UnicastResult r = net.Unicast (MakeNodeId (2), MakeNodeId (1), 64, MessageKind::kData);
  CHECK_FALSE (r.delivered);
  CHECK (r.attempts == 3);
  CHECK (net.BatteryOf (MakeNodeId (2)).Debited () == doctest::Approx (3 * 64 * cfg.energy.eBit));
}

TEST_CASE ("running out of energy kills the sender")
{
  EventLog log;
  ScenarioConfig cfg = Quiet ();
  cfg.energy.initialEnergy = 1500 * cfg.energy.eBit;
  cfg.energy.batteryCapacity = cfg.energy.initialEnergy;
  Network net (cfg, Line ({{11, 5}, {10, 5}}), 1, log);
  CHECK (net.Unicast (MakeNodeId (1), kNcId, 1024, MessageKind::kData).delivered);
  CHECK_FALSE (net.Unicast (MakeNodeId (1), kNcId, 1024, MessageKind::kData).delivered);
  CHECK_FALSE (net.Alive (MakeNodeId (1)));
  const auto deaths = log.Select<DeathRecord> ();
  REQUIRE (deaths.size () == 1);
  CHECK (deaths[0]->cause == "energy");
}

TEST_CASE ("attempt counts follow the geometric law")
{
  // The sensitivity is raised to the mean received power so that every
  // attempt succeeds with probability one half.
  EventLog log;
  ScenarioConfig cfg;
  cfg.channel.rxSensitivityDbm = WattsToDbm (ChannelModel (cfg.channel).MeanRxPowerW (1.9));
  cfg.linkRetries = 3;
  cfg.energy.initialEnergy = 1.0;
  cfg.energy.batteryCapacity = 1.0;
  cfg.energy.overhearing = false;
  Network net (cfg, Line ({{11, 5}, {3, 5}, {1.1, 5}}), 7, log);
  const Link *link = net.FindLink (MakeNodeId (2), MakeNodeId (1));
  REQUIRE (link != nullptr);
  const double p = link->success;
  CHECK (p == doctest::Approx (0.5).epsilon (1e-9));

  const int n = 40000;
  std::vector<int> histogram (cfg.linkRetries + 2, 0);
  int failures = 0;
  for (int i = 0; i < n; ++i)
    {
      const UnicastResult r = net.Unicast (MakeNodeId (2), *link, 16, MessageKind::kData);
      if (r.delivered)
        {
          ++histogram[r.attempts];
        }
      else
        {
          ++failures;
          CHECK (r.attempts == cfg.linkRetries + 1);
        }
    }
  for (std::uint32_t k = 1; k <= cfg.linkRetries + 1; ++k)
    {
      const double expect = p * std::pow (1.0 - p, k - 1.0);
      const double sd = std::sqrt (expect * (1 - expect) / n);
      CHECK (std::abs (histogram[k] / double (n) - expect) < 5 * sd);
    }
  const double lost = std::pow (1.0 - p, cfg.linkRetries + 1.0);
  CHECK (std::abs (failures / double (n) - lost) < 5 * std::sqrt (lost * (1 - lost) / n) + 1e-4);
}

TEST_CASE ("batched receive charges equal immediate charges")
{
  ScenarioConfig cfg = Quiet ();
  cfg.energy.overhearing = true;
  const Topology topo = Line ({{11, 5}, {10, 5}, {9, 5}, {8.5, 5.5}});
  EventLog plain;
  EventLog batched;
  Network a (cfg, topo, 1, plain);
  Network b (cfg, topo, 1, batched);
  auto traffic = [] (Network &net) {
    net.Unicast (MakeNodeId (3), MakeNodeId (2), 1024, MessageKind::kData);
    net.Broadcast (MakeNodeId (2), 16, MessageKind::kHello);
    net.Unicast (MakeNodeId (2), MakeNodeId (1), 1024, MessageKind::kData);
    net.Unicast (MakeNodeId (1), kNcId, 48, MessageKind::kRreq);
  };
  traffic (a);
  b.BeginBatch ();
  b.BeginBatch ();
  traffic (b);
  b.EndBatch ();
  const double midway = b.BatteryOf (MakeNodeId (3)).Debited ();
  b.EndBatch ();
  CHECK (midway == doctest::Approx (1024 * cfg.energy.eBit));
  for (std::uint32_t i = 0; i < topo.Size (); ++i)
    {
      CHECK (a.BatteryOf (MakeNodeId (i)).Debited () ==
             doctest::Approx (b.BatteryOf (MakeNodeId (i)).Debited ()).epsilon (1e-12));
    }
}

TEST_CASE ("closer links point toward the NC")
{
  EventLog log;
  Network net (Quiet (), Line ({{11, 5}, {10, 5}, {9, 5}, {8.5, 5.5}, {9.2, 6}}), 1, log);
  const auto &c1 = net.CloserLinks (MakeNodeId (1));
  REQUIRE (c1.size () == 1);
  CHECK (c1[0]->to == kNcId);
  for (const Link *l : net.CloserLinks (MakeNodeId (3)))
    {
      CHECK (net.DistanceToNc (l->to) < net.DistanceToNc (MakeNodeId (3)));
    }
}

TEST_CASE ("harvest settles lazily through the energy query")
{
  EventLog log;
  ScenarioConfig cfg = Quiet ();
  cfg.energy.harvestRate = 1e-8;
  Network net (cfg, Line ({{11, 5}, {10, 5}}), 1, log);
  net.Unicast (MakeNodeId (1), kNcId, 1024, MessageKind::kData);
  net.Queue ().RunUntil (2.0);
  const double expect = cfg.energy.initialEnergy - 1024 * cfg.energy.eBit + 2.0 * 1e-8;
  CHECK (net.Energy (MakeNodeId (1)) == doctest::Approx (expect).epsilon (1e-12));
  net.LogLedgers ();
  for (const EnergyRecord *e : log.Select<EnergyRecord> ())
    {
      CHECK (e->final == doctest::Approx (e->initial + e->credited - e->debited).epsilon (1e-12));
    }
}

TEST_CASE ("packets complete exactly once")
{
  EventLog log;
  Network net (Quiet (), Line ({{11, 5}, {10, 5}}), 1, log);
  const DataPacket pkt{net.NextPacketId (), MakeNodeId (1), 0.0, 1024};
  net.Complete (pkt, true, 0.1, "delivered", {MakeNodeId (1), kNcId});
  CHECK (net.Completed (pkt.id));
  CHECK_THROWS_AS (net.Complete (pkt, false, 0.2, "late", {}), StateError);
}
