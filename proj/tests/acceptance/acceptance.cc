// Acceptance checks. Each criterion prints one line starting with PASS or
// FAIL; the exit status is non-zero when any criterion fails.
//
//   acceptance --suite exact|property|trend|all [--config FILE] [--csv FILE]

#include "nanosim/config.h"
#include "nanosim/energy.h"
#include "nanosim/kalman.h"
#include "nanosim/metrics.h"
#include "nanosim/network.h"
#include "nanosim/rmrls.h"
#include "nanosim/runner.h"
#include "nanosim/similarity.h"
#include "nanosim/simulator.h"
#include "nanosim/stability.h"
#include "nanosim/topology.h"

#include <algorithm>
#include <chrono>
#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace nanosim;

namespace
{

int g_failures = 0;

void
Report (bool ok, const std::string &name, const std::string &detail)
{
  std::printf ("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str (), detail.c_str ());
  std::fflush (stdout);
  if (!ok)
    {
      ++g_failures;
    }
}

std::string
Fmt (const char *format, ...) __attribute__ ((format (printf, 1, 2)));

std::string
Fmt (const char *format, ...)
{
  char buf[512];
  va_list args;
  va_start (args, format);
  std::vsnprintf (buf, sizeof buf, format, args);
  va_end (args);
  return buf;
}

NodeId
N (std::uint32_t i)
{
  return MakeNodeId (i);
}

RoutePath
Path (std::initializer_list<std::uint32_t> ids)
{
  RoutePath p;
  for (std::uint32_t i : ids)
    {
      p.hops.push_back (N (i));
    }
  return p;
}

// ---------------------------------------------------------------- exact

void
CheckSimilarityExample ()
{
  // A-B-D-G-H-J against A-C-E-F-I-G-H-J with A..I = 1..9 and J = NC.
  const RoutePath main = Path ({1, 2, 4, 7, 8, 0});
  const RoutePath cand = Path ({1, 3, 5, 6, 9, 7, 8, 0});
  SimilarityParams p;
  const double omega = Similarity (main, cand, p);
  Report (std::abs (omega - 1.5) <= 1e-12, "exact.similarity-example",
          Fmt ("omega = %.15g, expected 1.5", omega));
}

void
CheckFanOut ()
{
  struct Row
  {
    std::size_t n, tau, m;
  };
  const Row table[] = {{2, 2, 2}, {5, 2, 2}, {7, 2, 3}, {1, 5, 1}};
  std::string bad;
  for (const Row &r : table)
    {
      const std::size_t m = NextHopCount (r.n, r.tau);
      if (m != r.m)
        {
          bad += Fmt (" (n=%zu tau=%zu got %zu)", r.n, r.tau, m);
        }
    }
  Report (bad.empty (), "exact.fan-out-table",
          bad.empty () ? Fmt ("%zu rows match", std::size (table)) : "mismatch" + bad);
}

Topology
Diamond ()
{
  Topology t;
  t.positions = {{11, 5}, {10, 5}, {10, 6}, {8.5, 5.5}};
  t.neighbors = BuildAdjacency (t.positions, 2.0);
  t.commRange = 2.0;
  t.bucket = 3;
  t.sources = {N (3)};
  return t;
}

std::size_t
RespondersAt (double energy)
{
  ScenarioConfig c;
  c.channel.fluctuationStdDb = 0.0;
  c.energy.harvestRate = 0.0;
  c.energy.initialEnergy = energy;
  c.energy.batteryCapacity = energy;
  EventLog log (LogDetail::kNone);
  Network net (c, Diamond (), 1, log);
  RmrlsProtocol proto (net);
  net.BeginBatch ();
  const std::size_t n = proto.DiscoverCandidates (N (3)).size ();
  net.EndBatch ();
  return n;
}

void
CheckEnergyGate ()
{
  const ScenarioConfig c;
  const double threshold = EnergyGate::FromConfig (c).Threshold ();
  const std::size_t at = RespondersAt (threshold);
  const std::size_t below = RespondersAt (std::nextafter (threshold, 0.0));
  const bool ok = threshold == 1.4e-13 && at == 2 && below == 0;
  Report (ok, "exact.energy-gate",
          Fmt ("threshold = %.17g J, responders at threshold %zu of 2, just below %zu", threshold, at,
               below));
}

void
CheckKalman ()
{
  // Worked step: prior 2 with covariance 1.01, measurement 2.5, Z = 0.04.
  KalmanState s;
  s.estimate = 2.0;
  s.covariance = 1.01;
  s.k = 1.0;
  s.h = 1.0;
  s.q = 0.0;
  s.z = 0.04;
  s.initialized = true;
  const KalmanState post = KfUpdate (s, 2.5);
  const bool worked = std::abs (post.estimate - 2.480952) <= 1e-6 &&
                      std::abs (post.covariance - 0.038476) <= 1e-6;

  // 50 predict/update steps against a long double evaluation of the same
  // recurrence with random parameters and measurements.
  std::mt19937_64 rng (20240611);
  std::uniform_real_distribution<double> unit (0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial)
    {
      KalmanState f;
      f.estimate = -60.0 + 40.0 * unit (rng);
      f.covariance = 0.1 + 2.0 * unit (rng);
      f.k = 0.8 + 0.4 * unit (rng);
      f.h = 0.5 + unit (rng);
      f.q = 0.001 + 0.05 * unit (rng);
      f.z = 0.01 + 2.0 * unit (rng);
      f.initialized = true;
      long double x = f.estimate, o = f.covariance;
      const long double k = f.k, h = f.h, q = f.q, z = f.z;
      for (int step = 0; step < 50; ++step)
        {
          const double y = -60.0 + 40.0 * unit (rng);
          f = KfUpdate (KfPredict (f), y);
          const long double xp = k * x;
          const long double op = k * o * k + q;
          const long double m = op * h / (h * op * h + z);
          x = xp + m * (y - h * xp);
          o = (1.0L - m * h) * op;
          const auto rel = [] (double a, long double b) {
            return static_cast<double> (std::abs (a - b) / std::max (1.0L, std::abs (b)));
          };
          worst = std::max ({worst, rel (f.estimate, x), rel (f.covariance, o)});
        }
    }
  Report (worked && worst <= 1e-12, "exact.kalman-trace",
          Fmt ("worked step (%.7f, %.7f); 20 traces x 50 steps, worst relative error %.3g",
               post.estimate, post.covariance, worst));
}

struct OracleScores
{
  std::array<long double, 3> w{};
  std::vector<long double> s;
};

// Independent evaluation of min-max normalization, entropy weights and
// weighted scores in extended precision.
OracleScores
ScoreOracle (const std::vector<std::array<double, 3>> &raw)
{
  const std::size_t n = raw.size ();
  std::vector<std::array<long double, 3>> b (n);
  for (int j = 0; j < 3; ++j)
    {
      long double lo = raw[0][j], hi = raw[0][j];
      for (const auto &r : raw)
        {
          lo = std::min<long double> (lo, r[j]);
          hi = std::max<long double> (hi, r[j]);
        }
      for (std::size_t i = 0; i < n; ++i)
        {
          if (hi == lo)
            {
              b[i][j] = 1.0L;
            }
          else if (j == 2)
            {
              b[i][j] = (hi - raw[i][j]) / (hi - lo);
            }
          else
            {
              b[i][j] = (raw[i][j] - lo) / (hi - lo);
            }
        }
    }
  OracleScores out;
  std::array<long double, 3> d{};
  for (int j = 0; j < 3; ++j)
    {
      long double sum = 0.0L;
      for (const auto &r : b)
        {
          sum += r[j];
        }
      long double e = 0.0L;
      for (const auto &r : b)
        {
          const long double p = r[j] / sum;
          if (p > 0.0L)
            {
              e -= p * std::log (p);
            }
        }
      e /= std::log (static_cast<long double> (n));
      d[j] = 1.0L - std::min (1.0L, std::max (0.0L, e));
    }
  const long double dSum = d[0] + d[1] + d[2];
  for (int j = 0; j < 3; ++j)
    {
      out.w[j] = dSum > 0.0L ? d[j] / dSum : 1.0L / 3.0L;
    }
  for (const auto &r : b)
    {
      out.s.push_back (out.w[0] * r[0] + out.w[1] * r[1] + out.w[2] * r[2]);
    }
  return out;
}

void
CheckEntropyWeights ()
{
  std::mt19937_64 rng (77);
  std::uniform_real_distribution<double> unit (0.0, 1.0);
  double worstSum = 0.0;
  double worstW = 0.0;
  int selectionMismatch = 0;
  int nearTies = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial)
    {
      const std::size_t n = 2 + trial % 5;
      const std::size_t tau = 1 + trial % 3;
      std::vector<std::array<double, 3>> raw (n);
      FactorMatrix m;
      for (std::size_t i = 0; i < n; ++i)
        {
          raw[i] = {1e-6 * unit (rng), 0.01 + 0.98 * unit (rng), 0.1 + 12.0 * unit (rng)};
          // Every seventh matrix repeats a row to exercise exact ties.
          if (trial % 7 == 0 && i == n - 1)
            {
              raw[i] = raw[0];
            }
          m.rows.push_back ({raw[i][0], raw[i][1], raw[i][2]});
          m.candidateIds.push_back (N (static_cast<std::uint32_t> (10 + (i * 7) % n)));
        }
      const NormalizedMatrix b = *Normalize (m);
      const StabilityWeights w = EntropyWeights (b);
      const OracleScores oracle = ScoreOracle (raw);
      worstSum = std::max (worstSum, std::abs (w.w[0] + w.w[1] + w.w[2] - 1.0));
      for (int j = 0; j < 3; ++j)
        {
          worstW = std::max (worstW, static_cast<double> (std::abs (w.w[j] - oracle.w[j])));
        }

      // Oracle ranking: count the candidates that beat each one.
      std::vector<std::size_t> rank (n, 0);
      for (std::size_t i = 0; i < n; ++i)
        {
          for (std::size_t k = 0; k < n; ++k)
            {
              const auto key = [&] (std::size_t x) {
                return std::make_tuple (-oracle.s[x], -raw[x][1], Index (m.candidateIds[x]));
              };
              if (k != i && key (k) < key (i))
                {
                  ++rank[i];
                }
            }
        }
      const std::size_t count = n <= tau ? n : n / tau;
      std::vector<NodeId> expected (count);
      for (std::size_t i = 0; i < n; ++i)
        {
          if (rank[i] < count)
            {
              expected[rank[i]] = m.candidateIds[i];
            }
        }
      const std::vector<ScoredCandidate> got = SelectNextHops (m, tau);
      bool same = got.size () == count;
      for (std::size_t r = 0; same && r < count; ++r)
        {
          same = got[r].id == expected[r];
        }
      if (!same)
        {
          // Accept a different order only where oracle scores agree to
          // rounding level.
          bool tie = got.size () == count;
          for (std::size_t r = 0; tie && r < count; ++r)
            {
              const auto gi = std::find (m.candidateIds.begin (), m.candidateIds.end (), got[r].id) -
                              m.candidateIds.begin ();
              const auto ei = std::find (m.candidateIds.begin (), m.candidateIds.end (), expected[r]) -
                              m.candidateIds.begin ();
              tie = std::abs (oracle.s[gi] - oracle.s[ei]) <= 1e-12L;
            }
          ++(tie ? nearTies : selectionMismatch);
        }
    }
  Report (worstSum <= 1e-9 && worstW <= 1e-9 && selectionMismatch == 0, "exact.entropy-weights",
          Fmt ("%d random matrices, n in 2..6: max |sum(w) - 1| = %.3g, max |w - oracle| = %.3g, "
               "selection mismatches %d (rounding-level ties %d)",
               trials, worstSum, worstW, selectionMismatch, nearTies));
}

void
CheckOneHotWeights ()
{
  const NormalizedMatrix b{{1.0, 0.0, 1.0}, {0.0, 1.0, 0.0}};
  const StabilityWeights w = EntropyWeights (b);
  const std::vector<double> s = StabilityScores (b, w);
  const double third = 1.0 / 3.0;
  const bool ok = w.w[0] == third && w.w[1] == third && w.w[2] == third && s.size () == 2 &&
                  s[0] == 2.0 / 3.0 && s[1] == third;
  Report (ok, "exact.one-hot-weights",
          Fmt ("w = (%.17g, %.17g, %.17g), s = (%.17g, %.17g)", w.w[0], w.w[1], w.w[2],
               s.size () > 0 ? s[0] : NAN, s.size () > 1 ? s[1] : NAN));
}

double
Since (std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double> (std::chrono::steady_clock::now () - start).count ();
}

void
RunExact ()
{
  const auto start = std::chrono::steady_clock::now ();
  CheckSimilarityExample ();
  CheckFanOut ();
  CheckEnergyGate ();
  CheckKalman ();
  CheckEntropyWeights ();
  CheckOneHotWeights ();
  const double wall = Since (start);
  Report (wall < 1.0, "exact.runtime", Fmt ("%.3f s", wall));
}

// ------------------------------------------------------------- property

ScenarioConfig
SmallConfig (std::uint64_t seed)
{
  ScenarioConfig c;
  c.nodeCount = 50;
  c.sourcesPerBucket = 5;
  c.buckets = {3 + static_cast<int> (seed % 6)};
  c.simTime = 4.0;
  c.rngSeed = seed;
  c.protocol = ProtocolKind::kRmrls;
  c.logDetail = LogDetail::kControl;
  return c;
}

bool
HasRepeat (const std::vector<NodeId> &hops)
{
  std::set<NodeId> seen;
  for (NodeId n : hops)
    {
      if (!seen.insert (n).second)
        {
          return true;
        }
    }
  return false;
}

bool
Additive (double total, const std::vector<double> &scores)
{
  double sum = 0.0;
  for (double s : scores)
    {
      sum += s;
    }
  return std::abs (total - sum) <= 1e-12 * std::max (1.0, std::abs (total));
}

// Shared nodes other than the common source, and shared undirected links.
double
SimilarityOracle (const std::vector<NodeId> &a, const std::vector<NodeId> &b, double kSim,
                  double sigma)
{
  std::size_t nodes = 0;
  for (std::size_t i = 1; i < a.size (); ++i)
    {
      if (std::find (b.begin () + 1, b.end (), a[i]) != b.end ())
        {
          ++nodes;
        }
    }
  std::set<std::pair<NodeId, NodeId>> linksB;
  for (std::size_t i = 0; i + 1 < b.size (); ++i)
    {
      linksB.insert (std::minmax (b[i], b[i + 1]));
    }
  std::set<std::pair<NodeId, NodeId>> shared;
  for (std::size_t i = 0; i + 1 < a.size (); ++i)
    {
      const auto l = std::minmax (a[i], a[i + 1]);
      if (linksB.count (l))
        {
          shared.insert (l);
        }
    }
  const double n = static_cast<double> (nodes);
  return kSim * std::max (0.0, n - 2.0) + sigma * static_cast<double> (shared.size ());
}

struct PropertyTally
{
  std::size_t rreqs = 0;
  std::size_t loopViolations = 0;
  std::size_t duplicateViolations = 0;
  std::size_t gateViolations = 0;
  std::size_t additivityViolations = 0;
  std::size_t selections = 0;
  std::size_t withBackup = 0;
  std::size_t backupViolations = 0;
  std::size_t deliveredRoutes = 0;
};

void
InspectLog (const EventLog &log, double threshold, PropertyTally &t)
{
  std::map<std::tuple<NodeId, std::uint32_t, NodeId>, std::set<double>> forwardTimes;
  for (const RreqRecord *r : log.Select<RreqRecord> ())
    {
      ++t.rreqs;
      t.loopViolations += HasRepeat (r->record);
      forwardTimes[{r->source, r->requestId, r->from}].insert (r->time);
      t.gateViolations += r->to != kNcId && !(r->toEnergy >= threshold);
      t.additivityViolations +=
          !Additive (r->total, r->hopScores) || r->hopScores.size () + 1 != r->record.size ();
    }
  for (const auto &[key, times] : forwardTimes)
    {
      t.duplicateViolations += times.size () > 1;
    }
  for (const SelectionRecord *s : log.Select<SelectionRecord> ())
    {
      ++t.selections;
      for (const CollectedPath &c : s->collected)
        {
          t.loopViolations += HasRepeat (c.hops);
          t.additivityViolations += !Additive (c.total, c.hopScores);
        }
      if (s->collected.size () < 2)
        {
          t.backupViolations += s->backup != -1;
          continue;
        }
      ++t.withBackup;
      const auto &main = s->collected[static_cast<std::size_t> (s->main)].hops;
      double best = INFINITY;
      for (std::size_t i = 0; i < s->collected.size (); ++i)
        {
          if (static_cast<int> (i) != s->main)
            {
              best = std::min (best, SimilarityOracle (main, s->collected[i].hops, s->kSim, s->sigma));
            }
        }
      if (s->backup < 0 || s->backup == s->main)
        {
          ++t.backupViolations;
          continue;
        }
      const double chosen =
          SimilarityOracle (main, s->collected[static_cast<std::size_t> (s->backup)].hops, s->kSim, s->sigma);
      t.backupViolations += chosen > best + 1e-12;
    }
  for (const RouteRecord *r : log.Select<RouteRecord> ())
    {
      t.loopViolations += HasRepeat (r->active) || HasRepeat (r->backup);
    }
  for (const PacketRecord *p : log.Select<PacketRecord> ())
    {
      if (p->delivered)
        {
          ++t.deliveredRoutes;
          t.loopViolations += HasRepeat (p->route);
        }
    }
}

struct FailoverOutcome
{
  bool qualified = false;
  bool failedOver = false;
  bool deliveredOnBackup = false;
  bool stayedOnBackup = true; ///< no packet left the backup until the route was dropped
};

bool
IsPrefix (const std::vector<NodeId> &route, const std::vector<NodeId> &path)
{
  return route.size () <= path.size () && std::equal (route.begin (), route.end (), path.begin ());
}

FailoverOutcome
FailoverRun (std::uint64_t seed, double fadingDb)
{
  ScenarioConfig c;
  c.channel.fluctuationStdDb = fadingDb;
  c.buckets = {4 + static_cast<int> (seed % 5)};
  c.simTime = 6.0;
  c.rngSeed = seed;
  c.protocol = ProtocolKind::kRmrls;
  c.logDetail = LogDetail::kControl;
  EventLog log (c.logDetail);
  BucketSimulation sim (c, c.buckets[0], log);
  const double killAt = c.simTime / 2.0;
  sim.RunUntil (killAt);

  FailoverOutcome out;
  RmrlsProtocol &proto = *sim.Rmrls ();
  NodeId source{};
  NodeId victim{};
  std::vector<NodeId> backupHops;
  for (NodeId s : sim.Net ().Topo ().sources)
    {
      const RoutingTableEntry *e = proto.Entry (s);
      if (e == nullptr || e->onBackup || !e->backup || e->main.hops.size () < 3 ||
          !sim.Net ().Alive (s))
        {
          continue;
        }
      const NodeId relay = e->main.hops[e->main.hops.size () / 2];
      const auto &bh = e->backup->hops;
      const bool backupAlive = std::all_of (bh.begin (), bh.end (), [&] (NodeId n) {
        return n == kNcId || sim.Net ().Alive (n);
      });
      if (e->backup->Contains (relay) || !backupAlive || !sim.Net ().Alive (relay))
        {
          continue;
        }
      source = s;
      victim = relay;
      backupHops = bh;
      out.qualified = true;
      break;
    }
  if (!out.qualified)
    {
      return out;
    }
  sim.InjectDeath (victim);
  sim.Finish ();

  // The backup stays in use from the failover until the source drops the
  // route (the backup broke in turn, or the entry expired).
  double switched = INFINITY;
  double dropped = INFINITY;
  for (const RouteRecord *r : log.Select<RouteRecord> ())
    {
      if (r->source != source || r->time < killAt)
        {
          continue;
        }
      if (!out.failedOver && r->event == "failover" && r->active == backupHops)
        {
          out.failedOver = true;
          switched = r->time;
        }
      else if (out.failedOver && r->time >= switched && dropped == INFINITY &&
               (r->event == "invalidated" || r->event == "expired"))
        {
          dropped = r->time;
        }
    }
  for (const PacketRecord *p : log.Select<PacketRecord> ())
    {
      if (p->source != source || p->generated < switched || p->generated >= dropped)
        {
          continue;
        }
      out.stayedOnBackup = out.stayedOnBackup && IsPrefix (p->route, backupHops);
      out.deliveredOnBackup = out.deliveredOnBackup || (p->delivered && p->route == backupHops);
    }
  return out;
}

void
RunProperty ()
{
  const auto start = std::chrono::steady_clock::now ();
  const double threshold = EnergyGate::FromConfig (ScenarioConfig{}).Threshold ();
  PropertyTally t;
  for (std::uint64_t seed = 1; seed <= 100; ++seed)
    {
      const ScenarioConfig c = SmallConfig (seed);
      InspectLog (Run (c), threshold, t);
    }
  Report (t.loopViolations == 0, "property.loop-free",
          Fmt ("100 runs of 50 nodes: %zu route requests, %zu selections, %zu delivered routes, "
               "%zu repeated-node paths",
               t.rreqs, t.selections, t.deliveredRoutes, t.loopViolations));
  Report (t.duplicateViolations == 0, "property.duplicate-suppression",
          Fmt ("%zu (request, relay) pairs forwarded more than once", t.duplicateViolations));
  Report (t.gateViolations == 0, "property.energy-gate",
          Fmt ("%zu of %zu route requests reached a nanonode below %.3g J", t.gateViolations,
               t.rreqs, threshold));
  Report (t.additivityViolations == 0, "property.stability-additivity",
          Fmt ("%zu paths whose total differs from the sum of hop scores by more than 1e-12",
               t.additivityViolations));

  struct FailoverTally
  {
    int qualified = 0;
    int succeeded = 0;
    std::uint64_t tried = 0;
    std::string failedSeeds;
  };
  const auto failover = [] (double fadingDb) {
    FailoverTally f;
    for (std::uint64_t seed = 1; f.qualified < 50 && seed <= 400; ++seed)
      {
        f.tried = seed;
        const FailoverOutcome o = FailoverRun (seed, fadingDb);
        if (!o.qualified)
          {
            continue;
          }
        ++f.qualified;
        if (o.failedOver && o.deliveredOnBackup && o.stayedOnBackup)
          {
            ++f.succeeded;
          }
        else
          {
            f.failedSeeds += Fmt (" %llu", static_cast<unsigned long long> (seed));
          }
      }
    return f;
  };
  // Links follow the mean path loss here, so a backup that is alive and
  // avoids the failed relay cannot lose frames by chance.
  const FailoverTally steady = failover (0.0);
  Report (steady.qualified == 50 && steady.succeeded == steady.qualified, "property.failover",
          Fmt ("%d of %d runs kept delivering over the backup after a main-path relay was killed "
               "at sim_time/2 (seeds tried %llu)%s%s",
               steady.succeeded, steady.qualified, static_cast<unsigned long long> (steady.tried),
               steady.failedSeeds.empty () ? "" : "; failed seeds", steady.failedSeeds.c_str ()));
  const double fading = ScenarioConfig{}.channel.fluctuationStdDb;
  const FailoverTally noisy = failover (fading);
  std::printf ("  with %.0f dB per-frame fading: %d of %d runs%s%s\n", fading, noisy.succeeded,
               noisy.qualified, noisy.failedSeeds.empty () ? "" : "; backup link lost frames in seeds",
               noisy.failedSeeds.c_str ());

  Report (t.backupViolations == 0 && t.withBackup > 0, "property.backup-minimal-similarity",
          Fmt ("%zu selections with two or more paths, %zu backups not of least similarity",
               t.withBackup, t.backupViolations));

  bool deterministic = true;
  std::size_t bytes = 0;
  for (ProtocolKind p : {ProtocolKind::kRmrls, ProtocolKind::kSfr, ProtocolKind::kRandomNextHop})
    {
      ScenarioConfig c = SmallConfig (11);
      c.protocol = p;
      c.logDetail = LogDetail::kFull;
      c.buckets = {2, 5};
      const std::string a = Run (c).ToNdjson ();
      const std::string b = Run (c).ToNdjson ();
      deterministic = deterministic && a == b && !a.empty ();
      bytes += a.size ();
    }
  Report (deterministic, "property.determinism",
          Fmt ("full event logs of three protocols, %zu bytes, identical across reruns", bytes));
  const double wall = Since (start);
  Report (wall < 30.0, "property.runtime", Fmt ("%.1f s", wall));
}

// ---------------------------------------------------------------- trend

double
Mean (const std::map<int, SeedMetrics> &m, int from, int to, double SeedMetrics::*field)
{
  double sum = 0.0;
  for (int b = from; b <= to; ++b)
    {
      sum += m.at (b).*field;
    }
  return sum / (to - from + 1);
}

double
EnergySlope (const std::map<int, SeedMetrics> &m)
{
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto &[b, v] : m)
    {
      sx += b;
      sy += v.energyPerBit;
      sxx += double (b) * b;
      sxy += b * v.energyPerBit;
      ++n;
    }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void
RunTrend (const std::string &configPath, const std::string &csvPath)
{
  const auto start = std::chrono::steady_clock::now ();
  const ScenarioConfig base = LoadConfig (configPath);
  const std::vector<ProtocolKind> protocols{ProtocolKind::kRmrls, ProtocolKind::kRandomNextHop,
                                            ProtocolKind::kSfr};
  const int seeds = 10;
  std::map<ProtocolKind, std::vector<std::map<int, SeedMetrics>>> r;
  for (int s = 1; s <= seeds; ++s)
    {
      for (ProtocolKind p : protocols)
        {
          ScenarioConfig c = base;
          c.protocol = p;
          c.rngSeed = static_cast<std::uint64_t> (s);
          r[p].push_back (RunSeed (c, nullptr, LogDetail::kNone));
        }
    }
  const double wall = Since (start);

  bool shortRange = true;
  for (ProtocolKind p : protocols)
    {
      for (const auto &m : r[p])
        {
          shortRange = shortRange && m.at (1).deliveryRatio == 1.0 && m.at (2).deliveryRatio == 1.0;
        }
    }
  int drRandom = 0, drSfr = 0, slope = 0, thRandom = 0, thSfr = 0;
  const ProtocolKind R = ProtocolKind::kRmrls, N = ProtocolKind::kRandomNextHop, S = ProtocolKind::kSfr;
  for (int i = 0; i < seeds; ++i)
    {
      const auto dr = [&] (ProtocolKind p) { return Mean (r[p][i], 7, 10, &SeedMetrics::deliveryRatio); };
      const auto th = [&] (ProtocolKind p) { return Mean (r[p][i], 6, 10, &SeedMetrics::throughput); };
      drRandom += dr (R) >= dr (N);
      drSfr += dr (R) >= dr (S);
      slope += EnergySlope (r[S][i]) > EnergySlope (r[R][i]);
      thRandom += th (R) >= th (N);
      thSfr += th (R) >= th (S);
      std::printf ("  seed %2d  delivery 7-10: rmrls %.4f random %.4f sfr %.4f  "
                   "energy/bit slope: rmrls %.3g sfr %.3g\n",
                   i + 1, dr (R), dr (N), dr (S), EnergySlope (r[R][i]), EnergySlope (r[S][i]));
    }

  Report (shortRange, "trend.short-range-delivery",
          "delivery ratio 100% in buckets 1 and 2 for every protocol and seed");
  Report (drRandom >= 8, "trend.delivery-vs-random",
          Fmt ("RMRLS >= random next hop over buckets 7-10 in %d of %d seeds", drRandom, seeds));
  Report (drSfr >= 8, "trend.delivery-vs-sfr",
          Fmt ("RMRLS >= SFR over buckets 7-10 in %d of %d seeds", drSfr, seeds));
  Report (slope >= 8, "trend.energy-per-bit-slope",
          Fmt ("SFR energy per bit rises faster with distance than RMRLS in %d of %d seeds", slope, seeds));
  Report (thRandom >= 8, "trend.throughput-vs-random",
          Fmt ("RMRLS throughput >= random next hop over buckets 6-10 in %d of %d seeds", thRandom, seeds));
  Report (thSfr >= 8, "trend.throughput-vs-sfr",
          Fmt ("RMRLS throughput >= SFR over buckets 6-10 in %d of %d seeds", thSfr, seeds));
  Report (wall < 300.0, "trend.wall-clock", Fmt ("%.1f s for 10 seeds x 3 protocols", wall));

  if (!csvPath.empty ())
    {
      std::vector<MetricsRow> rows;
      for (ProtocolKind p : protocols)
        {
          for (int b : base.buckets)
            {
              std::vector<SeedMetrics> perSeed;
              for (const auto &m : r[p])
                {
                  perSeed.push_back (m.at (b));
                }
              rows.push_back (Aggregate (p, b, perSeed));
            }
        }
      std::ofstream os (csvPath);
      WriteCsv (os, rows);
      std::printf ("  wrote %s\n", csvPath.c_str ());
    }
}

} // namespace

int
main (int argc, char **argv)
{
  std::string suite = "all";
  std::string config = NANOSIM_TREND_CONFIG;
  std::string csv;
  for (int i = 1; i < argc; ++i)
    {
      const std::string arg = argv[i];
      if (i + 1 < argc && arg == "--suite")
        {
          suite = argv[++i];
        }
      else if (i + 1 < argc && arg == "--config")
        {
          config = argv[++i];
        }
      else if (i + 1 < argc && arg == "--csv")
        {
          csv = argv[++i];
        }
      else
        {
          std::fprintf (stderr, "usage: %s [--suite exact|property|trend|all] [--config FILE] [--csv FILE]\n",
                        argv[0]);
          return 2;
        }
    }
  if (suite != "exact" && suite != "property" && suite != "trend" && suite != "all")
    {
      std::fprintf (stderr, "unknown suite '%s'\n", suite.c_str ());
      return 2;
    }
  try
    {
      if (suite == "exact" || suite == "all")
        {
          RunExact ();
        }
      if (suite == "property" || suite == "all")
        {
          RunProperty ();
        }
      if (suite == "trend" || suite == "all")
        {
          RunTrend (config, csv);
        }
    }
  catch (const std::exception &e)
    {
      Report (false, suite, std::string ("aborted: ") + e.what ());
    }
  return g_failures == 0 ? 0 : 1;
}
