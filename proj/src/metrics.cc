#include "nanosim/metrics.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace nanosim
{

std::map<int, BucketTotals>
Tally (const EventLog &log)
{
  std::map<int, BucketTotals> out;
  for (const LogRecord &r : log.Records ())
    {
      if (const auto *p = std::get_if<PacketRecord> (&r))
        {
          BucketTotals &t = out[p->bucket];
          t.bucket = p->bucket;
          ++t.generated;
          if (p->delivered)
            {
              ++t.delivered;
              t.deliveredBits += p->bits;
            }
        }
      else if (const auto *e = std::get_if<EnergyRecord> (&r))
        {
          BucketTotals &t = out[e->bucket];
          t.bucket = e->bucket;
          t.energy += e->debited;
        }
    }
  return out;
}

namespace
{

BucketTotals
TotalsFor (const EventLog &log, int bucket)
{
  const auto all = Tally (log);
  const auto it = all.find (bucket);
  return it == all.end () ? BucketTotals{bucket} : it->second;
}

} // namespace

SeedMetrics
ComputeSeedMetrics (const BucketTotals &t, double simTime)
{
  SeedMetrics m;
  m.energyPerBit = t.deliveredBits > 0.0 ? t.energy / t.deliveredBits
                                         : std::numeric_limits<double>::infinity ();
  m.deliveryRatio = t.generated > 0 ? static_cast<double> (t.delivered) / static_cast<double> (t.generated)
                                    : std::numeric_limits<double>::quiet_NaN ();
  m.throughput = simTime > 0.0 ? t.deliveredBits / simTime : 0.0;
  return m;
}

double
EnergyPerBit (const EventLog &log, int bucket)
{
  return ComputeSeedMetrics (TotalsFor (log, bucket), 1.0).energyPerBit;
}

double
DeliveryRatio (const EventLog &log, int bucket)
{
  return ComputeSeedMetrics (TotalsFor (log, bucket), 1.0).deliveryRatio;
}

double
AvgThroughput (const EventLog &log, int bucket, double simTime)
{
  if (!(simTime > 0.0))
    {
      throw InvalidInput ("throughput needs a positive simulated time");
    }
  return ComputeSeedMetrics (TotalsFor (log, bucket), simTime).throughput;
}

namespace
{

struct MeanErr
{
  double mean = 0.0;
  double err = 0.0;
  std::size_t n = 0;
};

MeanErr
Summarize (const std::vector<double> &values)
{
  MeanErr r;
  for (double v : values)
    {
      if (std::isfinite (v))
        {
          r.mean += v;
          ++r.n;
        }
    }
  if (r.n == 0)
    {
      r.mean = std::numeric_limits<double>::infinity ();
      return r;
    }
  r.mean /= static_cast<double> (r.n);
  if (r.n > 1)
    {
      double ss = 0.0;
      for (double v : values)
        {
          if (std::isfinite (v))
            {
              ss += (v - r.mean) * (v - r.mean);
            }
        }
      r.err = std::sqrt (ss / static_cast<double> (r.n - 1)) / std::sqrt (static_cast<double> (r.n));
    }
  return r;
}

} // namespace

MetricsRow
Aggregate (ProtocolKind protocol, int bucket, const std::vector<SeedMetrics> &perSeed)
{
  if (perSeed.empty ())
    {
      throw InvalidInput ("aggregation needs at least one seed");
    }
  std::vector<double> e;
  std::vector<double> d;
  std::vector<double> t;
  for (const SeedMetrics &m : perSeed)
    {
      e.push_back (m.energyPerBit);
      d.push_back (m.deliveryRatio);
      t.push_back (m.throughput);
    }
  const MeanErr me = Summarize (e);
  MeanErr md = Summarize (d);
  if (md.n == 0)
    {
      md.mean = std::numeric_limits<double>::quiet_NaN ();
    }
  const MeanErr mt = Summarize (t);
  return {protocol, bucket, me.mean, md.mean, mt.mean, perSeed.size (), me.err, md.err, mt.err};
}

const std::vector<std::string> &
CsvColumns ()
{
  static const std::vector<std::string> cols{"protocol",
                                             "distance_bucket",
                                             "energy_per_bit",
                                             "delivery_ratio",
                                             "avg_throughput",
                                             "seeds",
                                             "energy_per_bit_stderr",
                                             "delivery_ratio_stderr",
                                             "avg_throughput_stderr"};
  return cols;
}

std::string
FormatNumber (double v)
{
  if (std::isnan (v))
    {
      return "nan";
    }
  if (std::isinf (v))
    {
      return v > 0 ? "inf" : "-inf";
    }
  char buf[64];
  std::snprintf (buf, sizeof buf, "%.12g", v);
  return buf;
}

void
WriteCsv (std::ostream &os, const std::vector<MetricsRow> &rows)
{
  const auto &cols = CsvColumns ();
  for (std::size_t i = 0; i < cols.size (); ++i)
    {
      os << (i ? "," : "") << cols[i];
    }
  os << '\n';
  for (const MetricsRow &r : rows)
    {
      os << ToString (r.protocol) << ',' << r.bucket << ',' << FormatNumber (r.energyPerBit) << ','
         << FormatNumber (r.deliveryRatio) << ',' << FormatNumber (r.avgThroughput) << ',' << r.seeds
         << ',' << FormatNumber (r.energyPerBitStderr) << ',' << FormatNumber (r.deliveryRatioStderr)
         << ',' << FormatNumber (r.avgThroughputStderr) << '\n';
    }
}

} // namespace nanosim
