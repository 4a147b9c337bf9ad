#ifndef NANOSIM_METRICS_H
#define NANOSIM_METRICS_H

#include "nanosim/config.h"
#include "nanosim/event-log.h"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace nanosim
{

/// Per-bucket totals recovered from one run's log.
struct BucketTotals
{
  int bucket = 0;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  double deliveredBits = 0.0;
  double energy = 0.0; ///< joules debited by every node of the sub-run
};

std::map<int, BucketTotals> Tally (const EventLog &log);

/// Joules per delivered bit; +infinity when nothing was delivered.
double EnergyPerBit (const EventLog &log, int bucket);
/// Delivered / generated; NaN when nothing was generated.
double DeliveryRatio (const EventLog &log, int bucket);
/// Delivered bits per second of simulated time.
double AvgThroughput (const EventLog &log, int bucket, double simTime);

/// Per-seed metric values of one (protocol, bucket).
struct SeedMetrics
{
  double energyPerBit = 0.0;
  double deliveryRatio = 0.0;
  double throughput = 0.0;
};

SeedMetrics ComputeSeedMetrics (const BucketTotals &totals, double simTime);

struct MetricsRow
{
  ProtocolKind protocol = ProtocolKind::kRmrls;
  int bucket = 0;
  double energyPerBit = 0.0;
  double deliveryRatio = 0.0;
  double avgThroughput = 0.0;
  std::size_t seeds = 0;
  double energyPerBitStderr = 0.0;
  double deliveryRatioStderr = 0.0;
  double avgThroughputStderr = 0.0;
};

/**
 * Mean and standard error over seeds. Seeds without any delivery carry an
 * infinite energy per bit and are left out of that column's mean; the
 * column is infinite when no seed delivered anything.
 */
MetricsRow Aggregate (ProtocolKind protocol, int bucket, const std::vector<SeedMetrics> &perSeed);

const std::vector<std::string> &CsvColumns ();
/// Header plus one line per row; floats with 12 significant digits.
void WriteCsv (std::ostream &os, const std::vector<MetricsRow> &rows);
std::string FormatNumber (double v);

} // namespace nanosim

#endif /* NANOSIM_METRICS_H */
