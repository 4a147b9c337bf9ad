#ifndef NANOSIM_CONFIG_H
#define NANOSIM_CONFIG_H

#include "nanosim/kalman.h"
#include "nanosim/similarity.h"
#include "nanosim/types.h"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace nanosim
{

enum class ProtocolKind
{
  kRmrls,
  kSfr,
  kRandomNextHop,
};

const char *ToString (ProtocolKind kind);
/// Accepts "rmrls", "sfr", "random"/"random_next_hop" (any case).
ProtocolKind ParseProtocol (const std::string &name);

enum class LogDetail
{
  kNone,
  kSummary, ///< topology, route selections, failovers, deaths, energy ledgers
  kPackets, ///< + one outcome record per generated packet
  kControl, ///< + RREQ/RREP/RERR traffic
  kFull,    ///< + every transmission and harvest settlement
};

const char *ToString (LogDetail detail);
LogDetail ParseLogDetail (const std::string &name);

struct ChannelConfig
{
  double carrierFreq = 1e12;        ///< Hz
  double absorptionCoeff = 0.1;     ///< 1/m
  double fluctuationStdDb = 4.0;    ///< shadowing on each sample
  double propagationSpeed = 3e8;    ///< m/s
  double txPowerDbm = -10.0;
  double rxSensitivityDbm = -52.0;
  double ncRxGainDb = 20.0;         ///< the NC is a powered, better receiver
};

struct EnergyConfig
{
  double initialEnergy = 4e-6;      ///< J
  double batteryCapacity = 8e-6;    ///< J
  double harvestRate = 8e-8;        ///< W during WET and SWIPT slots
  double receiveRatio = 0.5;        ///< receive cost / transmit cost
  double epsilon = 1.0;
  double eBit = 1.4e-13 / 128.0;    ///< J/bit
  double wetSlot = 5.0;             ///< s
  double swiptSlot = 0.01;          ///< s
  double witSlot = 0.1;             ///< s
  /// Every in-range receiver pays receive energy for a frame, not only the
  /// addressee.
  bool overhearing = true;
};

struct MessageBits
{
  std::uint32_t ndis = 16;
  std::uint32_t nfee = 16;
  std::uint32_t rreq = 48;
  std::uint32_t rrep = 48;
  std::uint32_t ack = 16;
  std::uint32_t hello = 16;
  std::uint32_t rerr = 16;

  std::uint32_t Of (MessageKind kind) const;
};

struct RmrlsConfig
{
  std::size_t tau = 2;
  SimilarityParams similarity;
  double collectionWindow = 0.05;   ///< s, from first RREQ arrival at the NC
  double helloPeriod = 0.1;         ///< s
  std::uint32_t helloMissLimit = 3;
  double routeTtl = 10.0;           ///< s
  double discoveryTimeout = 0.2;    ///< s without RREP before giving up
  double discoveryHoldoff = 1.0;    ///< s between failed and next discovery
  /// Timed-out discoveries retried at once, keeping buffered packets,
  /// before the source drops its buffer and waits out the holdoff.
  std::uint32_t discoveryRetries = 3;
  double ackTimeoutFactor = 4.0;    ///< x estimated path RTT
  /// Route requests only go to neighbors closer to the NC than the sender.
  bool progressOnly = true;
  std::uint32_t bufferLimit = 256;  ///< packets queued at a source during discovery
  MessageBits bits;
};

struct KalmanConfig
{
  KalmanParams params;
  std::size_t batchSize = 5;
  EstimatorMode mode = EstimatorMode::kDecibel;
};

struct ScenarioConfig
{
  double areaSize = 10.0;           ///< mm, square side
  std::uint32_t nodeCount = 200;    ///< nanonodes including the sources
  Position ncPosition{11.0, 5.0};
  double commRange = 2.0;           ///< mm
  std::uint32_t sourcesPerBucket = 20;
  std::vector<int> buckets{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::uint32_t packetLengthBytes = 128;
  double packetInterval = 0.01;     ///< s
  bool samplePacketInterval = false; ///< draw the interval from [0.001, 0.01] per run
  double simTime = 120.0;           ///< s
  double trafficStart = 1.0;        ///< s; HELLO warm-up before data
  std::uint32_t iterations = 1500;  ///< route-discovery rounds per source cap
  std::uint64_t rngSeed = 1;
  double dataRate = 1e9;            ///< bit/s
  std::uint32_t linkRetries = 1;    ///< extra unicast attempts after a loss
  ProtocolKind protocol = ProtocolKind::kRmrls;
  LogDetail logDetail = LogDetail::kPackets;

  ChannelConfig channel;
  EnergyConfig energy;
  KalmanConfig kalman;
  RmrlsConfig rmrls;

  std::uint32_t PacketBits () const { return packetLengthBytes * 8; }
  /// Throws InvalidInput naming the first offending key.
  void Validate () const;
};

/// Reads an INI-style file (sections + key = value). Unknown keys are errors.
ScenarioConfig LoadConfig (const std::filesystem::path &path);

/// Parses INI text; `origin` is used in diagnostics.
ScenarioConfig ParseConfig (const std::string &text, const std::string &origin = "<string>");

/// Applies "section.key=value" on top of a config.
void ApplyOverride (ScenarioConfig &config, const std::string &assignment);

/// Canonical "section.key=value" lines, sorted; stable across runs.
std::string DumpConfig (const ScenarioConfig &config);

} // namespace nanosim

#endif /* NANOSIM_CONFIG_H */
