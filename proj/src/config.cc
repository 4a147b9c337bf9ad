#include "nanosim/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace nanosim
{

const char *
ToString (ProtocolKind kind)
{
  switch (kind)
    {
    case ProtocolKind::kRmrls:
      return "RMRLS";
    case ProtocolKind::kSfr:
      return "SFR";
    case ProtocolKind::kRandomNextHop:
      return "RANDOM_NEXT_HOP";
    }
  return "?";
}

namespace
{

std::string
Lower (std::string s)
{
  std::transform (s.begin (), s.end (), s.begin (),
                  [] (unsigned char c) { return static_cast<char> (std::tolower (c)); });
  return s;
}

std::string
Trim (const std::string &s)
{
  auto b = s.find_first_not_of (" \t\r\n");
  if (b == std::string::npos)
    {
      return {};
    }
  auto e = s.find_last_not_of (" \t\r\n");
  return s.substr (b, e - b + 1);
}

} // namespace

ProtocolKind
ParseProtocol (const std::string &name)
{
  const auto n = Lower (Trim (name));
  if (n == "rmrls")
    {
      return ProtocolKind::kRmrls;
    }
  if (n == "sfr")
    {
      return ProtocolKind::kSfr;
    }
  if (n == "random" || n == "random_next_hop" || n == "random-next-hop")
    {
      return ProtocolKind::kRandomNextHop;
    }
  throw InvalidInput ("unknown protocol '" + name + "' (expected rmrls, sfr or random)");
}

const char *
ToString (LogDetail detail)
{
  switch (detail)
    {
    case LogDetail::kNone:
      return "none";
    case LogDetail::kSummary:
      return "summary";
    case LogDetail::kPackets:
      return "packets";
    case LogDetail::kControl:
      return "control";
    case LogDetail::kFull:
      return "full";
    }
  return "?";
}

LogDetail
ParseLogDetail (const std::string &name)
{
  const auto n = Lower (Trim (name));
  for (auto d : {LogDetail::kNone, LogDetail::kSummary, LogDetail::kPackets, LogDetail::kControl,
                 LogDetail::kFull})
    {
      if (n == ToString (d))
        {
          return d;
        }
    }
  throw InvalidInput ("unknown log detail '" + name + "'");
}

std::uint32_t
MessageBits::Of (MessageKind kind) const
{
  switch (kind)
    {
    case MessageKind::kNdis:
      return ndis;
    case MessageKind::kNfee:
      return nfee;
    case MessageKind::kRreq:
      return rreq;
    case MessageKind::kRrep:
      return rrep;
    case MessageKind::kAck:
      return ack;
    case MessageKind::kHello:
      return hello;
    case MessageKind::kRerr:
      return rerr;
    case MessageKind::kData:
      break;
    }
  throw InvalidInput ("data frames are sized by the packet length");
}

namespace
{

struct Field
{
  std::function<void (ScenarioConfig &, const std::string &)> set;
  std::function<std::string (const ScenarioConfig &)> get;
};

double
ToDouble (const std::string &v)
{
  try
    {
      std::size_t used = 0;
      double d = std::stod (v, &used);
      if (used != v.size ())
        {
          throw std::invalid_argument (v);
        }
      return d;
    }
  catch (const std::exception &)
    {
      throw InvalidInput ("expected a number, got '" + v + "'");
    }
}

std::uint64_t
ToUnsigned (const std::string &v)
{
  try
    {
      if (!v.empty () && v[0] == '-')
        {
          throw std::invalid_argument (v);
        }
      std::size_t used = 0;
      auto x = std::stoull (v, &used);
      if (used != v.size ())
        {
          throw std::invalid_argument (v);
        }
      return x;
    }
  catch (const std::exception &)
    {
      throw InvalidInput ("expected a non-negative integer, got '" + v + "'");
    }
}

bool
ToBool (const std::string &v)
{
  const auto l = Lower (v);
  if (l == "true" || l == "1" || l == "yes" || l == "on")
    {
      return true;
    }
  if (l == "false" || l == "0" || l == "no" || l == "off")
    {
      return false;
    }
  throw InvalidInput ("expected a boolean, got '" + v + "'");
}

std::string
Num (double d)
{
  std::ostringstream os;
  os.precision (17);
  os << d;
  return os.str ();
}

#define NANOSIM_DOUBLE(expr)                                                                       \
  Field                                                                                            \
  {                                                                                                \
    [] (ScenarioConfig &c, const std::string &v) { c.expr = ToDouble (v); },               \
        [] (const ScenarioConfig &c) { return Num (c.expr); }                                      \
  }

#define NANOSIM_UNSIGNED(expr)                                                                     \
  Field                                                                                            \
  {                                                                                                \
    [] (ScenarioConfig &c, const std::string &v) {                                                 \
      c.expr = static_cast<decltype (c.expr)> (ToUnsigned (v));                             \
    },                                                                                             \
        [] (const ScenarioConfig &c) { return std::to_string (c.expr); }                           \
  }

#define NANOSIM_BOOL(expr)                                                                         \
  Field                                                                                            \
  {                                                                                                \
    [] (ScenarioConfig &c, const std::string &v) { c.expr = ToBool (v); },                  \
        [] (const ScenarioConfig &c) { return std::string (c.expr ? "true" : "false"); }           \
  }

const std::map<std::string, Field> &
Registry ()
{
  static const std::map<std::string, Field> fields = {
      {"scenario.area", NANOSIM_DOUBLE (areaSize)},
      {"scenario.node_count", NANOSIM_UNSIGNED (nodeCount)},
      {"scenario.nc_x", NANOSIM_DOUBLE (ncPosition.x)},
      {"scenario.nc_y", NANOSIM_DOUBLE (ncPosition.y)},
      {"scenario.comm_range", NANOSIM_DOUBLE (commRange)},
      {"scenario.sources_per_bucket", NANOSIM_UNSIGNED (sourcesPerBucket)},
      {"scenario.buckets",
       Field{[] (ScenarioConfig &c, const std::string &v) {
               c.buckets.clear ();
               std::stringstream ss (v);
               std::string item;
               while (std::getline (ss, item, ','))
                 {
                   item = Trim (item);
                   if (item.empty ())
                     {
                       continue;
                     }
                   c.buckets.push_back (static_cast<int> (ToUnsigned (item)));
                 }
             },
             [] (const ScenarioConfig &c) {
               std::string s;
               for (std::size_t i = 0; i < c.buckets.size (); ++i)
                 {
                   s += (i ? "," : "") + std::to_string (c.buckets[i]);
                 }
               return s;
             }}},
      {"scenario.packet_length", NANOSIM_UNSIGNED (packetLengthBytes)},
      {"scenario.packet_interval",
       Field{[] (ScenarioConfig &c, const std::string &v) {
               if (Lower (v) == "sampled")
                 {
                   c.samplePacketInterval = true;
                   return;
                 }
               c.samplePacketInterval = false;
               c.packetInterval = ToDouble (v);
             },
             [] (const ScenarioConfig &c) {
               return c.samplePacketInterval ? std::string ("sampled") : Num (c.packetInterval);
             }}},
      {"scenario.sim_time", NANOSIM_DOUBLE (simTime)},
      {"scenario.traffic_start", NANOSIM_DOUBLE (trafficStart)},
      {"scenario.iterations", NANOSIM_UNSIGNED (iterations)},
      {"scenario.rng_seed", NANOSIM_UNSIGNED (rngSeed)},
      {"scenario.protocol",
       Field{[] (ScenarioConfig &c, const std::string &v) { c.protocol = ParseProtocol (v); },
             [] (const ScenarioConfig &c) { return Lower (ToString (c.protocol)); }}},
      {"scenario.log_detail",
       Field{[] (ScenarioConfig &c, const std::string &v) { c.logDetail = ParseLogDetail (v); },
             [] (const ScenarioConfig &c) { return std::string (ToString (c.logDetail)); }}},
      {"radio.data_rate", NANOSIM_DOUBLE (dataRate)},
      {"radio.link_retries", NANOSIM_UNSIGNED (linkRetries)},
      {"radio.tx_power_dbm", NANOSIM_DOUBLE (channel.txPowerDbm)},
      {"radio.rx_sensitivity_dbm", NANOSIM_DOUBLE (channel.rxSensitivityDbm)},
      {"radio.nc_rx_gain_db", NANOSIM_DOUBLE (channel.ncRxGainDb)},
      {"radio.propagation_speed", NANOSIM_DOUBLE (channel.propagationSpeed)},
      {"channel.carrier_freq", NANOSIM_DOUBLE (channel.carrierFreq)},
      {"channel.absorption_coeff", NANOSIM_DOUBLE (channel.absorptionCoeff)},
      {"channel.fluctuation_std_db", NANOSIM_DOUBLE (channel.fluctuationStdDb)},
      {"energy.initial_energy", NANOSIM_DOUBLE (energy.initialEnergy)},
      {"energy.battery_capacity", NANOSIM_DOUBLE (energy.batteryCapacity)},
      {"energy.harvest_rate", NANOSIM_DOUBLE (energy.harvestRate)},
      {"energy.receive_ratio", NANOSIM_DOUBLE (energy.receiveRatio)},
      {"energy.epsilon", NANOSIM_DOUBLE (energy.epsilon)},
      {"energy.e_bit", NANOSIM_DOUBLE (energy.eBit)},
      {"energy.wet_slot", NANOSIM_DOUBLE (energy.wetSlot)},
      {"energy.swipt_slot", NANOSIM_DOUBLE (energy.swiptSlot)},
      {"energy.wit_slot", NANOSIM_DOUBLE (energy.witSlot)},
      {"energy.overhearing", NANOSIM_BOOL (energy.overhearing)},
      {"kalman.k", NANOSIM_DOUBLE (kalman.params.k)},
      {"kalman.h", NANOSIM_DOUBLE (kalman.params.h)},
      {"kalman.q", NANOSIM_DOUBLE (kalman.params.q)},
      {"kalman.z", NANOSIM_DOUBLE (kalman.params.z)},
      {"kalman.initial_covariance", NANOSIM_DOUBLE (kalman.params.initialCovariance)},
      {"kalman.batch_size", NANOSIM_UNSIGNED (kalman.batchSize)},
      {"kalman.mode",
       Field{[] (ScenarioConfig &c, const std::string &v) {
               const auto l = Lower (v);
               if (l == "db")
                 {
                   c.kalman.mode = EstimatorMode::kDecibel;
                 }
               else if (l == "linear")
                 {
                   c.kalman.mode = EstimatorMode::kLinear;
                 }
               else
                 {
                   throw InvalidInput ("expected db or linear, got '" +
                                       v + "'");
                 }
             },
             [] (const ScenarioConfig &c) {
               return std::string (c.kalman.mode == EstimatorMode::kDecibel ? "db" : "linear");
             }}},
      {"rmrls.tau", NANOSIM_UNSIGNED (rmrls.tau)},
      {"rmrls.k_sim", NANOSIM_DOUBLE (rmrls.similarity.kSim)},
      {"rmrls.sigma", NANOSIM_DOUBLE (rmrls.similarity.sigma)},
      {"rmrls.node_count_convention",
       Field{[] (ScenarioConfig &c, const std::string &v) {
               const auto l = Lower (v);
               if (l == "exclude_source")
                 {
                   c.rmrls.similarity.convention = NodeCountConvention::kExcludeSource;
                 }
               else if (l == "set_intersection")
                 {
                   c.rmrls.similarity.convention = NodeCountConvention::kSetIntersection;
                 }
               else
                 {
                   throw InvalidInput ("expected "
                                       "exclude_source or set_intersection, got '" +
                                       v + "'");
                 }
             },
             [] (const ScenarioConfig &c) {
               return std::string (c.rmrls.similarity.convention ==
                                           NodeCountConvention::kExcludeSource
                                       ? "exclude_source"
                                       : "set_intersection");
             }}},
      {"rmrls.collection_window", NANOSIM_DOUBLE (rmrls.collectionWindow)},
      {"rmrls.progress_only", NANOSIM_BOOL (rmrls.progressOnly)},
      {"rmrls.buffer_limit", NANOSIM_UNSIGNED (rmrls.bufferLimit)},
      {"rmrls.hello_period", NANOSIM_DOUBLE (rmrls.helloPeriod)},
      {"rmrls.hello_miss_limit", NANOSIM_UNSIGNED (rmrls.helloMissLimit)},
      {"rmrls.route_ttl", NANOSIM_DOUBLE (rmrls.routeTtl)},
      {"rmrls.discovery_timeout", NANOSIM_DOUBLE (rmrls.discoveryTimeout)},
      {"rmrls.discovery_holdoff", NANOSIM_DOUBLE (rmrls.discoveryHoldoff)},
      {"rmrls.discovery_retries", NANOSIM_UNSIGNED (rmrls.discoveryRetries)},
      {"rmrls.ack_timeout_factor", NANOSIM_DOUBLE (rmrls.ackTimeoutFactor)},
      {"rmrls.bits_ndis", NANOSIM_UNSIGNED (rmrls.bits.ndis)},
      {"rmrls.bits_nfee", NANOSIM_UNSIGNED (rmrls.bits.nfee)},
      {"rmrls.bits_rreq", NANOSIM_UNSIGNED (rmrls.bits.rreq)},
      {"rmrls.bits_rrep", NANOSIM_UNSIGNED (rmrls.bits.rrep)},
      {"rmrls.bits_ack", NANOSIM_UNSIGNED (rmrls.bits.ack)},
      {"rmrls.bits_hello", NANOSIM_UNSIGNED (rmrls.bits.hello)},
      {"rmrls.bits_rerr", NANOSIM_UNSIGNED (rmrls.bits.rerr)},
  };
  return fields;
}

void
Set (ScenarioConfig &config, const std::string &key, const std::string &value)
{
  const auto &reg = Registry ();
  auto it = reg.find (Lower (key));
  if (it == reg.end ())
    {
      throw InvalidInput ("unknown config key '" + key + "'");
    }
  try
    {
      it->second.set (config, Trim (value));
    }
  catch (const InvalidInput &e)
    {
      throw InvalidInput ("config key '" + key + "': " + e.what ());
    }
}

void
Require (bool ok, const std::string &what)
{
  if (!ok)
    {
      throw InvalidInput ("invalid config: " + what);
    }
}

} // namespace

void
ScenarioConfig::Validate () const
{
  Require (areaSize > 0.0, "scenario.area must be positive");
  Require (nodeCount >= sourcesPerBucket, "scenario.node_count must be >= sources_per_bucket");
  Require (commRange >= 0.0, "scenario.comm_range must be non-negative");
  Require (sourcesPerBucket >= 1, "scenario.sources_per_bucket must be >= 1");
  Require (!buckets.empty (), "scenario.buckets must not be empty");
  for (int b : buckets)
    {
      Require (b >= 1 && b <= 64, "scenario.buckets entries must be in 1..64");
    }
  Require (packetLengthBytes > 0, "scenario.packet_length must be positive");
  Require (packetInterval > 0.0, "scenario.packet_interval must be positive");
  Require (simTime >= 0.0, "scenario.sim_time must be non-negative");
  Require (trafficStart >= 0.0, "scenario.traffic_start must be non-negative");
  Require (iterations >= 1, "scenario.iterations must be >= 1");
  Require (dataRate > 0.0, "radio.data_rate must be positive");
  Require (channel.carrierFreq > 0.0, "channel.carrier_freq must be positive");
  Require (channel.absorptionCoeff >= 0.0, "channel.absorption_coeff must be non-negative");
  Require (channel.fluctuationStdDb >= 0.0, "channel.fluctuation_std_db must be non-negative");
  Require (channel.propagationSpeed > 0.0, "radio.propagation_speed must be positive");
  Require (energy.initialEnergy > 0.0, "energy.initial_energy must be positive");
  Require (energy.batteryCapacity >= energy.initialEnergy,
           "energy.battery_capacity must be >= initial_energy");
  Require (energy.harvestRate >= 0.0, "energy.harvest_rate must be non-negative");
  Require (energy.receiveRatio >= 0.0, "energy.receive_ratio must be non-negative");
  Require (energy.epsilon > 0.0, "energy.epsilon must be positive");
  Require (energy.eBit > 0.0, "energy.e_bit must be positive");
  Require (energy.wetSlot >= 0.0 && energy.swiptSlot >= 0.0 && energy.witSlot >= 0.0,
           "energy slot durations must be non-negative");
  Require (energy.wetSlot + energy.swiptSlot + energy.witSlot > 0.0,
           "energy slot cycle must have positive length");
  Require (kalman.params.q >= 0.0 && kalman.params.z >= 0.0,
           "kalman.q and kalman.z must be non-negative");
  Require (kalman.params.initialCovariance >= 0.0, "kalman.initial_covariance must be >= 0");
  Require (kalman.batchSize >= 1, "kalman.batch_size must be >= 1");
  Require (rmrls.tau >= 1, "rmrls.tau must be >= 1");
  rmrls.similarity.Validate ();
  Require (rmrls.collectionWindow >= 0.0, "rmrls.collection_window must be non-negative");
  Require (rmrls.helloPeriod > 0.0, "rmrls.hello_period must be positive");
  Require (rmrls.helloMissLimit >= 1, "rmrls.hello_miss_limit must be >= 1");
  Require (rmrls.routeTtl > 0.0, "rmrls.route_ttl must be positive");
  Require (rmrls.discoveryTimeout > rmrls.collectionWindow,
           "rmrls.discovery_timeout must exceed the collection window");
  Require (rmrls.discoveryHoldoff >= 0.0, "rmrls.discovery_holdoff must be non-negative");
  Require (rmrls.ackTimeoutFactor > 0.0, "rmrls.ack_timeout_factor must be positive");
}

ScenarioConfig
ParseConfig (const std::string &text, const std::string &origin)
{
  boost::property_tree::ptree tree;
  std::istringstream in (text);
  try
    {
      boost::property_tree::ini_parser::read_ini (in, tree);
    }
  catch (const boost::property_tree::ini_parser_error &e)
    {
      throw InvalidInput (origin + ": " + e.message () + " (line " + std::to_string (e.line ()) +
                          ")");
    }
  ScenarioConfig config;
  for (const auto &[section, body] : tree)
    {
      if (body.empty ())
        {
          throw InvalidInput (origin + ": key '" + section + "' must live inside a [section]");
        }
      for (const auto &[key, value] : body)
        {
          Set (config, section + "." + key, value.get_value<std::string> ());
        }
    }
  config.Validate ();
  return config;
}

ScenarioConfig
LoadConfig (const std::filesystem::path &path)
{
  std::ifstream in (path);
  if (!in)
    {
      throw FileError ("cannot read config file '" + path.string () + "'");
    }
  std::stringstream ss;
  ss << in.rdbuf ();
  return ParseConfig (ss.str (), path.string ());
}

void
ApplyOverride (ScenarioConfig &config, const std::string &assignment)
{
  auto eq = assignment.find ('=');
  if (eq == std::string::npos)
    {
      throw InvalidInput ("override '" + assignment + "' is not of the form section.key=value");
    }
  Set (config, Trim (assignment.substr (0, eq)), assignment.substr (eq + 1));
}

std::string
DumpConfig (const ScenarioConfig &config)
{
  std::string out;
  for (const auto &[key, field] : Registry ())
    {
      out += key + "=" + field.get (config) + "\n";
    }
  return out;
}

} // namespace nanosim
