#include "nanosim/channel.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nanosim
{

double
DbmToWatts (double dbm)
{
  return 1e-3 * std::pow (10.0, dbm / 10.0);
}

double
WattsToDbm (double watts)
{
  return 10.0 * std::log10 (watts / 1e-3);
}

ChannelModel::ChannelModel (const ChannelConfig &config)
    : m_config (config)
{
}

double
ChannelModel::PathLoss (double distanceM) const
{
  if (!(distanceM > 0.0))
    {
      throw InvalidInput ("path loss needs a positive distance");
    }
  const double spreading =
      4.0 * std::numbers::pi * distanceM * m_config.carrierFreq / m_config.propagationSpeed;
  const double pl = spreading * spreading * std::exp (m_config.absorptionCoeff * distanceM);
  return std::max (1.0, pl);
}

double
ChannelModel::PathLossDb (double distanceM) const
{
  return 10.0 * std::log10 (PathLoss (distanceM));
}

double
ChannelModel::MeanRxPowerW (double distanceMm) const
{
  return TxPowerW () / PathLoss (distanceMm * 1e-3);
}

double
ChannelModel::SampleRssi (double truePowerW, std::mt19937_64 &rng) const
{
  if (!(truePowerW > 0.0))
    {
      throw InvalidInput ("RSSI sampling needs a positive true power");
    }
  if (m_config.fluctuationStdDb == 0.0)
    {
      return truePowerW;
    }
  std::normal_distribution<double> shadow (0.0, m_config.fluctuationStdDb);
  return truePowerW * std::pow (10.0, shadow (rng) / 10.0);
}

double
ChannelModel::MeanMarginDb (double distanceMm, double extraGainDb) const
{
  return m_config.txPowerDbm - PathLossDb (distanceMm * 1e-3) + extraGainDb -
         m_config.rxSensitivityDbm;
}

double
ChannelModel::SuccessProbability (double meanMarginDb) const
{
  if (m_config.fluctuationStdDb == 0.0)
    {
      return meanMarginDb >= 0.0 ? 1.0 : 0.0;
    }
  return 0.5 * std::erfc (-meanMarginDb / (m_config.fluctuationStdDb * std::numbers::sqrt2));
}

double
PathLoss (double distanceM, const ChannelConfig &channel)
{
  return ChannelModel (channel).PathLoss (distanceM);
}

double
SampleRssi (double truePowerW, const ChannelConfig &channel, std::mt19937_64 &rng)
{
  return ChannelModel (channel).SampleRssi (truePowerW, rng);
}

} // namespace nanosim
