#ifndef NANOSIM_CHANNEL_H
#define NANOSIM_CHANNEL_H

#include "nanosim/config.h"

#include <random>

namespace nanosim
{

double DbmToWatts (double dbm);
double WattsToDbm (double watts);

/**
 * Spreading plus molecular-absorption terahertz channel.
 *
 * PL(d) = (4 pi d f / c)^2 * exp(alpha d), floored at 1 so that the
 * received power never exceeds the transmit power in the near field.
 */
class ChannelModel
{
public:
  explicit ChannelModel (const ChannelConfig &config);

  /// Linear path loss for a distance in meters; throws InvalidInput for d <= 0.
  double PathLoss (double distanceM) const;
  double PathLossDb (double distanceM) const;

  double TxPowerW () const { return DbmToWatts (m_config.txPowerDbm); }
  /// Mean received power over a link of the given length in millimeters.
  double MeanRxPowerW (double distanceMm) const;

  /// Received power perturbed by log-normal shadowing of fluctuationStdDb.
  double SampleRssi (double truePowerW, std::mt19937_64 &rng) const;

  /// Mean dB above the receiver sensitivity (plus `extraGainDb`).
  double MeanMarginDb (double distanceMm, double extraGainDb = 0.0) const;
  /// P(sample >= sensitivity) for a link with the given mean margin.
  double SuccessProbability (double meanMarginDb) const;

  const ChannelConfig &Config () const { return m_config; }

private:
  ChannelConfig m_config;
};

/// Free function form used by the Python bindings and tests.
double PathLoss (double distanceM, const ChannelConfig &channel);
double SampleRssi (double truePowerW, const ChannelConfig &channel, std::mt19937_64 &rng);

} // namespace nanosim

#endif /* NANOSIM_CHANNEL_H */
