#ifndef NANOSIM_KALMAN_H
#define NANOSIM_KALMAN_H

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

namespace nanosim
{

/// Received power in watts for a transmit power and a (linear) path loss.
double ReceivedPower (double transmitPowerW, double pathLoss);

struct KalmanParams
{
  double k = 1.0;  ///< state transition
  double h = 1.0;  ///< measurement model
  double q = 0.01; ///< process-noise covariance
  double z = 1.0;  ///< measurement-noise covariance
  double initialCovariance = 1.0;
};

/**
 * \brief Scalar Kalman filter state for one directed link.
 *
 * `estimate`/`covariance` hold either the prior (after KfPredict) or the
 * posterior (after KfUpdate). `theta` is the sigmoid center used by
 * LinkQuality and never changes after KfInit.
 */
struct KalmanState
{
  double estimate = 0.0;
  double covariance = 0.0;
  double k = 1.0;
  double h = 1.0;
  double q = 0.0;
  double z = 0.0;
  double theta = 0.0;
  bool initialized = false;
};

/// Thrown by KfUpdate when H·O⁻·H + Z vanishes.
class DegenerateGain : public std::exception
{
public:
  const char *what () const noexcept override { return "degenerate Kalman gain denominator"; }
};

/// Mean of the batch as the first estimate, population std-dev as theta.
KalmanState KfInit (std::span<const double> firstBatch, const KalmanParams &params);

KalmanState KfPredict (const KalmanState &state);

KalmanState KfUpdate (const KalmanState &prior, double measurement);

/// Logistic map of (estimate - theta) into (0, 1).
double LinkQuality (const KalmanState &state);

enum class EstimatorMode
{
  kDecibel, ///< measurements are dB above a reference power
  kLinear,  ///< measurements are watts
};

/**
 * Per-neighbor link estimator. Buffers the first `batchSize` samples, then
 * runs predict/update on each new sample.
 */
class LinkEstimator
{
public:
  LinkEstimator () = default;
  LinkEstimator (const KalmanParams &params, std::size_t batchSize);

  void AddSample (double measurement);
  /// Initialize from a partial batch if fewer than batchSize samples arrived.
  void ForceInit ();

  std::size_t SampleCount () const { return m_samples; }
  bool Initialized () const { return m_state.initialized; }
  const KalmanState &State () const { return m_state; }
  /// Quality in (0, 1); 0.5 when no sample has been seen at all.
  double Quality () const;

private:
  KalmanParams m_params;
  std::size_t m_batchSize = 5;
  std::vector<double> m_batch;
  KalmanState m_state;
  std::size_t m_samples = 0;
};

} // namespace nanosim

#endif /* NANOSIM_KALMAN_H */
