#include "nanosim/kalman.h"

#include "nanosim/types.h"

#include <cmath>
#include <numeric>

namespace nanosim
{

double
ReceivedPower (double transmitPowerW, double pathLoss)
{
  if (!(transmitPowerW > 0.0))
    {
      throw InvalidInput ("transmit power must be positive");
    }
  if (!(pathLoss >= 1.0))
    {
      throw InvalidInput ("path loss must be >= 1");
    }
  return transmitPowerW / pathLoss;
}

KalmanState
KfInit (std::span<const double> firstBatch, const KalmanParams &params)
{
  if (firstBatch.empty ())
    {
      throw InvalidInput ("Kalman initialization needs at least one sample");
    }
  if (params.q < 0.0 || params.z < 0.0 || params.initialCovariance < 0.0)
    {
      throw InvalidInput ("noise covariances must be non-negative");
    }
  const double n = static_cast<double> (firstBatch.size ());
  const double mean = std::accumulate (firstBatch.begin (), firstBatch.end (), 0.0) / n;
  double sq = 0.0;
  for (double x : firstBatch)
    {
      sq += (x - mean) * (x - mean);
    }

  KalmanState s;
  s.estimate = mean;
  s.covariance = params.initialCovariance;
  s.k = params.k;
  s.h = params.h;
  s.q = params.q;
  s.z = params.z;
  s.theta = std::sqrt (sq / n);
  s.initialized = true;
  return s;
}

KalmanState
KfPredict (const KalmanState &state)
{
  if (!state.initialized)
    {
      throw StateError ("Kalman predict on an uninitialized state");
    }
  KalmanState prior = state;
  prior.estimate = state.k * state.estimate;
  prior.covariance = state.k * state.covariance * state.k + state.q;
  return prior;
}

KalmanState
KfUpdate (const KalmanState &prior, double measurement)
{
  if (!prior.initialized)
    {
      throw StateError ("Kalman update on an uninitialized state");
    }
  const double denom = prior.h * prior.covariance * prior.h + prior.z;
  if (denom == 0.0)
    {
      throw DegenerateGain ();
    }
  const double gain = prior.covariance * prior.h / denom;
  KalmanState post = prior;
  post.estimate = prior.estimate + gain * (measurement - prior.h * prior.estimate);
  post.covariance = (1.0 - gain * prior.h) * prior.covariance;
  // (1 - MH) can round a hair below zero when Z is tiny.
  if (post.covariance < 0.0)
    {
      post.covariance = 0.0;
    }
  return post;
}

double
LinkQuality (const KalmanState &state)
{
  if (!state.initialized)
    {
      throw StateError ("link quality of an uninitialized estimator");
    }
  return 1.0 / (1.0 + std::exp (-(state.estimate - state.theta)));
}

LinkEstimator::LinkEstimator (const KalmanParams &params, std::size_t batchSize)
    : m_params (params),
      m_batchSize (batchSize == 0 ? 1 : batchSize)
{
  m_batch.reserve (m_batchSize);
}

void
LinkEstimator::AddSample (double measurement)
{
  ++m_samples;
  if (!m_state.initialized)
    {
      m_batch.push_back (measurement);
      if (m_batch.size () >= m_batchSize)
        {
          ForceInit ();
        }
      return;
    }
  m_state = KfUpdate (KfPredict (m_state), measurement);
}

void
LinkEstimator::ForceInit ()
{
  if (m_state.initialized || m_batch.empty ())
    {
      return;
    }
  m_state = KfInit (m_batch, m_params);
  m_batch.clear ();
  m_batch.shrink_to_fit ();
}

double
LinkEstimator::Quality () const
{
  if (m_state.initialized)
    {
      return LinkQuality (m_state);
    }
  if (m_batch.empty ())
    {
      return 0.5;
    }
  return LinkQuality (KfInit (m_batch, m_params));
}

} // namespace nanosim
