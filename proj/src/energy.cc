#include "nanosim/energy.h"

#include <algorithm>
#include <cmath>

namespace nanosim
{

EnergyGate
EnergyGate::FromConfig (const ScenarioConfig &config)
{
  EnergyGate g;
  g.epsilon = config.energy.epsilon;
  g.eBit = config.energy.eBit;
  g.bits = config.rmrls.bits;
  return g;
}

SlotSchedule::SlotSchedule (Seconds wet, Seconds swipt, Seconds wit)
    : m_wet (wet),
      m_swipt (swipt),
      m_wit (wit)
{
  if (wet < 0.0 || swipt < 0.0 || wit < 0.0 || CycleLength () <= 0.0)
    {
      throw InvalidInput ("slot durations must be non-negative with a positive cycle");
    }
}

SlotKind
SlotSchedule::At (Seconds t) const
{
  const double phase = std::fmod (t, CycleLength ());
  if (phase < m_wet)
    {
      return SlotKind::kWet;
    }
  if (phase < m_wet + m_swipt)
    {
      return SlotKind::kSwipt;
    }
  return SlotKind::kWit;
}

Seconds
SlotSchedule::NextBoundary (Seconds t) const
{
  const double cycle = CycleLength ();
  const double base = std::floor (t / cycle) * cycle;
  for (double edge : {m_wet, m_wet + m_swipt, cycle, cycle + m_wet})
    {
      if (base + edge > t)
        {
          return base + edge;
        }
    }
  return base + cycle + m_wet + m_swipt;
}

Seconds
SlotSchedule::HarvestingPrefix (Seconds t) const
{
  if (t <= 0.0)
    {
      return 0.0;
    }
  const double cycle = CycleLength ();
  const double harvestPerCycle = m_wet + m_swipt;
  const double full = std::floor (t / cycle);
  const double phase = t - full * cycle;
  return full * harvestPerCycle + std::min (phase, harvestPerCycle);
}

Seconds
SlotSchedule::HarvestingTime (Seconds t0, Seconds t1) const
{
  if (t1 <= t0)
    {
      return 0.0;
    }
  return HarvestingPrefix (t1) - HarvestingPrefix (t0);
}

Battery::Battery (double initial, double capacity, bool infinite)
    : m_initial (initial),
      m_capacity (capacity),
      m_energy (initial),
      m_infinite (infinite)
{
}

void
Battery::Settle (Seconds t, const SlotSchedule &schedule, double harvestRate)
{
  if (t <= m_lastSettle)
    {
      return;
    }
  Credit (harvestRate * schedule.HarvestingTime (m_lastSettle, t));
  m_lastSettle = t;
}

} // namespace nanosim
