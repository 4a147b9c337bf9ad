#ifndef NANOSIM_ENERGY_H
#define NANOSIM_ENERGY_H

#include "nanosim/config.h"
#include "nanosim/event-queue.h"

namespace nanosim
{

/**
 * Residual-energy gate a neighbor must pass before answering a discovery:
 * E >= epsilon * e_bit * (N_NDIS + N_NFEE + N_RREQ + N_RREP).
 */
struct EnergyGate
{
  double epsilon = 1.0;
  double eBit = 1.4e-13 / 128.0;
  MessageBits bits;

  static EnergyGate FromConfig (const ScenarioConfig &config);

  double Threshold () const
  {
    const std::uint64_t total = std::uint64_t{bits.ndis} + bits.nfee + bits.rreq + bits.rrep;
    return epsilon * eBit * static_cast<double> (total);
  }
  bool Qualifies (double residualEnergy) const { return residualEnergy >= Threshold (); }
};

enum class SlotKind
{
  kWet,
  kSwipt,
  kWit,
};

/// Global repeating WET -> SWIPT -> WIT cycle starting at t = 0.
class SlotSchedule
{
public:
  SlotSchedule () = default;
  SlotSchedule (Seconds wet, Seconds swipt, Seconds wit);

  Seconds CycleLength () const { return m_wet + m_swipt + m_wit; }
  SlotKind At (Seconds t) const;
  /// First slot boundary strictly after t.
  Seconds NextBoundary (Seconds t) const;
  /// Time within [t0, t1] spent in WET or SWIPT slots.
  Seconds HarvestingTime (Seconds t0, Seconds t1) const;
  /// Time within [0, t] spent in WET or SWIPT slots.
  Seconds HarvestingPrefix (Seconds t) const;

private:

  Seconds m_wet = 5.0;
  Seconds m_swipt = 0.01;
  Seconds m_wit = 0.1;
};

/**
 * Node battery with lazy harvesting. All debits and credits are recorded
 * so that final == initial + credited - debited holds up to rounding. The
 * running sums use extended precision, which keeps the drift over a long
 * run far below 1e-18 J.
 */
class Battery
{
public:
  Battery () = default;
  Battery (double initial, double capacity, bool infinite = false);

  /// Credits harvest for (lastSettle, t], capped at capacity.
  void Settle (Seconds t, const SlotSchedule &schedule, double harvestRate);
  /// Adds harvested energy up to the capacity; no effect on a dead or
  /// mains-powered node.
  void Credit (double gain)
  {
    if (m_alive && !m_infinite && gain > 0.0)
      {
        const long double room = m_capacity - m_energy;
        const long double applied = gain < room ? gain : (room > 0.0L ? room : 0.0L);
        m_energy += applied;
        m_credited += applied;
      }
  }
  /// Debits `amount`. When the battery cannot cover it the remainder is
  /// drained, the node dies and false is returned.
  bool Debit (double amount)
  {
    if (m_infinite)
      {
        m_debited += amount;
        return true;
      }
    if (!m_alive)
      {
        return false;
      }
    if (m_energy >= amount)
      {
        m_energy -= amount;
        m_debited += amount;
        m_alive = m_energy > 0.0L;
        return true;
      }
    m_debited += m_energy;
    m_energy = 0.0L;
    m_alive = false;
    return false;
  }
  void Kill () { m_alive = false; }

  double Energy () const { return static_cast<double> (m_energy); }
  double Initial () const { return m_initial; }
  double Credited () const { return static_cast<double> (m_credited); }
  double Debited () const { return static_cast<double> (m_debited); }
  bool Alive () const { return m_alive; }
  bool Infinite () const { return m_infinite; }

private:
  double m_initial = 0.0;
  double m_capacity = 0.0;
  long double m_energy = 0.0L;
  long double m_credited = 0.0L;
  long double m_debited = 0.0L;
  Seconds m_lastSettle = 0.0;
  bool m_alive = true;
  bool m_infinite = false;
};

} // namespace nanosim

#endif /* NANOSIM_ENERGY_H */
