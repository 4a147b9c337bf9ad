#ifndef NANOSIM_EVENT_QUEUE_H
#define NANOSIM_EVENT_QUEUE_H

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace nanosim
{

using Seconds = double;

/**
 * \brief Time-ordered pending events.
 *
 * Events with equal time run in insertion order, so a run is fully
 * determined by the order in which handlers schedule work.
 */
class EventQueue
{
public:
  using Handler = std::function<void ()>;

  /// Schedules `handler` at absolute time `at`; `at` must not precede Now().
  void Schedule (Seconds at, Handler handler);
  void ScheduleIn (Seconds delay, Handler handler) { Schedule (m_now + delay, std::move (handler)); }

  /// Runs events with time <= `until`; afterwards Now() == until.
  void RunUntil (Seconds until);
  /// Pops and runs a single event. Returns false when empty.
  bool Step ();

  Seconds Now () const { return m_now; }
  bool Empty () const { return m_heap.empty (); }
  std::size_t Pending () const { return m_heap.size (); }
  std::uint64_t Executed () const { return m_executed; }
  /// Time of the earliest pending event; only valid when !Empty().
  Seconds NextTime () const { return m_heap.top ().time; }

private:
  struct Entry
  {
    Seconds time;
    std::uint64_t seq;
    Handler handler;
  };
  struct Later
  {
    bool operator() (const Entry &a, const Entry &b) const
    {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> m_heap;
  Seconds m_now = 0.0;
  std::uint64_t m_nextSeq = 0;
  std::uint64_t m_executed = 0;
};

} // namespace nanosim

#endif /* NANOSIM_EVENT_QUEUE_H */
