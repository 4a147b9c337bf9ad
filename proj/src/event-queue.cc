#include "nanosim/event-queue.h"

#include "nanosim/types.h"

namespace nanosim
{

void
EventQueue::Schedule (Seconds at, Handler handler)
{
  if (at < m_now)
    {
      throw InvalidInput ("cannot schedule an event in the past");
    }
  m_heap.push (Entry{at, m_nextSeq++, std::move (handler)});
}

bool
EventQueue::Step ()
{
  if (m_heap.empty ())
    {
      return false;
    }
  // top() is const; the entry is discarded by pop() right after the move.
  Entry e = std::move (const_cast<Entry &> (m_heap.top ()));
  m_heap.pop ();
  m_now = e.time;
  ++m_executed;
  e.handler ();
  return true;
}

void
EventQueue::RunUntil (Seconds until)
{
  while (!m_heap.empty () && m_heap.top ().time <= until)
    {
      Step ();
    }
  if (until > m_now)
    {
      m_now = until;
    }
}

} // namespace nanosim
