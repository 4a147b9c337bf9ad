#ifndef NANOSIM_PROTOCOL_H
#define NANOSIM_PROTOCOL_H

#include "nanosim/network.h"

#include <memory>

namespace nanosim
{

/**
 * \brief Routing behavior plugged into a bucket simulation.
 *
 * Send() is invoked once per generated packet at its generation time and
 * must eventually complete the packet through Network::Complete().
 */
class Protocol
{
public:
  explicit Protocol (Network &net)
      : m_net (net)
  {
  }
  virtual ~Protocol () = default;

  Protocol (const Protocol &) = delete;
  Protocol &operator= (const Protocol &) = delete;

  virtual ProtocolKind Kind () const = 0;
  /// Schedules periodic activity; called once before the first event.
  virtual void Start () {}
  virtual void Send (const DataPacket &packet) = 0;
  /// Drops whatever is still queued when the run ends.
  virtual void Finish () {}

protected:
  Network &m_net;
};

std::unique_ptr<Protocol> MakeProtocol (ProtocolKind kind, Network &net);

} // namespace nanosim

#endif /* NANOSIM_PROTOCOL_H */
