#include "nanosim/types.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>
#include <utility>

namespace nanosim
{

double
Distance (const Position &a, const Position &b)
{
  return std::hypot (a.x - b.x, a.y - b.y);
}

bool
RoutePath::Contains (NodeId id) const
{
  return std::find (hops.begin (), hops.end (), id) != hops.end ();
}

bool
RoutePath::ContainsLink (NodeId a, NodeId b) const
{
  for (std::size_t i = 0; i + 1 < hops.size (); ++i)
    {
      if ((hops[i] == a && hops[i + 1] == b) || (hops[i] == b && hops[i + 1] == a))
        {
          return true;
        }
    }
  return false;
}

bool
RoutePath::IsValid () const
{
  if (hops.size () < 2)
    {
      return false;
    }
  std::unordered_set<NodeId> seen;
  for (NodeId id : hops)
    {
      if (!seen.insert (id).second)
        {
          return false;
        }
    }
  return true;
}

bool
HopsLess (const RoutePath &a, const RoutePath &b)
{
  return std::lexicographical_compare (a.hops.begin (), a.hops.end (), b.hops.begin (),
                                       b.hops.end (), [] (NodeId x, NodeId y) {
                                         return Index (x) < Index (y);
                                       });
}

std::size_t
SharedNodeCount (const RoutePath &a, const RoutePath &b)
{
  std::unordered_set<NodeId> inA (a.hops.begin (), a.hops.end ());
  std::unordered_set<NodeId> counted;
  for (NodeId id : b.hops)
    {
      if (inA.count (id) > 0)
        {
          counted.insert (id);
        }
    }
  return counted.size ();
}

namespace
{

std::set<std::pair<std::uint32_t, std::uint32_t>>
UndirectedLinks (const RoutePath &p)
{
  std::set<std::pair<std::uint32_t, std::uint32_t>> links;
  for (std::size_t i = 0; i + 1 < p.hops.size (); ++i)
    {
      auto u = Index (p.hops[i]);
      auto v = Index (p.hops[i + 1]);
      links.emplace (std::min (u, v), std::max (u, v));
    }
  return links;
}

} // namespace

std::size_t
SharedLinkCount (const RoutePath &a, const RoutePath &b)
{
  auto la = UndirectedLinks (a);
  auto lb = UndirectedLinks (b);
  std::size_t shared = 0;
  for (const auto &l : la)
    {
      shared += lb.count (l);
    }
  return shared;
}

const char *
ToString (MessageKind kind)
{
  switch (kind)
    {
    case MessageKind::kNdis:
      return "NDIS";
    case MessageKind::kNfee:
      return "NFEE";
    case MessageKind::kRreq:
      return "RREQ";
    case MessageKind::kRrep:
      return "RREP";
    case MessageKind::kAck:
      return "ACK";
    case MessageKind::kHello:
      return "HELLO";
    case MessageKind::kRerr:
      return "RERR";
    case MessageKind::kData:
      return "DATA";
    }
  return "?";
}

std::uint32_t
WireSizeBits (MessageKind kind)
{
  switch (kind)
    {
    case MessageKind::kRreq:
    case MessageKind::kRrep:
      return 48;
    // ACK, HELLO and RERR have no published size; they are charged like NDIS.
    case MessageKind::kNdis:
    case MessageKind::kNfee:
    case MessageKind::kAck:
    case MessageKind::kHello:
    case MessageKind::kRerr:
      return 16;
    case MessageKind::kData:
      return 128 * 8;
    }
  return 16;
}

} // namespace nanosim
