#ifndef NANOSIM_TYPES_H
#define NANOSIM_TYPES_H

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nanosim
{

/// Identifier of a nanonode or of the nano control node (NC).
enum class NodeId : std::uint32_t
{
};

/// The NC always carries this id; ordinary nanonodes are numbered from 1.
inline constexpr NodeId kNcId{0};

constexpr std::uint32_t
Index (NodeId id)
{
  return static_cast<std::uint32_t> (id);
}

constexpr NodeId
MakeNodeId (std::uint32_t v)
{
  return NodeId{v};
}

/// Planar position in millimeters.
struct Position
{
  double x = 0.0;
  double y = 0.0;

  bool operator== (const Position &) const = default;
};

double Distance (const Position &a, const Position &b);

/// Raised for arguments that violate an operation's preconditions.
class InvalidInput : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a file cannot be opened for reading or writing.
class FileError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Raised when an object is used in a state that does not allow the call.
class StateError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/**
 * Ordered node sequence from a source to the NC together with the running
 * sum of per-hop stability accumulated while the path was discovered.
 */
struct RoutePath
{
  std::vector<NodeId> hops;
  double totalStability = 0.0;

  NodeId Source () const { return hops.front (); }
  NodeId Destination () const { return hops.back (); }
  std::size_t HopCount () const { return hops.empty () ? 0 : hops.size () - 1; }
  bool Contains (NodeId id) const;
  /// True if the undirected link {a, b} appears as consecutive hops.
  bool ContainsLink (NodeId a, NodeId b) const;
  /// No repeated node and at least two entries.
  bool IsValid () const;

  bool operator== (const RoutePath &) const = default;
};

/// Lexicographic comparison of hop sequences; used as the last tie-break.
bool HopsLess (const RoutePath &a, const RoutePath &b);

/// |set(a.hops) ∩ set(b.hops)|
std::size_t SharedNodeCount (const RoutePath &a, const RoutePath &b);

/// Number of undirected adjacent pairs present in both hop sequences.
std::size_t SharedLinkCount (const RoutePath &a, const RoutePath &b);

enum class MessageKind
{
  kNdis,
  kNfee,
  kRreq,
  kRrep,
  kAck,
  kHello,
  kRerr,
  kData,
};

const char *ToString (MessageKind kind);

/// Energy-accounting size of a control message. Only the kind matters.
std::uint32_t WireSizeBits (MessageKind kind);

struct NdisPayload
{
};

struct NfeePayload
{
  NodeId neighbor{};
  double residualEnergy = 0.0;
  NodeId addressee{};
};

struct RreqPayload
{
  NodeId source{};
  NodeId destination = kNcId;
  RoutePath record;
  std::uint32_t requestId = 0;
  /// Stability of each hop taken so far; hopScores[i] belongs to the hop
  /// leaving record.hops[i]. The last entry is the hop into the receiver.
  std::vector<double> hopScores;
  double TotalStability () const { return record.totalStability; }
};

struct RrepPayload
{
  RoutePath main;
  std::optional<RoutePath> backup;
  std::vector<double> mainHopScores;
  std::uint32_t requestId = 0;
};

struct RerrPayload
{
  NodeId failedFrom{};
  NodeId failedTo{};
  NodeId source{};
  std::uint32_t requestId = 0;
  /// Reverse route the error travels along, failure point first.
  std::vector<NodeId> reversePath;
};

struct AckPayload
{
  std::uint32_t requestId = 0;
};

struct HelloPayload
{
};

using MessagePayload = std::variant<NdisPayload, NfeePayload, RreqPayload, RrepPayload,
                                    AckPayload, HelloPayload, RerrPayload>;

struct ControlMessage
{
  MessageKind kind = MessageKind::kHello;
  NodeId sender{};
  MessagePayload payload;

  std::uint32_t WireSizeBits () const { return nanosim::WireSizeBits (kind); }
};

} // namespace nanosim

#endif /* NANOSIM_TYPES_H */
