#pragma once

// Identifiers, addresses and registration records shared by every module.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace grasp {

/// Simulated time in seconds.
using SimTime = double;

/// Switch port number. Port 0 is never assigned to a link or host.
using PortNo = std::uint32_t;

inline constexpr double kSecondsPerHour = 3600.0;

enum class NodeKind : std::uint8_t { Switch, DataCenter, Client };

struct NodeId {
  NodeKind kind = NodeKind::Switch;
  std::uint32_t index = 0;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline NodeId switch_id(std::uint32_t i) { return {NodeKind::Switch, i}; }
inline NodeId datacenter_id(std::uint32_t i) { return {NodeKind::DataCenter, i}; }
inline NodeId client_id(std::uint32_t i) { return {NodeKind::Client, i}; }

/// "s0", "dc3", "c1".
std::string to_string(NodeId id);

struct Ipv4Addr {
  std::uint32_t value = 0;

  friend auto operator<=>(const Ipv4Addr&, const Ipv4Addr&) = default;
};

struct MacAddr {
  std::uint64_t value = 0;  // low 48 bits

  friend auto operator<=>(const MacAddr&, const MacAddr&) = default;
};

std::string to_string(Ipv4Addr ip);
std::string to_string(MacAddr mac);
/// Returns nullopt unless `text` is a dotted quad.
std::optional<Ipv4Addr> parse_ipv4(std::string_view text);
/// Returns nullopt unless `text` is six colon-separated hex octets.
std::optional<MacAddr> parse_mac(std::string_view text);

inline constexpr MacAddr kBroadcastMac{0xffffffffffffULL};

struct Address {
  Ipv4Addr ip;
  MacAddr mac;

  friend bool operator==(const Address&, const Address&) = default;
};

/// Opaque 16-byte key: data-center passcodes and the discovery token.
using Token = std::array<std::uint8_t, 16>;

std::string to_hex(const Token& token);

/// Seeded source of tokens; the same seed yields the same token sequence.
class TokenGenerator {
 public:
  explicit TokenGenerator(std::uint64_t seed) : engine_(seed) {}
  Token next();

 private:
  std::mt19937_64 engine_;
};

/// Controller-side registration state of one data center.
struct DataCenterRecord {
  NodeId id;          // DataCenter kind; index is the controller-assigned dc id
  Ipv4Addr ip;
  MacAddr mac;
  NodeId switch_id;   // switch the data center hangs off
  PortNo port = 0;    // port on that switch
  Token passcode{};

  friend bool operator==(const DataCenterRecord&, const DataCenterRecord&) = default;
};

/// How switch `from_switch` reaches its neighbour `to_switch`.
struct AdjacencyEntry {
  NodeId from_switch;
  NodeId to_switch;
  PortNo egress_port = 0;
  MacAddr next_hop_mac;

  friend auto operator<=>(const AdjacencyEntry&, const AdjacencyEntry&) = default;
};

/// Shortest decimal text that round-trips to the same double ("0", "2.5", "1e-07").
std::string format_real(double value);

}  // namespace grasp

template <>
struct std::hash<grasp::NodeId> {
  std::size_t operator()(const grasp::NodeId& id) const noexcept {
    return (static_cast<std::size_t>(id.kind) << 32) ^ id.index;
  }
};

template <>
struct std::hash<grasp::Ipv4Addr> {
  std::size_t operator()(const grasp::Ipv4Addr& ip) const noexcept { return ip.value; }
};
