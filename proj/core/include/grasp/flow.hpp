#pragma once

// Packets exchanged on the emulated data plane and the flow-rule vocabulary the
// controller programs switches with.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "grasp/model.hpp"

namespace grasp {

struct PacketHeader {
  MacAddr eth_src;
  MacAddr eth_dst;
  Ipv4Addr ip_src;
  Ipv4Addr ip_dst;

  friend bool operator==(const PacketHeader&, const PacketHeader&) = default;
};

/// Data center asking to join.
struct RegisterMsg {
  friend bool operator==(const RegisterMsg&, const RegisterMsg&) = default;
};

/// Controller's answer to a registration.
struct RegisterReply {
  std::uint32_t dc_id = 0;
  Token passcode{};
  std::vector<std::string> parameters;
  double report_period = 0.0;

  friend bool operator==(const RegisterReply&, const RegisterReply&) = default;
};

/// Topology probe flooded out of every port of `origin`.
struct DiscoverMsg {
  Token token{};
  NodeId origin;

  friend bool operator==(const DiscoverMsg&, const DiscoverMsg&) = default;
};

/// Periodic state report from a registered data center.
struct ReportMsg {
  std::map<std::string, double> values;
  Token passcode{};

  friend bool operator==(const ReportMsg&, const ReportMsg&) = default;
};

/// Client traffic toward the service; `seq == 0` opens the flow.
struct ClientRequest {
  std::uint64_t flow_id = 0;
  std::uint32_t seq = 0;

  friend bool operator==(const ClientRequest&, const ClientRequest&) = default;
};

/// Data center's answer to the opening packet of a flow.
struct ClientResponse {
  std::uint64_t flow_id = 0;

  friend bool operator==(const ClientResponse&, const ClientResponse&) = default;
};

using Payload =
    std::variant<RegisterMsg, RegisterReply, DiscoverMsg, ReportMsg, ClientRequest, ClientResponse>;

struct Packet {
  PacketHeader header;
  Payload payload;

  friend bool operator==(const Packet&, const Packet&) = default;
};

/// IP match with optional wildcards on either side.
struct FlowMatch {
  std::optional<Ipv4Addr> src_ip;
  std::optional<Ipv4Addr> dst_ip;

  bool matches(const PacketHeader& h) const {
    return (!src_ip || *src_ip == h.ip_src) && (!dst_ip || *dst_ip == h.ip_dst);
  }
  bool is_wildcard() const { return !src_ip && !dst_ip; }

  friend auto operator<=>(const FlowMatch&, const FlowMatch&) = default;
};

struct RewriteEthDst {
  MacAddr mac;
  friend bool operator==(const RewriteEthDst&, const RewriteEthDst&) = default;
};
struct RewriteIpDst {
  Ipv4Addr ip;
  friend bool operator==(const RewriteIpDst&, const RewriteIpDst&) = default;
};
struct Output {
  PortNo port = 0;
  friend bool operator==(const Output&, const Output&) = default;
};
struct SendToController {
  friend bool operator==(const SendToController&, const SendToController&) = default;
};

using Action = std::variant<RewriteEthDst, RewriteIpDst, Output, SendToController>;

inline constexpr int kTableMissPriority = 0;
inline constexpr int kServicePriority = 100;

/// Instruction to add (or replace, on identical match and priority) one rule.
struct FlowMod {
  NodeId switch_id;
  FlowMatch match;
  std::vector<Action> actions;
  int priority = kTableMissPriority;
  /// Seconds without a hit before eviction; 0 means permanent.
  double idle_timeout = 0.0;

  /// Exactly one terminal action (Output or SendToController), and it comes last.
  bool well_formed() const;

  friend bool operator==(const FlowMod&, const FlowMod&) = default;
};

/// Lowest-priority match-all rule punting to the controller.
FlowMod table_miss_flow(NodeId sw);

std::string to_string(const FlowMatch& m);
std::string to_string(const Action& a);
/// `sw=s0 prio=100 match=src=10.2.0.1,dst=* timeout=2 actions=set_ip_dst:10.1.0.3,output:4`
std::string to_string(const FlowMod& fm);

/// Flow mods sorted by (switch, priority, match), one per line.
std::string dump_flow_mods(std::vector<FlowMod> mods);

/// Applies header rewrites in order; returns the terminal action.
Action apply_actions(const std::vector<Action>& actions, PacketHeader& header);

}  // namespace grasp
