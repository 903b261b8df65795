#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "grasp/model.hpp"

namespace grasp {

/// Undirected switch-to-switch cable.
struct SwitchLink {
  NodeId a;
  PortNo a_port = 0;
  NodeId b;
  PortNo b_port = 0;

  friend bool operator==(const SwitchLink&, const SwitchLink&) = default;
};

/// A data center or client plugged into one switch port.
struct Attachment {
  NodeId host;
  NodeId switch_id;
  PortNo port = 0;

  friend bool operator==(const Attachment&, const Attachment&) = default;
};

/// Far end of a switch port.
struct PortPeer {
  NodeId node;
  PortNo port = 0;  // 0 for hosts
};

/// Switches, data centers and clients, their cabling and their addresses.
/// Node indices follow declaration order in the file, per kind.
class Topology {
 public:
  std::vector<NodeId> switches;
  std::vector<SwitchLink> links;
  std::vector<Attachment> attachments;
  std::map<NodeId, Address> addresses;
  std::map<NodeId, std::string> names;
  /// Virtual address clients send job requests to.
  Ipv4Addr service_ip{0x0aff0001};     // 10.255.0.1
  Ipv4Addr controller_ip{0x0aff00fe};  // 10.255.0.254

  /// Throws ValidationError("disconnected"), ValidationError("port reuse"), ...
  void validate() const;

  std::vector<NodeId> datacenters() const;
  std::vector<NodeId> clients() const;
  std::optional<NodeId> find(std::string_view name) const;
  const std::string& name_of(NodeId id) const;
  const Address& address_of(NodeId id) const;
  std::optional<NodeId> node_by_ip(Ipv4Addr ip) const;
  const Attachment& attachment_of(NodeId host) const;
  /// All used ports of `sw`, ascending.
  std::vector<PortNo> ports_of(NodeId sw) const;
  std::optional<PortPeer> peer(NodeId sw, PortNo port) const;

  friend bool operator==(const Topology&, const Topology&) = default;
};

Topology topology_from_json(const nlohmann::json& doc);
nlohmann::json topology_to_json(const Topology& topo);

/// Reads a JSON topology file, assigns missing addresses and validates.
Topology load_topology(const std::filesystem::path& path);

/// Deterministic default addresses: switches 10.0.x.y, data centers 10.1.x.y, clients 10.2.x.y
/// where x.y encodes index + 1, with matching locally-administered MACs 02:00:00:0K:xx:yy.
Address default_address(NodeId id);

}  // namespace grasp
