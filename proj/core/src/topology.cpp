#include "grasp/topology.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>

#include <nlohmann/json.hpp>

#include "grasp/error.hpp"

namespace grasp {

using nlohmann::json;

namespace {

std::uint32_t kind_code(NodeKind kind) {
  switch (kind) {
    case NodeKind::Switch:
      return 0;
    case NodeKind::DataCenter:
      return 1;
    case NodeKind::Client:
      return 2;
  }
  return 3;
}

Ipv4Addr ip_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.at(key).is_string()) throw ParseError(where + "." + key + ": expected a string");
  const auto text = obj.at(key).get<std::string>();
  auto ip = parse_ipv4(text);
  if (!ip) throw ParseError(where + "." + key + ": bad IPv4 address '" + text + "'");
  return *ip;
}

MacAddr mac_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.at(key).is_string()) throw ParseError(where + "." + key + ": expected a string");
  const auto text = obj.at(key).get<std::string>();
  auto mac = parse_mac(text);
  if (!mac) throw ParseError(where + "." + key + ": bad MAC address '" + text + "'");
  return *mac;
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where + ": missing '" + key + "'");
  if (!obj.at(key).is_string()) throw ParseError(where + "." + key + ": expected a string");
  return obj.at(key).get<std::string>();
}

PortNo port_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where + ": missing '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ParseError(where + "." + key + ": expected an integer");
  const auto n = v.get<std::int64_t>();
  if (n <= 0 || n > 0xffff) throw ValidationError("port", where + ": port out of range");
  return static_cast<PortNo>(n);
}

const json& array_field(const json& doc, const char* key) {
  static const json kEmpty = json::array();
  if (!doc.contains(key)) return kEmpty;
  const auto& v = doc.at(key);
  if (!v.is_array()) throw ParseError(std::string(key) + ": expected an array");
  return v;
}

}  // namespace

Address default_address(NodeId id) {
  const std::uint32_t serial = id.index + 1;
  const std::uint32_t code = kind_code(id.kind);
  Address addr;
  addr.ip = Ipv4Addr{(10u << 24) | (code << 16) | (serial & 0xffff)};
  addr.mac = MacAddr{(0x02ULL << 40) | (static_cast<std::uint64_t>(code) << 24) |
                     (serial & 0xffff)};
  return addr;
}

std::vector<NodeId> Topology::datacenters() const {
  std::vector<NodeId> out;
  for (const auto& a : attachments) {
    if (a.host.kind == NodeKind::DataCenter) out.push_back(a.host);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> Topology::clients() const {
  std::vector<NodeId> out;
  for (const auto& a : attachments) {
    if (a.host.kind == NodeKind::Client) out.push_back(a.host);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<NodeId> Topology::find(std::string_view name) const {
  for (const auto& [id, n] : names) {
    if (n == name) return id;
  }
  return std::nullopt;
}

const std::string& Topology::name_of(NodeId id) const {
  auto it = names.find(id);
  if (it == names.end()) throw ValidationError("names", "no name for node " + to_string(id));
  return it->second;
}

const Address& Topology::address_of(NodeId id) const {
  auto it = addresses.find(id);
  if (it == addresses.end()) {
    throw ValidationError("addresses", "no address for node " + to_string(id));
  }
  return it->second;
}

std::optional<NodeId> Topology::node_by_ip(Ipv4Addr ip) const {
  for (const auto& [id, addr] : addresses) {
    if (addr.ip == ip) return id;
  }
  return std::nullopt;
}

const Attachment& Topology::attachment_of(NodeId host) const {
  for (const auto& a : attachments) {
    if (a.host == host) return a;
  }
  throw ValidationError("attachments", to_string(host) + " is not attached");
}

std::vector<PortNo> Topology::ports_of(NodeId sw) const {
  std::vector<PortNo> ports;
  for (const auto& l : links) {
    if (l.a == sw) ports.push_back(l.a_port);
    if (l.b == sw) ports.push_back(l.b_port);
  }
  for (const auto& a : attachments) {
    if (a.switch_id == sw) ports.push_back(a.port);
  }
  std::sort(ports.begin(), ports.end());
  return ports;
}

std::optional<PortPeer> Topology::peer(NodeId sw, PortNo port) const {
  for (const auto& l : links) {
    if (l.a == sw && l.a_port == port) return PortPeer{l.b, l.b_port};
    if (l.b == sw && l.b_port == port) return PortPeer{l.a, l.a_port};
  }
  for (const auto& a : attachments) {
    if (a.switch_id == sw && a.port == port) return PortPeer{a.host, 0};
  }
  return std::nullopt;
}

void Topology::validate() const {
  if (switches.empty()) throw ValidationError("switches", "at least one switch is required");

  std::set<NodeId> switch_set;
  for (const auto& s : switches) {
    if (s.kind != NodeKind::Switch) throw ValidationError("switches", "non-switch node listed");
    if (!switch_set.insert(s).second) throw ValidationError("switches", "duplicate switch");
  }

  std::set<std::string> seen_names;
  for (const auto& [id, name] : names) {
    if (name.empty()) throw ValidationError("names", "empty node name");
    if (!seen_names.insert(name).second) throw ValidationError("names", "duplicate name " + name);
  }

  std::set<std::pair<NodeId, PortNo>> used_ports;
  auto claim = [&](NodeId sw, PortNo port) {
    if (port == 0) throw ValidationError("port", "port 0 on " + to_string(sw));
    if (!used_ports.insert({sw, port}).second) {
      throw ValidationError("port reuse",
                            "port " + std::to_string(port) + " used twice on " + name_of(sw));
    }
  };

  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const auto& l : links) {
    if (!switch_set.count(l.a) || !switch_set.count(l.b)) {
      throw ValidationError("links", "link endpoint is not a declared switch");
    }
    if (l.a == l.b) throw ValidationError("links", "self-loop on " + name_of(l.a));
    if (!pairs.insert(std::minmax(l.a, l.b)).second) {
      throw ValidationError("links", "parallel links between " + name_of(l.a) + " and " +
                                         name_of(l.b));
    }
    claim(l.a, l.a_port);
    claim(l.b, l.b_port);
  }

  std::set<NodeId> hosts;
  for (const auto& a : attachments) {
    if (a.host.kind == NodeKind::Switch) {
      throw ValidationError("attachments", "a switch cannot be attached as a host");
    }
    if (!switch_set.count(a.switch_id)) {
      throw ValidationError("switch", name_of(a.host) + " attaches to an unknown switch");
    }
    if (!hosts.insert(a.host).second) {
      throw ValidationError("attachments", name_of(a.host) + " attached more than once");
    }
    claim(a.switch_id, a.port);
  }

  for (const auto& s : switches) (void)name_of(s);
  for (const auto& h : hosts) (void)name_of(h);
  for (const auto& [id, name] : names) {
    if (!switch_set.count(id) && !hosts.count(id)) {
      throw ValidationError("names", name + " is neither a switch nor an attached host");
    }
  }

  // Connectivity over the switch graph.
  std::map<NodeId, std::vector<NodeId>> adj;
  for (const auto& l : links) {
    adj[l.a].push_back(l.b);
    adj[l.b].push_back(l.a);
  }
  std::set<NodeId> reached{switches.front()};
  std::queue<NodeId> frontier;
  frontier.push(switches.front());
  while (!frontier.empty()) {
    auto cur = frontier.front();
    frontier.pop();
    for (auto next : adj[cur]) {
      if (reached.insert(next).second) frontier.push(next);
    }
  }
  if (reached.size() != switch_set.size()) {
    throw ValidationError("disconnected", "switch graph is not connected");
  }

  std::set<Ipv4Addr> ips{service_ip, controller_ip};
  if (service_ip == controller_ip) {
    throw ValidationError("addresses", "service_ip equals controller_ip");
  }
  std::set<MacAddr> macs;
  auto check_addr = [&](NodeId id) {
    const auto& addr = address_of(id);
    if (!ips.insert(addr.ip).second) {
      throw ValidationError("addresses", "duplicate IP " + to_string(addr.ip));
    }
    if (!macs.insert(addr.mac).second || addr.mac == kBroadcastMac) {
      throw ValidationError("addresses", "duplicate or reserved MAC " + to_string(addr.mac));
    }
  };
  for (const auto& s : switches) check_addr(s);
  for (const auto& h : hosts) check_addr(h);
  if (addresses.size() != switches.size() + hosts.size()) {
    throw ValidationError("addresses", "address given for an unknown node");
  }
}

Topology topology_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("topology must be a JSON object");
  for (const auto& item : doc.items()) {
    static const std::set<std::string> known{"switches", "links",      "datacenters",
                                             "clients",  "service_ip", "controller_ip"};
    if (!known.count(item.key())) throw ValidationError(item.key(), "unknown key");
  }

  Topology topo;
  std::map<std::string, NodeId> by_name;
  auto declare = [&](NodeId id, const std::string& name) {
    if (name.empty()) throw ValidationError("names", "empty node name");
    if (!by_name.emplace(name, id).second) throw ValidationError("names", "duplicate name " + name);
    topo.names[id] = name;
  };

  const auto& sw_list = array_field(doc, "switches");
  for (std::size_t i = 0; i < sw_list.size(); ++i) {
    const auto id = switch_id(static_cast<std::uint32_t>(i));
    const auto& entry = sw_list[i];
    const std::string where = "switches[" + std::to_string(i) + "]";
    Address addr = default_address(id);
    if (entry.is_string()) {
      declare(id, entry.get<std::string>());
    } else if (entry.is_object()) {
      declare(id, string_field(entry, "name", where));
      if (entry.contains("ip")) addr.ip = ip_field(entry, "ip", where);
      if (entry.contains("mac")) addr.mac = mac_field(entry, "mac", where);
    } else {
      throw ParseError(where + ": expected a name or an object");
    }
    topo.switches.push_back(id);
    topo.addresses[id] = addr;
  }

  auto switch_named = [&](const std::string& name, const std::string& field) {
    auto it = by_name.find(name);
    if (it == by_name.end() || it->second.kind != NodeKind::Switch) {
      throw ValidationError(field, "unknown switch '" + name + "'");
    }
    return it->second;
  };

  const auto& link_list = array_field(doc, "links");
  for (std::size_t i = 0; i < link_list.size(); ++i) {
    const auto& entry = link_list[i];
    const std::string where = "links[" + std::to_string(i) + "]";
    if (!entry.is_object()) throw ParseError(where + ": expected an object");
    SwitchLink link;
    link.a = switch_named(string_field(entry, "a", where), "links");
    link.a_port = port_field(entry, "a_port", where);
    link.b = switch_named(string_field(entry, "b", where), "links");
    link.b_port = port_field(entry, "b_port", where);
    topo.links.push_back(link);
  }

  auto read_hosts = [&](const char* key, NodeKind kind) {
    const auto& list = array_field(doc, key);
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& entry = list[i];
      const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
      if (!entry.is_object()) throw ParseError(where + ": expected an object");
      const NodeId id{kind, static_cast<std::uint32_t>(i)};
      declare(id, string_field(entry, "name", where));
      Attachment att;
      att.host = id;
      att.switch_id = switch_named(string_field(entry, "switch", where), "switch");
      att.port = port_field(entry, "port", where);
      topo.attachments.push_back(att);
      Address addr = default_address(id);
      if (entry.contains("ip")) addr.ip = ip_field(entry, "ip", where);
      if (entry.contains("mac")) addr.mac = mac_field(entry, "mac", where);
      topo.addresses[id] = addr;
    }
  };
  read_hosts("datacenters", NodeKind::DataCenter);
  read_hosts("clients", NodeKind::Client);

  if (doc.contains("service_ip")) topo.service_ip = ip_field(doc, "service_ip", "topology");
  if (doc.contains("controller_ip")) {
    topo.controller_ip = ip_field(doc, "controller_ip", "topology");
  }

  topo.validate();
  return topo;
}

json topology_to_json(const Topology& topo) {
  json doc;
  doc["switches"] = json::array();
  for (const auto& s : topo.switches) {
    const auto& addr = topo.address_of(s);
    doc["switches"].push_back(
        {{"name", topo.name_of(s)}, {"ip", to_string(addr.ip)}, {"mac", to_string(addr.mac)}});
  }
  doc["links"] = json::array();
  for (const auto& l : topo.links) {
    doc["links"].push_back({{"a", topo.name_of(l.a)},
                            {"a_port", l.a_port},
                            {"b", topo.name_of(l.b)},
                            {"b_port", l.b_port}});
  }
  doc["datacenters"] = json::array();
  doc["clients"] = json::array();
  // Hosts are written in index order so indices survive a round trip.
  std::vector<Attachment> sorted = topo.attachments;
  std::sort(sorted.begin(), sorted.end(),
            [](const Attachment& x, const Attachment& y) { return x.host < y.host; });
  for (const auto& a : sorted) {
    const auto& addr = topo.address_of(a.host);
    json entry{{"name", topo.name_of(a.host)},
               {"switch", topo.name_of(a.switch_id)},
               {"port", a.port},
               {"ip", to_string(addr.ip)},
               {"mac", to_string(addr.mac)}};
    doc[a.host.kind == NodeKind::DataCenter ? "datacenters" : "clients"].push_back(entry);
  }
  doc["service_ip"] = to_string(topo.service_ip);
  doc["controller_ip"] = to_string(topo.controller_ip);
  return doc;
}

Topology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open topology file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return topology_from_json(doc);
}

}  // namespace grasp
