#include "grasp/controller.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "grasp/error.hpp"

namespace grasp::ctrl {

std::string_view to_string(PacketInKind kind) {
  switch (kind) {
    case PacketInKind::Register:
      return "register";
    case PacketInKind::Discover:
      return "discover";
    case PacketInKind::Report:
      return "report";
    case PacketInKind::ClientRequest:
      return "client_request";
    case PacketInKind::Other:
      return "other";
  }
  return "?";
}

PacketInKind classify(const Packet& packet) {
  if (std::holds_alternative<RegisterMsg>(packet.payload)) return PacketInKind::Register;
  if (std::holds_alternative<DiscoverMsg>(packet.payload)) return PacketInKind::Discover;
  if (std::holds_alternative<ReportMsg>(packet.payload)) return PacketInKind::Report;
  if (std::holds_alternative<ClientRequest>(packet.payload)) return PacketInKind::ClientRequest;
  return PacketInKind::Other;
}

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::ForeignToken:
      return "foreign_token";
    case DropReason::UnregisteredReporter:
      return "unregistered_reporter";
    case DropReason::AuthFailure:
      return "auth_failure";
    case DropReason::UnknownParameter:
      return "unknown_parameter";
    case DropReason::NoDatacenter:
      return "no_datacenter";
    case DropReason::NoPath:
      return "no_path";
    case DropReason::Unhandled:
      return "unhandled";
  }
  return "?";
}

Controller::Controller(ControllerConfig config, std::uint64_t seed, Trace* trace)
    : config_(std::move(config)),
      tokens_(seed),
      trace_(trace),
      sched_state_({}, config_.job_energy_k) {
  config_.validate();
  scheduler_ = sched::make_scheduler(config_.scheduler, config_.weights);
  discovery_token_ = tokens_.next();
}

void Controller::emit(const TraceLine& line) {
  if (trace_ != nullptr) trace_->add(line);
}

void Controller::advance_clock(SimTime now) {
  // Jobs finish within their reporting period; the job count restarts each period.
  const auto epoch = static_cast<std::int64_t>(std::floor(now / config_.report_period));
  if (epoch > epoch_) {
    epoch_ = epoch;
    sched_state_.clear_jobs();
  }
}

ControllerResponse Controller::on_switch_connect(const SwitchFeatures& features, SimTime now) {
  if (features.id.kind != NodeKind::Switch) {
    throw UnknownSwitch(grasp::to_string(features.id) + " is not a switch");
  }
  if (connected_.count(features.id)) {
    throw AlreadyConnected(grasp::to_string(features.id) + " is already connected");
  }
  advance_clock(now);
  connected_.emplace(features.id, features);

  ControllerResponse resp;
  resp.flow_mods.push_back(table_miss_flow(features.id));
  for (PortNo port : features.ports) {
    Packet probe;
    probe.header.eth_src = features.mac;
    probe.header.eth_dst = kBroadcastMac;
    probe.payload = DiscoverMsg{discovery_token_, features.id};
    resp.packet_outs.push_back({features.id, port, std::move(probe)});
  }
  emit(TraceLine(now)
           .kv("ev", "switch_connect")
           .kv("sw", grasp::to_string(features.id))
           .kv("ports", features.ports.size())
           .kv("flowmods", resp.flow_mods.size())
           .kv("floods", resp.packet_outs.size()));
  return resp;
}

ControllerResponse Controller::on_packet_in(const PacketIn& pin, SimTime now) {
  if (!connected_.count(pin.switch_id)) {
    throw UnknownSwitch("packet-in from unconnected switch " + grasp::to_string(pin.switch_id));
  }
  advance_clock(now);

  const auto kind = classify(pin.packet);
  TraceLine line(now);
  line.kv("ev", "packet_in")
      .kv("sw", grasp::to_string(pin.switch_id))
      .kv("port", pin.in_port)
      .kv("kind", to_string(kind));

  ControllerResponse resp;
  switch (kind) {
    case PacketInKind::Register:
      ++tally_.registrations;
      resp = handle_register(pin, line);
      break;
    case PacketInKind::Discover:
      ++tally_.discovery_receipts;
      resp = handle_discover(pin, std::get<DiscoverMsg>(pin.packet.payload), line);
      break;
    case PacketInKind::Report:
      ++tally_.reports;
      resp = handle_report(pin, std::get<ReportMsg>(pin.packet.payload), line);
      break;
    case PacketInKind::ClientRequest:
      ++tally_.client_requests;
      resp = handle_client(pin, line);
      break;
    case PacketInKind::Other:
      ++tally_.other;
      resp.dropped = DropReason::Unhandled;
      break;
  }
  if (resp.dropped) line.kv("result", "drop").kv("reason", to_string(*resp.dropped));
  emit(line);
  return resp;
}

ControllerResponse Controller::handle_register(const PacketIn& pin, TraceLine& line) {
  const auto& hdr = pin.packet.header;
  line.kv("ip", grasp::to_string(hdr.ip_src));

  const DataCenterRecord* record = find_datacenter(hdr.ip_src);
  if (record != nullptr) {
    line.kv("dc", record->id.index).kv("result", "reregister");
  } else {
    DataCenterRecord rec;
    rec.id = datacenter_id(static_cast<std::uint32_t>(dcs_.size()));
    rec.ip = hdr.ip_src;
    rec.mac = hdr.eth_src;
    rec.switch_id = pin.switch_id;
    rec.port = pin.in_port;
    rec.passcode = tokens_.next();
    dc_by_ip_.emplace(rec.ip, rec.id.index);
    dcs_.push_back(rec);
    const auto index = sched_state_.add_datacenter(0.0);
    (void)index;  // equal to rec.id.index by construction
    record = &dcs_.back();
    line.kv("dc", record->id.index).kv("result", "ok");
  }

  Packet reply;
  reply.header.eth_src = MacAddr{0};
  reply.header.eth_dst = record->mac;
  reply.header.ip_dst = record->ip;
  reply.payload =
      RegisterReply{record->id.index, record->passcode, config_.parameters, config_.report_period};
  ControllerResponse resp;
  resp.packet_outs.push_back({pin.switch_id, pin.in_port, std::move(reply)});
  return resp;
}

ControllerResponse Controller::handle_discover(const PacketIn& pin, const DiscoverMsg& msg,
                                               TraceLine& line) {
  line.kv("from", grasp::to_string(msg.origin));
  ControllerResponse resp;
  if (msg.token != discovery_token_) {
    resp.dropped = DropReason::ForeignToken;
    return resp;
  }
  if (msg.origin == pin.switch_id || msg.origin.kind != NodeKind::Switch) {
    resp.dropped = DropReason::Unhandled;
    return resp;
  }
  AdjacencyEntry entry{pin.switch_id, msg.origin, pin.in_port, pin.packet.header.eth_src};
  adjacency_[{pin.switch_id, msg.origin}] = entry;
  line.kv("result", "ok");
  return resp;
}

ControllerResponse Controller::handle_report(const PacketIn& pin, const ReportMsg& msg,
                                             TraceLine& line) {
  ControllerResponse resp;
  const auto* record = find_datacenter(pin.packet.header.ip_src);
  if (record == nullptr) {
    line.kv("ip", grasp::to_string(pin.packet.header.ip_src));
    resp.dropped = DropReason::UnregisteredReporter;
    return resp;
  }
  line.kv("dc", record->id.index);
  if (msg.passcode != record->passcode) {
    ++auth_failures_;
    resp.dropped = DropReason::AuthFailure;
    return resp;
  }
  for (const auto& [name, value] : msg.values) {
    if (std::find(config_.parameters.begin(), config_.parameters.end(), name) ==
        config_.parameters.end()) {
      resp.dropped = DropReason::UnknownParameter;
      return resp;
    }
    if (name == kGreenEnergyParam && (!std::isfinite(value) || value < 0.0)) {
      resp.dropped = DropReason::UnknownParameter;
      return resp;
    }
  }
  auto& stored = latest_reports_[record->id.index];
  for (const auto& [name, value] : msg.values) {
    stored[name] = value;
    line.kv(name, value);
  }
  if (auto it = msg.values.find(std::string(kGreenEnergyParam)); it != msg.values.end()) {
    sched_state_.set_energy(record->id.index, it->second);
  }
  line.kv("result", "ok");
  return resp;
}

ControllerResponse Controller::handle_client(const PacketIn& pin, TraceLine& line) {
  const auto& hdr = pin.packet.header;
  const auto& req = std::get<ClientRequest>(pin.packet.payload);
  line.kv("src", grasp::to_string(hdr.ip_src)).kv("flow", req.flow_id);

  ControllerResponse resp;
  if (dcs_.empty()) {
    resp.dropped = DropReason::NoDatacenter;
    return resp;
  }

  // Decide on a copy so an unroutable choice leaves the job counts untouched.
  auto trial = sched_state_;
  auto decision = scheduler_->decide(trial);
  const auto& dc = dcs_.at(decision.dc_index);
  std::vector<NodeId> path;
  try {
    path = compute_path(pin.switch_id, dc.switch_id);
  } catch (const NoPath&) {
    line.kv("dc", dc.id.index);
    resp.dropped = DropReason::NoPath;
    return resp;
  }
  sched_state_ = std::move(trial);

  resp.flow_mods = install_path(hdr.ip_src, dc, pin.switch_id, pin.in_port);

  // The first forward rule carries exactly the rewrite and egress this packet needs.
  Packet forwarded = pin.packet;
  const auto terminal = apply_actions(resp.flow_mods.front().actions, forwarded.header);
  resp.packet_outs.push_back({pin.switch_id, std::get<Output>(terminal).port, std::move(forwarded)});
  resp.decision = std::move(decision);

  std::string path_text;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) path_text.push_back(',');
    path_text += grasp::to_string(path[i]);
  }
  line.kv("dc", dc.id.index).kv("path", path_text).kv("flowmods", resp.flow_mods.size());
  return resp;
}

const DataCenterRecord* Controller::find_datacenter(Ipv4Addr ip) const {
  auto it = dc_by_ip_.find(ip);
  return it == dc_by_ip_.end() ? nullptr : &dcs_[it->second];
}

std::vector<AdjacencyEntry> Controller::adjacency() const {
  std::vector<AdjacencyEntry> out;
  out.reserve(adjacency_.size());
  for (const auto& [key, entry] : adjacency_) out.push_back(entry);
  return out;
}

std::vector<NodeId> Controller::compute_path(NodeId from, NodeId to) const {
  if (from == to) return {from};

  // Hop distance to `to` over reversed adjacency edges.
  std::map<NodeId, std::size_t> dist{{to, 0}};
  std::queue<NodeId> frontier;
  frontier.push(to);
  while (!frontier.empty()) {
    const auto cur = frontier.front();
    frontier.pop();
    for (const auto& [key, entry] : adjacency_) {
      if (entry.to_switch == cur && !dist.count(entry.from_switch)) {
        dist[entry.from_switch] = dist[cur] + 1;
        frontier.push(entry.from_switch);
      }
    }
  }
  if (!dist.count(from)) {
    throw NoPath("no discovered path from " + grasp::to_string(from) + " to " +
                 grasp::to_string(to));
  }

  std::vector<NodeId> path{from};
  auto cur = from;
  while (cur != to) {
    // adjacency_ is ordered by (from, to), so the first qualifying entry has the smallest index.
    std::optional<NodeId> next;
    for (auto it = adjacency_.lower_bound({cur, NodeId{}}); it != adjacency_.end() &&
                                                           it->first.first == cur;
         ++it) {
      auto d = dist.find(it->second.to_switch);
      if (d != dist.end() && d->second + 1 == dist.at(cur)) {
        next = it->second.to_switch;
        break;
      }
    }
    cur = *next;
    path.push_back(cur);
  }
  return path;
}

PortNo Controller::egress_toward(NodeId from, NodeId to) const {
  auto it = adjacency_.find({from, to});
  if (it == adjacency_.end()) {
    throw NoPath("no adjacency " + grasp::to_string(from) + " -> " + grasp::to_string(to));
  }
  return it->second.egress_port;
}

std::vector<FlowMod> Controller::install_path(Ipv4Addr client_ip, const DataCenterRecord& dc,
                                              NodeId ingress_switch, PortNo ingress_port) const {
  const auto path = compute_path(ingress_switch, dc.switch_id);
  std::vector<FlowMod> mods;
  mods.reserve(path.size() * 2);

  for (std::size_t i = 0; i < path.size(); ++i) {
    FlowMod fwd;
    fwd.switch_id = path[i];
    fwd.match.src_ip = client_ip;
    fwd.priority = kServicePriority;
    fwd.idle_timeout = config_.flow_idle_timeout;
    if (i == 0) {
      fwd.actions.push_back(RewriteEthDst{dc.mac});
      fwd.actions.push_back(RewriteIpDst{dc.ip});
    }
    const PortNo out = i + 1 < path.size() ? egress_toward(path[i], path[i + 1]) : dc.port;
    fwd.actions.push_back(Output{out});
    mods.push_back(std::move(fwd));
  }

  for (std::size_t i = 0; i < path.size(); ++i) {
    FlowMod rev;
    rev.switch_id = path[i];
    rev.match.src_ip = dc.ip;
    rev.match.dst_ip = client_ip;
    rev.priority = kServicePriority;
    rev.idle_timeout = config_.flow_idle_timeout;
    const PortNo out = i == 0 ? ingress_port : egress_toward(path[i], path[i - 1]);
    rev.actions.push_back(Output{out});
    mods.push_back(std::move(rev));
  }
  return mods;
}

}  // namespace grasp::ctrl
