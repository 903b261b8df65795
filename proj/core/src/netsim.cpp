#include "grasp/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <unordered_map>
#include <variant>

#include "grasp/error.hpp"
#include "grasp/flow_table.hpp"
#include "grasp/trace.hpp"

namespace grasp::sim {

AgentScript profile_agent(NodeId dc, energy::EnergyProfile profile, SimTime register_at,
                          std::size_t hour_offset) {
  AgentScript script;
  script.dc = dc;
  script.register_at = register_at;
  script.report_values = [profile = std::move(profile), hour_offset](std::size_t hour) {
    return std::map<std::string, double>{
        {std::string(kGreenEnergyParam), profile[(hour_offset + hour) % profile.size()]}};
  };
  return script;
}

ClientScript rate_workload(const Topology& topo, std::size_t jobs_per_hour, std::size_t hours,
                           std::uint32_t packets, SimTime packet_gap) {
  const auto clients = topo.clients();
  if (clients.empty() && jobs_per_hour > 0) throw ScriptError("topology has no clients");
  ClientScript script;
  script.flows.reserve(jobs_per_hour * hours);
  const double spacing = jobs_per_hour > 0 ? kSecondsPerHour / static_cast<double>(jobs_per_hour)
                                           : kSecondsPerHour;
  std::uint64_t next_id = 0;
  for (std::size_t h = 0; h < hours; ++h) {
    for (std::size_t j = 0; j < jobs_per_hour; ++j) {
      ClientFlow f;
      f.flow_id = next_id;
      f.client = clients[next_id % clients.size()];
      f.open_at = static_cast<double>(h) * kSecondsPerHour + (static_cast<double>(j) + 0.5) * spacing;
      f.packets = packets;
      f.packet_gap = packet_gap;
      script.flows.push_back(f);
      ++next_id;
    }
  }
  return script;
}

namespace {

struct SwitchConnectEv {
  NodeId sw;
};
struct AgentRegisterEv {
  std::size_t agent;
};
struct AgentReportEv {
  std::size_t agent;
};
struct FlowOpenEv {
  std::size_t flow;
};
struct DataPacketEv {
  std::size_t flow;
  std::uint32_t seq;
};
struct TickEv {};
struct DeadlineEv {
  NodeId sw;
};
struct ArrivalEv {
  NodeId node;
  PortNo port;
  Packet packet;
};
struct SnapshotEv {};

using EventBody = std::variant<SwitchConnectEv, AgentRegisterEv, AgentReportEv, FlowOpenEv,
                               DataPacketEv, TickEv, DeadlineEv, ArrivalEv, SnapshotEv>;

struct Event {
  SimTime time;
  std::uint64_t seq;
  EventBody body;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

struct AgentState {
  bool registered = false;
  std::uint32_t dc_id = 0;
  Token passcode{};
  std::vector<std::string> parameters;
  double report_period = 0.0;
};

class Simulator {
 public:
  Simulator(const Topology& topo, const ControllerConfig& config,
            std::span<const AgentScript> agents, const ClientScript& clients,
            const SimOptions& options)
      : topo_(topo),
        config_(config),
        agents_(agents),
        clients_(clients),
        options_(options),
        trace_(true),
        controller_(config, options.seed, &trace_) {
    validate_scripts();
    agent_state_.resize(agents_.size());
    dc_nodes_ = topo_.datacenters();
    for (std::size_t i = 0; i < dc_nodes_.size(); ++i) dc_slot_[dc_nodes_[i]] = i;
    report_.dc_jobs.assign(dc_nodes_.size(), 0);
    for (const auto& f : clients_.flows) {
      flow_slot_[f.flow_id] = report_.flows.size();
      report_.flows.push_back(FlowOutcome{f.flow_id, f.client, f.open_at, {}, {}, {}, false});
    }
  }

  SimReport run() {
    for (const auto& sw : topo_.switches) schedule(0.0, SwitchConnectEv{sw});
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      schedule(agents_[i].register_at, AgentRegisterEv{i});
    }
    for (std::size_t i = 0; i < clients_.flows.size(); ++i) {
      schedule(clients_.flows[i].open_at, FlowOpenEv{i});
    }
    for (SimTime t : options_.snapshot_times) schedule(t, SnapshotEv{});
    if (options_.tick > 0.0) schedule(options_.tick, TickEv{});

    while (!queue_.empty()) {
      Event ev = queue_.top();
      queue_.pop();
      if (ev.time >= options_.horizon) break;
      now_ = ev.time;
      ++report_.events_processed;
      std::visit([this](auto& body) { handle(body); }, ev.body);
    }

    report_.trace = trace_.lines();
    report_.packet_in_count = controller_.packet_in_count();
    report_.tally = controller_.packet_in_tally();
    report_.auth_failures = controller_.auth_failures();
    report_.adjacency = controller_.adjacency();
    report_.registered = controller_.datacenters();
    for (const auto& rec : report_.registered) {
      if (auto node = topo_.node_by_ip(rec.ip)) report_.dc_nodes[rec.id.index] = *node;
    }
    return std::move(report_);
  }

 private:
  void validate_scripts() const {
    std::set<NodeId> seen_dc;
    const auto dcs = topo_.datacenters();
    for (const auto& a : agents_) {
      if (std::find(dcs.begin(), dcs.end(), a.dc) == dcs.end()) {
        throw ScriptError("agent script references unknown data center " + grasp::to_string(a.dc));
      }
      if (!seen_dc.insert(a.dc).second) {
        throw ScriptError("two agent scripts for " + topo_.name_of(a.dc));
      }
      if (!a.report_values) throw ScriptError("agent for " + topo_.name_of(a.dc) + " has no report function");
      if (!(a.register_at >= 0.0)) throw ScriptError("negative register_at");
    }
    const auto clients = topo_.clients();
    std::set<std::uint64_t> ids;
    for (const auto& f : clients_.flows) {
      if (std::find(clients.begin(), clients.end(), f.client) == clients.end()) {
        throw ScriptError("flow " + std::to_string(f.flow_id) + " references unknown client " +
                          grasp::to_string(f.client));
      }
      if (!ids.insert(f.flow_id).second) {
        throw ScriptError("duplicate flow id " + std::to_string(f.flow_id));
      }
      if (f.packets == 0) throw ScriptError("flow " + std::to_string(f.flow_id) + " has no packets");
      if (!(f.open_at >= 0.0)) throw ScriptError("negative flow open time");
    }
  }

  void schedule(SimTime t, EventBody body) { queue_.push(Event{t, next_seq_++, std::move(body)}); }

  void log(const TraceLine& line) { trace_.add(line); }

  // --- endpoints -------------------------------------------------------------

  void host_send(NodeId host, Packet packet) {
    const auto& att = topo_.attachment_of(host);
    schedule(now_, ArrivalEv{att.switch_id, att.port, std::move(packet)});
  }

  void handle(SwitchConnectEv& ev) {
    ctrl::SwitchFeatures features{ev.sw, topo_.address_of(ev.sw).mac, topo_.ports_of(ev.sw)};
    apply(controller_.on_switch_connect(features, now_));
  }

  void handle(AgentRegisterEv& ev) {
    const auto dc = agents_[ev.agent].dc;
    const auto& addr = topo_.address_of(dc);
    Packet p;
    p.header = {addr.mac, kBroadcastMac, addr.ip, topo_.controller_ip};
    p.payload = RegisterMsg{};
    host_send(dc, std::move(p));
  }

  void handle(AgentReportEv& ev) {
    const auto& script = agents_[ev.agent];
    const auto& st = agent_state_[ev.agent];
    const auto hour = static_cast<std::size_t>(std::floor(now_ / kSecondsPerHour));
    const auto produced = script.report_values(hour);

    ReportMsg msg;
    for (const auto& param : st.parameters) {
      auto it = produced.find(param);
      msg.values[param] = it == produced.end() ? 0.0 : it->second;
    }
    msg.passcode = st.passcode;
    if (script.corrupt_passcode) {
      for (auto& b : msg.passcode) b = static_cast<std::uint8_t>(~b);
    }
    const auto& addr = topo_.address_of(script.dc);
    Packet p;
    p.header = {addr.mac, MacAddr{0}, addr.ip, topo_.controller_ip};
    p.payload = std::move(msg);
    host_send(script.dc, std::move(p));

    schedule(now_ + st.report_period, AgentReportEv{ev.agent});
  }

  void send_flow_packet(std::size_t flow, std::uint32_t seq) {
    const auto& f = clients_.flows[flow];
    const auto& addr = topo_.address_of(f.client);
    const auto& att = topo_.attachment_of(f.client);
    Packet p;
    p.header = {addr.mac, topo_.address_of(att.switch_id).mac, addr.ip, topo_.service_ip};
    p.payload = ClientRequest{f.flow_id, seq};
    host_send(f.client, std::move(p));
  }

  void handle(FlowOpenEv& ev) {
    const auto& f = clients_.flows[ev.flow];
    log(TraceLine(now_).word("open").kv("flow", f.flow_id).kv("client", topo_.name_of(f.client)));
    send_flow_packet(ev.flow, 0);
    for (std::uint32_t s = 1; s < f.packets; ++s) {
      schedule(f.open_at + f.packet_gap * s, DataPacketEv{ev.flow, s});
    }
  }

  void handle(DataPacketEv& ev) { send_flow_packet(ev.flow, ev.seq); }

  void handle(TickEv&) {
    for (const auto& sw : topo_.switches) log_expired(sw, tables_[sw].expire(now_));
    schedule(now_ + options_.tick, TickEv{});
  }

  // Sweeps a switch at the moment one of its rules goes idle, so expiry is exact rather
  // than rounded up to the next tick.
  void handle(DeadlineEv& ev) { log_expired(ev.sw, tables_[ev.sw].expire(now_)); }

  void handle(SnapshotEv&) {
    std::string dump;
    for (const auto& sw : topo_.switches) {
      log_expired(sw, tables_[sw].expire(now_));
      dump += "# " + topo_.name_of(sw) + "\n" + tables_[sw].dump();
    }
    report_.snapshots[now_] = std::move(dump);
  }

  void handle(ArrivalEv& ev) {
    switch (ev.node.kind) {
      case NodeKind::Switch:
        switch_receive(ev.node, ev.port, std::move(ev.packet));
        break;
      case NodeKind::DataCenter:
        datacenter_receive(ev.node, std::move(ev.packet));
        break;
      case NodeKind::Client:
        client_receive(ev.node, ev.packet);
        break;
    }
  }

  void datacenter_receive(NodeId dc, Packet packet) {
    if (const auto* reply = std::get_if<RegisterReply>(&packet.payload)) {
      auto idx = agent_index(dc);
      if (!idx) return;  // no agent runs there
      auto& st = agent_state_[*idx];
      const bool first = !st.registered;
      st.registered = true;
      st.dc_id = reply->dc_id;
      st.passcode = reply->passcode;
      st.parameters = reply->parameters;
      st.report_period = reply->report_period;
      if (first) schedule(now_, AgentReportEv{*idx});
      return;
    }
    if (const auto* req = std::get_if<ClientRequest>(&packet.payload)) {
      log(TraceLine(now_)
              .word("deliver")
              .kv("flow", req->flow_id)
              .kv("dc", topo_.name_of(dc))
              .kv("seq", req->seq));
      if (req->seq == 0) {
        auto slot = flow_slot_.find(req->flow_id);
        if (slot != flow_slot_.end()) {
          auto& outcome = report_.flows[slot->second];
          if (!outcome.delivered_to) {
            outcome.delivered_to = dc;
            ++report_.dc_jobs[dc_slot_.at(dc)];
          }
        }
        const auto& addr = topo_.address_of(dc);
        Packet resp;
        resp.header = {addr.mac, MacAddr{0}, addr.ip, packet.header.ip_src};
        resp.payload = ClientResponse{req->flow_id};
        host_send(dc, std::move(resp));
      }
    }
  }

  void client_receive(NodeId client, const Packet& packet) {
    if (const auto* resp = std::get_if<ClientResponse>(&packet.payload)) {
      log(TraceLine(now_).word("respond").kv("flow", resp->flow_id).kv("client",
                                                                       topo_.name_of(client)));
      auto slot = flow_slot_.find(resp->flow_id);
      if (slot != flow_slot_.end()) report_.flows[slot->second].responded = true;
    }
  }

  // --- data plane ------------------------------------------------------------

  void switch_receive(NodeId sw, PortNo in_port, Packet packet) {
    std::vector<FlowRule> expired;
    const FlowRule* rule = tables_[sw].lookup(packet.header, now_, &expired);
    log_expired(sw, std::move(expired));
    if (rule == nullptr) {
      log(TraceLine(now_).word("drop").kv("sw", grasp::to_string(sw)).kv("reason", "no_rule"));
      note_flow_drop(packet, "no_rule");
      return;
    }
    if (std::holds_alternative<SendToController>(rule->actions.back())) {
      auto resp = controller_.on_packet_in(ctrl::PacketIn{sw, in_port, packet}, now_);
      if (const auto* req = std::get_if<ClientRequest>(&packet.payload)) {
        if (resp.dropped) {
          if (req->seq == 0) {
            log(TraceLine(now_).word("drop").kv("flow", req->flow_id).kv(
                "reason", ctrl::to_string(*resp.dropped)));
          }
          note_flow_drop(packet, std::string(ctrl::to_string(*resp.dropped)));
        } else if (resp.decision && req->seq == 0) {
          auto slot = flow_slot_.find(req->flow_id);
          if (slot != flow_slot_.end() && !report_.flows[slot->second].decided_dc) {
            report_.flows[slot->second].decided_dc =
                static_cast<std::uint32_t>(resp.decision->dc_index);
          }
        }
      }
      apply(std::move(resp));
      return;
    }
    if (rule->idle_timeout > 0.0) {
      schedule(rule->deadline(), DeadlineEv{sw});
      if (options_.trace_rules) {
        log(TraceLine(now_).word("hit").kv("sw", grasp::to_string(sw)).kv("rule", rule->id));
      }
    }
    const auto terminal = apply_actions(rule->actions, packet.header);
    transmit(sw, std::get<Output>(terminal).port, std::move(packet));
  }

  void transmit(NodeId sw, PortNo port, Packet packet) {
    auto peer = topo_.peer(sw, port);
    if (!peer) {
      log(TraceLine(now_).word("drop").kv("sw", grasp::to_string(sw)).kv("reason", "dead_port"));
      return;
    }
    schedule(now_, ArrivalEv{peer->node, peer->port, std::move(packet)});
  }

  void apply(ctrl::ControllerResponse resp) {
    for (const auto& fm : resp.flow_mods) {
      const auto id = next_rule_id_++;
      const auto replaced = tables_[fm.switch_id].install(fm, now_, id);
      if (fm.idle_timeout > 0.0) schedule(now_ + fm.idle_timeout, DeadlineEv{fm.switch_id});
      if (options_.trace_rules) {
        TraceLine line(now_);
        line.word("install")
            .kv("sw", grasp::to_string(fm.switch_id))
            .kv("rule", id)
            .kv("prio", fm.priority)
            .kv("match", to_string(fm.match))
            .kv("timeout", fm.idle_timeout);
        if (replaced) line.kv("replaces", *replaced);
        log(line);
      }
    }
    for (auto& out : resp.packet_outs) transmit(out.switch_id, out.out_port, std::move(out.packet));
  }

  void log_expired(NodeId sw, std::vector<FlowRule> expired) {
    for (const auto& r : expired) {
      ++report_.rule_expirations;
      if (options_.trace_rules) {
        log(TraceLine(now_)
                .word("expire")
                .kv("sw", grasp::to_string(sw))
                .kv("rule", r.id)
                .kv("last_hit", r.last_hit)
                .kv("timeout", r.idle_timeout));
      }
    }
  }

  void note_flow_drop(const Packet& packet, std::string reason) {
    const auto* req = std::get_if<ClientRequest>(&packet.payload);
    if (req == nullptr || req->seq != 0) return;
    auto slot = flow_slot_.find(req->flow_id);
    if (slot != flow_slot_.end() && report_.flows[slot->second].drop_reason.empty()) {
      report_.flows[slot->second].drop_reason = std::move(reason);
    }
  }

  std::optional<std::size_t> agent_index(NodeId dc) const {
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      if (agents_[i].dc == dc) return i;
    }
    return std::nullopt;
  }

  const Topology& topo_;
  const ControllerConfig& config_;
  std::span<const AgentScript> agents_;
  const ClientScript& clients_;
  SimOptions options_;

  Trace trace_;
  ctrl::Controller controller_;
  std::map<NodeId, FlowTable> tables_;
  std::vector<AgentState> agent_state_;
  std::vector<NodeId> dc_nodes_;
  std::map<NodeId, std::size_t> dc_slot_;
  std::unordered_map<std::uint64_t, std::size_t> flow_slot_;

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_rule_id_ = 1;
  SimTime now_ = 0.0;
  SimReport report_;
};

}  // namespace

SimReport run_scenario(const Topology& topology, const ControllerConfig& config,
                       std::span<const AgentScript> agents, const ClientScript& clients,
                       const SimOptions& options) {
  topology.validate();
  config.validate();
  if (!(options.horizon >= 0.0)) throw ScriptError("negative horizon");
  Simulator sim(topology, config, agents, clients, options);
  return sim.run();
}

std::vector<std::vector<std::uint64_t>> hourly_dc_loads(const SimReport& report,
                                                        const Topology& topology,
                                                        std::size_t hours) {
  const auto dcs = topology.datacenters();
  std::vector<std::vector<std::uint64_t>> loads(hours, std::vector<std::uint64_t>(dcs.size(), 0));
  for (const auto& f : report.flows) {
    if (!f.delivered_to) continue;
    const auto hour = static_cast<std::size_t>(std::floor(f.opened_at / kSecondsPerHour));
    if (hour >= hours) continue;
    const auto pos = std::find(dcs.begin(), dcs.end(), *f.delivered_to) - dcs.begin();
    ++loads[hour][static_cast<std::size_t>(pos)];
  }
  return loads;
}

}  // namespace grasp::sim
