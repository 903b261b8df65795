#pragma once

// Deterministic discrete-event emulation of the data plane and its endpoints
// ("protocol mode"): switches with idle-timeout flow tables, data-center agents that
// register and report, and clients opening job flows against the service address.
//
// Links are lossless and zero-latency. Events are processed in (time, insertion)
// order, so equal inputs give byte-identical traces.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grasp/config.hpp"
#include "grasp/controller.hpp"
#include "grasp/energy.hpp"
#include "grasp/model.hpp"
#include "grasp/topology.hpp"

namespace grasp::sim {

enum class EventKind {
  SwitchConnect,
  AgentRegister,
  AgentReport,
  ClientFlowOpen,
  ClientDataPacket,
  TimerTick,
  PacketArrival,
  Snapshot,
};

using ReportFn = std::function<std::map<std::string, double>(std::size_t hour)>;

/// Behaviour of the agent inside one data center.
struct AgentScript {
  NodeId dc;
  SimTime register_at = 0.0;
  /// Values to report during a given hour of the year.
  ReportFn report_values;
  /// Sends a wrong passcode with every report.
  bool corrupt_passcode = false;
};

/// Agent reporting `profile[hour_offset + hour]` as green energy and 0 for other parameters.
AgentScript profile_agent(NodeId dc, energy::EnergyProfile profile, SimTime register_at = 0.0,
                          std::size_t hour_offset = 0);

/// One job: an opening packet followed by `packets - 1` data packets `packet_gap` apart.
struct ClientFlow {
  std::uint64_t flow_id = 0;
  NodeId client;
  SimTime open_at = 0.0;
  std::uint32_t packets = 1;
  SimTime packet_gap = 0.5;
};

struct ClientScript {
  std::vector<ClientFlow> flows;
};

/// `jobs_per_hour` flows every hour, evenly spaced inside the hour and dealt to the
/// topology's clients in turn. Flow ids count up from 0.
ClientScript rate_workload(const Topology& topo, std::size_t jobs_per_hour, std::size_t hours,
                           std::uint32_t packets = 1, SimTime packet_gap = 0.5);

struct SimOptions {
  std::uint64_t seed = 0;
  SimTime horizon = kSecondsPerHour;
  /// Expiry sweep period.
  SimTime tick = 1.0;
  std::vector<SimTime> snapshot_times;
  /// Log rule install/hit/expire lines.
  bool trace_rules = true;
};

struct FlowOutcome {
  std::uint64_t flow_id = 0;
  NodeId client;
  SimTime opened_at = 0.0;
  /// Controller data-center id chosen for the opening packet.
  std::optional<std::uint32_t> decided_dc;
  /// Topology node that received the opening packet.
  std::optional<NodeId> delivered_to;
  std::string drop_reason;
  bool responded = false;
};

struct SimReport {
  std::vector<std::string> trace;
  /// Jobs delivered per data center, indexed like Topology::datacenters().
  std::vector<std::uint64_t> dc_jobs;
  std::uint64_t packet_in_count = 0;
  ctrl::PacketInTally tally;
  std::uint64_t auth_failures = 0;
  std::uint64_t rule_expirations = 0;
  std::vector<FlowOutcome> flows;  // in flow-open order
  std::map<SimTime, std::string> snapshots;
  std::vector<AdjacencyEntry> adjacency;
  std::vector<DataCenterRecord> registered;
  /// Controller dc id -> topology data-center node.
  std::map<std::uint32_t, NodeId> dc_nodes;
  std::uint64_t events_processed = 0;
};

/// Runs every event strictly before `options.horizon`.
/// Throws ScriptError when a script names a node the topology does not have.
SimReport run_scenario(const Topology& topology, const ControllerConfig& config,
                       std::span<const AgentScript> agents, const ClientScript& clients,
                       const SimOptions& options);

/// Jobs per data center per hour, derived from delivered opening packets.
std::vector<std::vector<std::uint64_t>> hourly_dc_loads(const SimReport& report,
                                                        const Topology& topology,
                                                        std::size_t hours);

}  // namespace grasp::sim
