#pragma once

// The control plane: switch connect, data-center registration, topology discovery,
// report ingestion and job-request scheduling with flow installation.
//
// Handlers run to completion one at a time; the controller is single-threaded and
// may be moved between threads but never shared.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "grasp/config.hpp"
#include "grasp/flow.hpp"
#include "grasp/model.hpp"
#include "grasp/scheduler.hpp"
#include "grasp/trace.hpp"

namespace grasp::ctrl {

enum class PacketInKind { Register, Discover, Report, ClientRequest, Other };

std::string_view to_string(PacketInKind kind);
PacketInKind classify(const Packet& packet);

/// A packet punted to the controller by the table-miss rule.
struct PacketIn {
  NodeId switch_id;
  PortNo in_port = 0;
  Packet packet;
};

/// A packet the controller injects at a switch port.
struct PacketOut {
  NodeId switch_id;
  PortNo out_port = 0;
  Packet packet;
};

/// What a switch announces when it connects.
struct SwitchFeatures {
  NodeId id;
  MacAddr mac;
  std::vector<PortNo> ports;
};

enum class DropReason {
  ForeignToken,
  UnregisteredReporter,
  AuthFailure,
  UnknownParameter,
  NoDatacenter,
  NoPath,
  Unhandled,
};

std::string_view to_string(DropReason reason);

struct ControllerResponse {
  std::vector<FlowMod> flow_mods;
  std::vector<PacketOut> packet_outs;
  std::optional<DropReason> dropped;
  /// Set for scheduled client requests; dc_index is the controller's dc id.
  std::optional<sched::Decision> decision;
};

struct PacketInTally {
  std::uint64_t registrations = 0;
  std::uint64_t discovery_receipts = 0;
  std::uint64_t reports = 0;
  std::uint64_t client_requests = 0;
  std::uint64_t other = 0;

  std::uint64_t total() const {
    return registrations + discovery_receipts + reports + client_requests + other;
  }
};

class Controller {
 public:
  /// `seed` drives the discovery token and every passcode. `trace` may be null.
  Controller(ControllerConfig config, std::uint64_t seed, Trace* trace = nullptr);

  /// Installs the table-miss rule on the switch and floods a discovery probe out of
  /// every port. Throws AlreadyConnected on a second connect.
  ControllerResponse on_switch_connect(const SwitchFeatures& features, SimTime now = 0.0);

  /// Dispatches on the packet kind. Throws UnknownSwitch if the switch never connected;
  /// every other failure is reported through ControllerResponse::dropped.
  ControllerResponse on_packet_in(const PacketIn& pin, SimTime now = 0.0);

  /// Hop-count shortest path over discovered adjacency, lexicographically smallest
  /// among equals. Throws NoPath.
  std::vector<NodeId> compute_path(NodeId from, NodeId to) const;

  /// Forward and reverse rules on every switch between the client's ingress point and `dc`.
  /// The first forward hop rewrites the destination to the data center.
  std::vector<FlowMod> install_path(Ipv4Addr client_ip, const DataCenterRecord& dc,
                                    NodeId ingress_switch, PortNo ingress_port) const;

  const ControllerConfig& config() const noexcept { return config_; }
  const std::vector<DataCenterRecord>& datacenters() const noexcept { return dcs_; }
  const DataCenterRecord* find_datacenter(Ipv4Addr ip) const;
  /// Discovered adjacency, ordered by (from_switch, to_switch).
  std::vector<AdjacencyEntry> adjacency() const;
  const sched::SchedulerState& scheduler_state() const noexcept { return sched_state_; }
  const std::map<std::uint32_t, std::map<std::string, double>>& latest_reports() const noexcept {
    return latest_reports_;
  }
  const Token& discovery_token() const noexcept { return discovery_token_; }
  bool is_connected(NodeId sw) const { return connected_.count(sw) != 0; }

  std::uint64_t packet_in_count() const noexcept { return tally_.total(); }
  const PacketInTally& packet_in_tally() const noexcept { return tally_; }
  std::uint64_t auth_failures() const noexcept { return auth_failures_; }

 private:
  void advance_clock(SimTime now);
  ControllerResponse handle_register(const PacketIn& pin, TraceLine& line);
  ControllerResponse handle_discover(const PacketIn& pin, const DiscoverMsg& msg, TraceLine& line);
  ControllerResponse handle_report(const PacketIn& pin, const ReportMsg& msg, TraceLine& line);
  ControllerResponse handle_client(const PacketIn& pin, TraceLine& line);
  PortNo egress_toward(NodeId from, NodeId to) const;
  void emit(const TraceLine& line);

  ControllerConfig config_;
  std::unique_ptr<sched::Scheduler> scheduler_;
  TokenGenerator tokens_;
  Token discovery_token_;
  Trace* trace_;

  std::map<NodeId, SwitchFeatures> connected_;
  std::vector<DataCenterRecord> dcs_;  // indexed by dc id == scheduler index
  std::unordered_map<Ipv4Addr, std::uint32_t> dc_by_ip_;
  std::map<std::pair<NodeId, NodeId>, AdjacencyEntry> adjacency_;
  std::map<std::uint32_t, std::map<std::string, double>> latest_reports_;
  sched::SchedulerState sched_state_;
  std::int64_t epoch_ = 0;

  PacketInTally tally_;
  std::uint64_t auth_failures_ = 0;
};

}  // namespace grasp::ctrl
