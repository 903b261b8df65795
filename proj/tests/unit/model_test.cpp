#include <gtest/gtest.h>

#include <set>

#include <nlohmann/json.hpp>

#include "grasp/config.hpp"
#include "grasp/error.hpp"
#include "grasp/model.hpp"
#include "grasp/topology.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace grasp;
using grasp::testing::TempDir;

TEST(NodeId, RendersKindPrefix) {
  EXPECT_EQ(to_string(switch_id(0)), "s0");
  EXPECT_EQ(to_string(datacenter_id(3)), "dc3");
  EXPECT_EQ(to_string(client_id(12)), "c12");
  EXPECT_LT(switch_id(5), datacenter_id(0));
}

TEST(Address, Ipv4RoundTrip) {
  auto ip = parse_ipv4("10.1.0.3");
  ASSERT_TRUE(ip);
  EXPECT_EQ(ip->value, 0x0a010003u);
  EXPECT_EQ(to_string(*ip), "10.1.0.3");
  EXPECT_FALSE(parse_ipv4("10.1.0"));
  EXPECT_FALSE(parse_ipv4("10.1.0.256"));
  EXPECT_FALSE(parse_ipv4("10.1.0.3x"));
  EXPECT_FALSE(parse_ipv4(""));
}

TEST(Address, MacRoundTrip) {
  auto mac = parse_mac("02:00:00:01:00:0a");
  ASSERT_TRUE(mac);
  EXPECT_EQ(mac->value, 0x02000001000aULL);
  EXPECT_EQ(to_string(*mac), "02:00:00:01:00:0a");
  EXPECT_FALSE(parse_mac("02:00:00:01:00"));
  EXPECT_FALSE(parse_mac("02:00:00:01:00:zz"));
}

TEST(Token, SeededSequenceRepeatsAndDiffers) {
  TokenGenerator a(42), b(42), c(43);
  const auto a1 = a.next();
  const auto a2 = a.next();
  EXPECT_EQ(a1, b.next());
  EXPECT_EQ(a2, b.next());
  EXPECT_NE(a1, a2);
  EXPECT_NE(a1, c.next());
  EXPECT_EQ(to_hex(a1).size(), 32u);
}

TEST(FormatReal, ShortestRoundTrip) {
  EXPECT_EQ(format_real(0.0), "0");
  EXPECT_EQ(format_real(-0.0), "0");
  EXPECT_EQ(format_real(2.5), "2.5");
  EXPECT_EQ(format_real(3600), "3600");
  EXPECT_EQ(std::stod(format_real(0.1 + 0.2)), 0.1 + 0.2);
}

// --- config ----------------------------------------------------------------

namespace {
const char* kMinimalConfig = R"({
  "parameters": ["green_energy_wh"], "weights": [1.0],
  "report_period": 3600, "flow_idle_timeout": 2, "job_energy_k": 1
})";

std::string validation_field(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<no ValidationError>";
}
}  // namespace

TEST(Config, MinimalFileLoads) {
  TempDir dir;
  const auto cfg = load_config(dir.write("c.json", kMinimalConfig));
  EXPECT_EQ(cfg.parameters, std::vector<std::string>{"green_energy_wh"});
  EXPECT_EQ(cfg.weights, std::vector<double>{1.0});
  EXPECT_EQ(cfg.report_period, 3600);
  EXPECT_EQ(cfg.flow_idle_timeout, 2);
  EXPECT_EQ(cfg.job_energy_k, 1);
  EXPECT_EQ(cfg.scheduler, SchedulerKind::GreenAware);
}

TEST(Config, WeightsLengthMismatchNamesWeights) {
  TempDir dir;
  const auto p = dir.write("c.json", R"({"parameters": ["green_energy_wh"], "weights": [1.0, 0.5]})");
  EXPECT_EQ(validation_field([&] { load_config(p); }), "weights");
}

TEST(Config, MissingGreenParameterNamesParameters) {
  TempDir dir;
  const auto p = dir.write("c.json", R"({"parameters": ["cpu_load"], "weights": [1.0]})");
  EXPECT_EQ(validation_field([&] { load_config(p); }), "parameters");
}

TEST(Config, NonPositiveValuesNameTheirField) {
  EXPECT_EQ(validation_field([] { config_from_json(nlohmann::json{{"job_energy_k", 0}}); }),
            "job_energy_k");
  EXPECT_EQ(validation_field([] { config_from_json(nlohmann::json{{"report_period", -1}}); }),
            "report_period");
  EXPECT_EQ(validation_field([] { config_from_json(nlohmann::json{{"flow_idle_timeout", 0}}); }),
            "flow_idle_timeout");
  EXPECT_EQ(validation_field([] { config_from_json(nlohmann::json{{"bogus", 1}}); }), "bogus");
  EXPECT_EQ(validation_field([] {
              config_from_json(nlohmann::json{{"panel", {{"efficiency", 1.5}}}});
            }),
            "panel.efficiency");
}

TEST(Config, MalformedFileIsParseError) {
  TempDir dir;
  EXPECT_THROW(load_config(dir.write("c.json", "{ not json")), ParseError);
  EXPECT_THROW(load_config(dir.write("d.json", R"({"weights": "heavy"})")), ParseError);
  EXPECT_THROW(load_config(dir / "missing.json"), ParseError);
}

TEST(Config, JsonRoundTrip) {
  ControllerConfig cfg;
  cfg.parameters = {"green_energy_wh", "cpu_load"};
  cfg.weights = {1.0, 0.25};
  cfg.scheduler = SchedulerKind::RoundRobin;
  cfg.job_energy_k = 7.5;
  cfg.panel.area_m2 = 12;
  EXPECT_EQ(config_from_json(config_to_json(cfg)), cfg);
}

TEST(Config, SchedulerNames) {
  EXPECT_EQ(parse_scheduler_kind("green_aware"), SchedulerKind::GreenAware);
  EXPECT_EQ(parse_scheduler_kind("rr"), SchedulerKind::RoundRobin);
  EXPECT_FALSE(parse_scheduler_kind("fair"));
  EXPECT_EQ(to_string(SchedulerKind::RoundRobin), "round_robin");
}

// --- topology --------------------------------------------------------------

TEST(Topology, BundledGeniShape) {
  const auto topo = load_topology(grasp::testing::data_path("geni.topo"));
  EXPECT_EQ(topo.switches.size(), 3u);
  EXPECT_EQ(topo.datacenters().size(), 9u);
  EXPECT_EQ(topo.clients().size(), 6u);
  EXPECT_EQ(topo.links.size(), 3u);  // full mesh
  for (const auto& sw : topo.switches) {
    int dcs = 0, clients = 0;
    for (const auto& a : topo.attachments) {
      if (a.switch_id != sw) continue;
      (a.host.kind == NodeKind::DataCenter ? dcs : clients)++;
    }
    EXPECT_EQ(dcs, 3);
    EXPECT_EQ(clients, 2);
  }
}

TEST(Topology, MinimalSingleSwitch) {
  TempDir dir;
  const auto p = dir.write("t.json", R"({"switches": ["s"], "links": [],
    "datacenters": [{"name": "d", "switch": "s", "port": 1}],
    "clients": [{"name": "c", "switch": "s", "port": 2}]})");
  const auto topo = load_topology(p);
  EXPECT_EQ(topo.switches.size(), 1u);
  EXPECT_EQ(topo.ports_of(switch_id(0)), (std::vector<PortNo>{1, 2}));
  const auto peer = topo.peer(switch_id(0), 1);
  ASSERT_TRUE(peer);
  EXPECT_EQ(peer->node, datacenter_id(0));
  EXPECT_FALSE(topo.peer(switch_id(0), 9));
}

TEST(Topology, UnlinkedSwitchesAreDisconnected) {
  TempDir dir;
  const auto p = dir.write("t.json", R"({"switches": ["a", "b"], "links": []})");
  EXPECT_EQ(validation_field([&] { load_topology(p); }), "disconnected");
}

TEST(Topology, PortReuseRejected) {
  TempDir dir;
  const auto p = dir.write("t.json", R"({"switches": ["a", "b"],
    "links": [{"a": "a", "a_port": 1, "b": "b", "b_port": 1}],
    "datacenters": [{"name": "d", "switch": "a", "port": 1}]})");
  EXPECT_EQ(validation_field([&] { load_topology(p); }), "port reuse");
}

TEST(Topology, BadReferencesRejected) {
  TempDir dir;
  EXPECT_THROW(load_topology(dir.write("a.json", R"({"switches": ["a"],
    "datacenters": [{"name": "d", "switch": "zz", "port": 1}]})")),
               ValidationError);
  EXPECT_THROW(load_topology(dir.write("b.json", R"({"switches": ["a", "a"]})")), ValidationError);
  EXPECT_THROW(load_topology(dir.write("c.json", R"({"switches": ["a"],
    "links": [{"a": "a", "a_port": 1, "b": "a", "b_port": 2}]})")),
               ValidationError);
  EXPECT_THROW(load_topology(dir.write("d.json", R"({"switches": []})")), ValidationError);
  EXPECT_THROW(load_topology(dir.write("e.json", R"([1, 2])")), ParseError);
}

TEST(Topology, DefaultAddressesAreUnique) {
  const auto topo = load_topology(grasp::testing::data_path("geni.topo"));
  std::set<std::uint32_t> ips;
  std::set<std::uint64_t> macs;
  for (const auto& [node, addr] : topo.addresses) {
    EXPECT_TRUE(ips.insert(addr.ip.value).second) << to_string(node);
    EXPECT_TRUE(macs.insert(addr.mac.value).second) << to_string(node);
    EXPECT_EQ(topo.node_by_ip(addr.ip), node);
  }
  EXPECT_EQ(ips.size(), 3u + 9u + 6u);
  EXPECT_FALSE(ips.count(topo.service_ip.value));
  EXPECT_FALSE(ips.count(topo.controller_ip.value));
}

TEST(Topology, SerializeRoundTrip) {
  const auto topo = load_topology(grasp::testing::data_path("geni.topo"));
  TempDir dir;
  const auto p = dir.write("rt.json", topology_to_json(topo).dump(2));
  EXPECT_EQ(load_topology(p), topo);
}
