#pragma once

// Scenario files: one JSON document naming a topology, a controller config, the agents
// running in each data center and the client workload.
//
//   {
//     "topology": "../geni.topo", "config": "../grasp.json",
//     "seed": 7, "horizon": 3600, "snapshots": [1800],
//     "agents": [{"dc": "dc0", "register_at": 0, "synth": {"shape": "sinusoid", "peak": 900}}],
//     "clients": {"flows": [{"client": "c0", "at": 60}]}
//   }
//
// Relative paths resolve against the scenario file's directory.

#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "grasp/config.hpp"
#include "grasp/netsim.hpp"
#include "grasp/topology.hpp"

namespace grasp::sim {

struct Scenario {
  Topology topology;
  ControllerConfig config;
  std::vector<AgentScript> agents;
  ClientScript clients;
  SimOptions options;
};

/// Throws ParseError, ValidationError or ScriptError.
Scenario scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

SimReport run_scenario(const Scenario& scenario);

}  // namespace grasp::sim
