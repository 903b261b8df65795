#include "grasp/scenario.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "grasp/energy.hpp"
#include "grasp/error.hpp"

namespace grasp::sim {

using nlohmann::json;

namespace {

template <typename T>
T field(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + key + ": " + e.what());
  }
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known,
                    const std::string& where) {
  for (const auto& item : obj.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ValidationError(where + item.key(), "unknown key");
    }
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& rel) {
  std::filesystem::path p(rel);
  return p.is_absolute() ? p : base / p;
}

NodeId lookup_node(const Topology& topo, const std::string& name, NodeKind want,
                   const std::string& where) {
  auto node = topo.find(name);
  if (!node || node->kind != want) throw ScriptError(where + "unknown node '" + name + "'");
  return *node;
}

energy::EnergyProfile agent_profile(const json& a, const std::filesystem::path& base,
                                    const ControllerConfig& cfg, const std::string& where) {
  const int sources = static_cast<int>(a.contains("profile")) +
                      static_cast<int>(a.contains("constant_wh")) +
                      static_cast<int>(a.contains("synth"));
  if (sources != 1) {
    throw ValidationError(where + "profile", "give exactly one of profile, constant_wh, synth");
  }
  if (a.contains("profile")) {
    return energy::load_profile(resolve(base, field<std::string>(a, "profile", where, "")),
                                cfg.nsrdb, cfg.panel);
  }
  if (a.contains("constant_wh")) {
    return energy::synth_profile(0, energy::SynthShape::Constant,
                                 field<double>(a, "constant_wh", where, 0.0));
  }
  const auto& s = a.at("synth");
  const std::string sw = where + "synth.";
  if (!s.is_object()) throw ParseError(sw + ": must be an object");
  reject_unknown(s, {"shape", "peak", "seed", "jitter"}, sw);
  const auto shape_name = field<std::string>(s, "shape", sw, "sinusoid");
  auto shape = energy::parse_synth_shape(shape_name);
  if (!shape) throw ValidationError(sw + "shape", "unknown shape '" + shape_name + "'");
  return energy::synth_profile(field<std::uint64_t>(s, "seed", sw, 0), *shape,
                               field<double>(s, "peak", sw, 0.0), field<double>(s, "jitter", sw, 0.0));
}

}  // namespace

Scenario scenario_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ParseError("scenario must be a JSON object");
  reject_unknown(doc,
                 {"topology", "config", "seed", "horizon", "tick", "snapshots", "hour_offset",
                  "trace_rules", "agents", "clients"},
                 "");

  Scenario sc;
  if (!doc.contains("topology")) throw ValidationError("topology", "missing");
  const auto& topo = doc.at("topology");
  sc.topology = topo.is_string()
                    ? load_topology(resolve(base_dir, topo.get<std::string>()))
                    : topology_from_json(topo);
  if (doc.contains("config")) {
    const auto& c = doc.at("config");
    sc.config = c.is_string() ? load_config(resolve(base_dir, c.get<std::string>()))
                              : config_from_json(c);
  }

  sc.options.seed = field<std::uint64_t>(doc, "seed", "", 0);
  sc.options.horizon = field<double>(doc, "horizon", "", kSecondsPerHour);
  sc.options.tick = field<double>(doc, "tick", "", 1.0);
  sc.options.snapshot_times = field<std::vector<double>>(doc, "snapshots", "", {});
  sc.options.trace_rules = field<bool>(doc, "trace_rules", "", true);
  if (!(sc.options.horizon >= 0.0)) throw ValidationError("horizon", "must be >= 0");
  if (!(sc.options.tick > 0.0)) throw ValidationError("tick", "must be > 0");
  const auto hour_offset = field<std::size_t>(doc, "hour_offset", "", 0);

  if (doc.contains("agents")) {
    const auto& agents = doc.at("agents");
    if (agents.is_object()) {
      reject_unknown(agents, {"energy_dir", "register_at", "register_gap"}, "agents.");
      const auto dir = resolve(base_dir, field<std::string>(agents, "energy_dir", "agents.", ""));
      auto profiles = energy::load_profile_dir(dir, sc.config.nsrdb, sc.config.panel);
      const auto dcs = sc.topology.datacenters();
      if (profiles.size() < dcs.size()) {
        throw ValidationError("agents.energy_dir", "has " + std::to_string(profiles.size()) +
                                                       " profiles for " +
                                                       std::to_string(dcs.size()) + " data centers");
      }
      const double start = field<double>(agents, "register_at", "agents.", 0.0);
      const double gap = field<double>(agents, "register_gap", "agents.", 0.0);
      for (std::size_t i = 0; i < dcs.size(); ++i) {
        sc.agents.push_back(profile_agent(dcs[i], std::move(profiles[i]),
                                          start + gap * static_cast<double>(i), hour_offset));
      }
    } else if (agents.is_array()) {
      for (std::size_t i = 0; i < agents.size(); ++i) {
        const auto& a = agents[i];
        const std::string where = "agents[" + std::to_string(i) + "].";
        if (!a.is_object()) throw ParseError(where + ": must be an object");
        reject_unknown(a,
                       {"dc", "register_at", "profile", "constant_wh", "synth", "corrupt_passcode"},
                       where);
        const NodeId dc = lookup_node(sc.topology, field<std::string>(a, "dc", where, ""),
                                      NodeKind::DataCenter, where);
        auto script = profile_agent(dc, agent_profile(a, base_dir, sc.config, where),
                                    field<double>(a, "register_at", where, 0.0), hour_offset);
        script.corrupt_passcode = field<bool>(a, "corrupt_passcode", where, false);
        sc.agents.push_back(std::move(script));
      }
    } else {
      throw ParseError("agents: must be an array or an object");
    }
  }

  if (doc.contains("clients")) {
    const auto& c = doc.at("clients");
    if (!c.is_object()) throw ParseError("clients: must be an object");
    if (c.contains("flows")) {
      reject_unknown(c, {"flows"}, "clients.");
      const auto& flows = c.at("flows");
      if (!flows.is_array()) throw ParseError("clients.flows: must be an array");
      for (std::size_t i = 0; i < flows.size(); ++i) {
        const auto& f = flows[i];
        const std::string where = "clients.flows[" + std::to_string(i) + "].";
        reject_unknown(f, {"id", "client", "at", "packets", "gap"}, where);
        ClientFlow flow;
        flow.flow_id = field<std::uint64_t>(f, "id", where, i);
        flow.client = lookup_node(sc.topology, field<std::string>(f, "client", where, ""),
                                  NodeKind::Client, where);
        flow.open_at = field<double>(f, "at", where, 0.0);
        flow.packets = field<std::uint32_t>(f, "packets", where, 1);
        flow.packet_gap = field<double>(f, "gap", where, 0.5);
        sc.clients.flows.push_back(flow);
      }
    } else {
      reject_unknown(c, {"jobs_per_hour", "hours", "packets", "gap"}, "clients.");
      sc.clients = rate_workload(sc.topology, field<std::size_t>(c, "jobs_per_hour", "clients.", 0),
                                 field<std::size_t>(c, "hours", "clients.", 1),
                                 field<std::uint32_t>(c, "packets", "clients.", 1),
                                 field<double>(c, "gap", "clients.", 0.5));
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json(path), path.parent_path());
}

SimReport run_scenario(const Scenario& scenario) {
  return run_scenario(scenario.topology, scenario.config, scenario.agents, scenario.clients,
                      scenario.options);
}

}  // namespace grasp::sim
