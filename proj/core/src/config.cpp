#include "grasp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "grasp/error.hpp"

namespace grasp {

using nlohmann::json;

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::GreenAware:
      return "green_aware";
    case SchedulerKind::RoundRobin:
      return "round_robin";
  }
  return "?";
}

std::optional<SchedulerKind> parse_scheduler_kind(std::string_view text) {
  if (text == "green_aware" || text == "green") return SchedulerKind::GreenAware;
  if (text == "round_robin" || text == "rr") return SchedulerKind::RoundRobin;
  return std::nullopt;
}

void ControllerConfig::validate() const {
  if (parameters.empty()) throw ValidationError("parameters", "must not be empty");
  if (std::find(parameters.begin(), parameters.end(), kGreenEnergyParam) == parameters.end()) {
    throw ValidationError("parameters", "must contain \"green_energy_wh\"");
  }
  std::set<std::string> seen;
  for (const auto& p : parameters) {
    if (p.empty()) throw ValidationError("parameters", "empty parameter name");
    if (!seen.insert(p).second) throw ValidationError("parameters", "duplicate '" + p + "'");
  }
  if (weights.size() != parameters.size()) {
    throw ValidationError("weights", "expected " + std::to_string(parameters.size()) +
                                         " weights, got " + std::to_string(weights.size()));
  }
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw ValidationError("weights", "must be finite and >= 0");
  }
  if (!(report_period > 0.0) || !std::isfinite(report_period)) {
    throw ValidationError("report_period", "must be > 0");
  }
  if (!(flow_idle_timeout > 0.0) || !std::isfinite(flow_idle_timeout)) {
    throw ValidationError("flow_idle_timeout", "must be > 0");
  }
  if (!(job_energy_k > 0.0) || !std::isfinite(job_energy_k)) {
    throw ValidationError("job_energy_k", "must be > 0");
  }
  if (nsrdb.temp_column.empty()) throw ValidationError("nsrdb.temp_column", "must not be empty");
  if (nsrdb.ghi_column.empty()) throw ValidationError("nsrdb.ghi_column", "must not be empty");
  panel.validate();
}

namespace {

template <typename T>
T get_as(const json& doc, const char* key, const std::string& field) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(field + ": " + e.what());
  }
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> known,
                         const std::string& prefix) {
  for (const auto& item : obj.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ValidationError(prefix + item.key(), "unknown key");
    }
  }
}

}  // namespace

ControllerConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  reject_unknown_keys(doc,
                      {"parameters", "weights", "report_period", "flow_idle_timeout", "scheduler",
                       "job_energy_k", "nsrdb", "panel"},
                      "");

  ControllerConfig cfg;
  if (doc.contains("parameters")) {
    cfg.parameters = get_as<std::vector<std::string>>(doc, "parameters", "parameters");
  }
  if (doc.contains("weights")) cfg.weights = get_as<std::vector<double>>(doc, "weights", "weights");
  if (doc.contains("report_period")) {
    cfg.report_period = get_as<double>(doc, "report_period", "report_period");
  }
  if (doc.contains("flow_idle_timeout")) {
    cfg.flow_idle_timeout = get_as<double>(doc, "flow_idle_timeout", "flow_idle_timeout");
  }
  if (doc.contains("job_energy_k")) {
    cfg.job_energy_k = get_as<double>(doc, "job_energy_k", "job_energy_k");
  }
  if (doc.contains("scheduler")) {
    const auto name = get_as<std::string>(doc, "scheduler", "scheduler");
    auto kind = parse_scheduler_kind(name);
    if (!kind) throw ValidationError("scheduler", "unknown scheduler '" + name + "'");
    cfg.scheduler = *kind;
  }
  if (doc.contains("nsrdb")) {
    const auto& n = doc.at("nsrdb");
    if (!n.is_object()) throw ParseError("nsrdb: must be an object");
    reject_unknown_keys(n, {"temp_column", "ghi_column", "skip_lines"}, "nsrdb.");
    if (n.contains("temp_column")) {
      cfg.nsrdb.temp_column = get_as<std::string>(n, "temp_column", "nsrdb.temp_column");
    }
    if (n.contains("ghi_column")) {
      cfg.nsrdb.ghi_column = get_as<std::string>(n, "ghi_column", "nsrdb.ghi_column");
    }
    if (n.contains("skip_lines")) {
      cfg.nsrdb.skip_lines = get_as<std::size_t>(n, "skip_lines", "nsrdb.skip_lines");
    }
  }
  if (doc.contains("panel")) {
    const auto& p = doc.at("panel");
    if (!p.is_object()) throw ParseError("panel: must be an object");
    reject_unknown_keys(p, {"area_m2", "efficiency", "temp_coeff_per_c", "reference_temp_c"},
                        "panel.");
    if (p.contains("area_m2")) cfg.panel.area_m2 = get_as<double>(p, "area_m2", "panel.area_m2");
    if (p.contains("efficiency")) {
      cfg.panel.efficiency = get_as<double>(p, "efficiency", "panel.efficiency");
    }
    if (p.contains("temp_coeff_per_c")) {
      cfg.panel.temp_coeff_per_c = get_as<double>(p, "temp_coeff_per_c", "panel.temp_coeff_per_c");
    }
    if (p.contains("reference_temp_c")) {
      cfg.panel.reference_temp_c = get_as<double>(p, "reference_temp_c", "panel.reference_temp_c");
    }
  }
  cfg.validate();
  return cfg;
}

json config_to_json(const ControllerConfig& cfg) {
  return json{
      {"parameters", cfg.parameters},
      {"weights", cfg.weights},
      {"report_period", cfg.report_period},
      {"flow_idle_timeout", cfg.flow_idle_timeout},
      {"scheduler", std::string(to_string(cfg.scheduler))},
      {"job_energy_k", cfg.job_energy_k},
      {"nsrdb",
       {{"temp_column", cfg.nsrdb.temp_column},
        {"ghi_column", cfg.nsrdb.ghi_column},
        {"skip_lines", cfg.nsrdb.skip_lines}}},
      {"panel",
       {{"area_m2", cfg.panel.area_m2},
        {"efficiency", cfg.panel.efficiency},
        {"temp_coeff_per_c", cfg.panel.temp_coeff_per_c},
        {"reference_temp_c", cfg.panel.reference_temp_c}}},
  };
}

ControllerConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace grasp
