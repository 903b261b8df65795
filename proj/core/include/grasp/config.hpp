#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "grasp/energy.hpp"

namespace grasp {

enum class SchedulerKind { GreenAware, RoundRobin };

/// "green_aware" / "round_robin".
std::string_view to_string(SchedulerKind kind);
/// Accepts the canonical names plus "green" and "rr".
std::optional<SchedulerKind> parse_scheduler_kind(std::string_view text);

/// Parameter every agent must report for the bundled schedulers.
inline constexpr std::string_view kGreenEnergyParam = "green_energy_wh";

/// Controller configuration. Durations are simulated seconds, job_energy_k is Wh per job.
struct ControllerConfig {
  std::vector<std::string> parameters{std::string(kGreenEnergyParam)};
  std::vector<double> weights{1.0};
  double report_period = 3600.0;
  double flow_idle_timeout = 2.0;
  SchedulerKind scheduler = SchedulerKind::GreenAware;
  double job_energy_k = 1.0;
  energy::NsrdbColumns nsrdb;
  energy::PvPanelModel panel;

  /// Throws ValidationError naming the first offending field.
  void validate() const;

  friend bool operator==(const ControllerConfig&, const ControllerConfig&) = default;
};

ControllerConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ControllerConfig& config);

/// Reads and validates a JSON config file. ParseError for malformed text or wrong value
/// types, ValidationError for invariant violations.
ControllerConfig load_config(const std::filesystem::path& path);

}  // namespace grasp
