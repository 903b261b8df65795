#include "grasp_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "grasp/config.hpp"
#include "grasp/csv.hpp"
#include "grasp/energy.hpp"
#include "grasp/error.hpp"
#include "grasp/experiment.hpp"
#include "grasp/netsim.hpp"
#include "grasp/scenario.hpp"
#include "grasp/topology.hpp"
#include "grasp_cli/svg.hpp"

namespace grasp::cli {

namespace fs = std::filesystem;

namespace {

// Raised while checking inputs; maps to kExitInvalid.
class FlagError : public std::runtime_error {
 public:
  FlagError(const std::string& flag, const std::string& detail)
      : std::runtime_error(flag + ": " + detail) {}
};

template <typename Fn>
auto checked(const std::string& flag, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw FlagError(flag, e.what());
  }
}

struct Common {
  std::optional<std::uint64_t> seed;
};

std::optional<std::uint64_t> resolve_seed(const Common& c) {
  if (c.seed) return c.seed;
  const char* env = std::getenv("GRASP_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  std::uint64_t v = 0;
  const std::string_view text(env);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw FlagError("GRASP_SEED", "not an unsigned integer: '" + std::string(text) + "'");
  }
  return v;
}

ControllerConfig config_or_default(const std::string& path) {
  if (path.empty()) return ControllerConfig{};
  return checked("--config", [&] { return load_config(path); });
}

std::vector<energy::EnergyProfile> profiles_for(const std::string& dir, const std::string& topo_path,
                                                const ControllerConfig& cfg) {
  if (!fs::is_directory(dir)) throw FlagError("--energy-dir", "not a directory: " + dir);
  auto profiles = checked("--energy-dir",
                          [&] { return energy::load_profile_dir(dir, cfg.nsrdb, cfg.panel); });
  if (profiles.empty()) throw FlagError("--energy-dir", "no .csv profiles in " + dir);
  if (!topo_path.empty()) {
    const auto topo = checked("--topology", [&] { return load_topology(topo_path); });
    const auto m = topo.datacenters().size();
    if (profiles.size() != m) {
      throw FlagError("--energy-dir", std::to_string(profiles.size()) + " profiles for " +
                                          std::to_string(m) + " data centers in the topology");
    }
  }
  return profiles;
}

void check_window(std::size_t hours, std::size_t first_hour) {
  if (hours == 0 || hours > energy::kHoursPerYear) {
    throw FlagError("--hours", "must lie in [1, 8760]");
  }
  if (first_hour + hours > energy::kHoursPerYear) {
    throw FlagError("--first-hour", "window runs past hour 8759");
  }
}

void check_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw FlagError("--k", "k must be > 0");
}

struct Range {
  double start = 0;
  double end = 0;
  double step = 0;

  std::vector<double> values() const {
    std::vector<double> v;
    const auto n = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) v.push_back(start + step * static_cast<double>(i));
    return v;
  }
};

Range parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw FlagError("--range", "expected start:end:step, got '" + text + "'");
  double v[3];
  for (int i = 0; i < 3; ++i) {
    if (!csv::parse_double(parts[i], v[i]) || !std::isfinite(v[i])) {
      throw FlagError("--range", "not a number: '" + parts[i] + "'");
    }
  }
  Range r{v[0], v[1], v[2]};
  if (!(r.step > 0)) throw FlagError("--range", "step must be > 0");
  if (r.start > r.end) throw FlagError("--range", "start must not exceed end");
  return r;
}

void write_text(const std::string& path, const std::string& text) {
  csv::write_file_atomic(path, [&](std::ostream& os) { os << text; });
}

// ---------------------------------------------------------------------------

struct RunArgs {
  std::string topology, config, energy_dir, scheduler, out;
  std::optional<double> k;
  std::int64_t jobs_per_hour = 900;
  std::size_t hours = energy::kHoursPerYear;
  std::size_t first_hour = 0;
};

int cmd_run(const RunArgs& a, const Common& common, std::ostream& out) {
  (void)resolve_seed(common);  // fast mode draws no random numbers
  const auto cfg = config_or_default(a.config);
  SchedulerKind kind = cfg.scheduler;
  if (!a.scheduler.empty()) {
    auto parsed = parse_scheduler_kind(a.scheduler);
    if (!parsed) throw FlagError("--scheduler", "unknown scheduler '" + a.scheduler + "'");
    kind = *parsed;
  }
  const double k = a.k.value_or(cfg.job_energy_k);
  check_k(k);
  if (a.jobs_per_hour < 0) throw FlagError("--jobs-per-hour", "must be >= 0");
  check_window(a.hours, a.first_hour);
  const auto profiles = profiles_for(a.energy_dir, a.topology, cfg);

  const auto report = exp::run_year(profiles, kind, k, static_cast<std::uint64_t>(a.jobs_per_hour),
                                    a.hours, a.first_hour);
  csv::write_file_atomic(a.out, [&](std::ostream& os) { exp::write_metrics_csv(os, report); });
  out << "r_avg=" << format_real(report.r_avg) << '\n';
  return kExitOk;
}

struct SweepArgs {
  std::string mode, range, topology, config, energy_dir, out, svg;
  std::optional<double> k;
  std::int64_t jobs_per_hour = 900;
  std::size_t hours = energy::kHoursPerYear;
  unsigned jobs = 1;
};

int cmd_sweep(const SweepArgs& a, const Common& common, std::ostream& out) {
  (void)resolve_seed(common);
  if (a.mode != "k" && a.mode != "load") throw FlagError("--mode", "must be 'k' or 'load'");
  const auto range = parse_range(a.range);
  const auto cfg = config_or_default(a.config);
  const double k = a.k.value_or(cfg.job_energy_k);
  check_k(k);
  if (a.jobs_per_hour < 0) throw FlagError("--jobs-per-hour", "must be >= 0");
  if (a.jobs == 0) throw FlagError("--jobs", "must be >= 1");
  check_window(a.hours, 0);
  const auto xs = range.values();
  std::vector<std::uint64_t> loads;
  if (a.mode == "k") {
    if (!(range.start > 0)) throw FlagError("--range", "k values must be > 0");
  } else {
    for (double x : xs) {
      if (x < 0 || x != std::floor(x)) throw FlagError("--range", "loads must be whole numbers >= 0");
      loads.push_back(static_cast<std::uint64_t>(x));
    }
  }
  const auto profiles = profiles_for(a.energy_dir, a.topology, cfg);

  const auto rows = a.mode == "k"
                        ? exp::sweep_k(profiles, xs, static_cast<std::uint64_t>(a.jobs_per_hour),
                                       a.hours, a.jobs)
                        : exp::sweep_load(profiles, loads, k, a.hours, a.jobs);
  csv::write_file_atomic(a.out, [&](std::ostream& os) { exp::write_sweep_csv(os, rows, a.mode); });
  if (!a.svg.empty()) {
    LineChart chart;
    chart.title = a.mode == "k" ? "r_avg vs k (" + std::to_string(a.jobs_per_hour) + " jobs/hour)"
                                : "r_avg vs load (k=" + format_real(k) + " Wh)";
    chart.x_label = a.mode == "k" ? "k (Wh per job)" : "jobs per hour";
    chart.y_label = "r_avg";
    Series green{"green-aware", "#2a9d3f", {}};
    Series rr{"round-robin", "#c0392b", {}};
    for (const auto& r : rows) {
      chart.x.push_back(r.x);
      green.y.push_back(r.r_avg_green);
      rr.y.push_back(r.r_avg_rr);
    }
    chart.series = {green, rr};
    write_text(a.svg, render_svg(chart));
  }
  out << "rows=" << rows.size() << '\n';
  return kExitOk;
}

struct ScenarioArgs {
  std::string scenario, trace_out, snapshots_out;
};

int cmd_scenario(const ScenarioArgs& a, const Common& common, std::ostream& out) {
  auto sc = checked("--scenario", [&] { return sim::load_scenario(a.scenario); });
  if (auto seed = resolve_seed(common)) sc.options.seed = *seed;

  const auto report = sim::run_scenario(sc);
  if (!a.trace_out.empty()) {
    csv::write_file_atomic(a.trace_out, [&](std::ostream& os) {
      for (const auto& line : report.trace) os << line << '\n';
    });
  }
  if (!a.snapshots_out.empty()) {
    csv::write_file_atomic(a.snapshots_out, [&](std::ostream& os) {
      for (const auto& [t, dump] : report.snapshots) os << "## t=" << format_real(t) << '\n' << dump;
    });
  }
  std::size_t delivered = 0;
  for (const auto& f : report.flows) delivered += f.delivered_to.has_value() ? 1 : 0;
  const auto& tally = report.tally;
  out << "packet_ins=" << report.packet_in_count << " registrations=" << tally.registrations
      << " discovery_receipts=" << tally.discovery_receipts << " reports=" << tally.reports
      << " client_requests=" << tally.client_requests << '\n';
  out << "flows=" << report.flows.size() << " delivered=" << delivered
      << " auth_failures=" << report.auth_failures << " expirations=" << report.rule_expirations
      << '\n';
  const auto dcs = sc.topology.datacenters();
  out << "dc_jobs=";
  for (std::size_t i = 0; i < dcs.size(); ++i) {
    out << (i > 0 ? "," : "") << sc.topology.name_of(dcs[i]) << ':' << report.dc_jobs[i];
  }
  out << '\n';
  return kExitOk;
}

struct GenArgs {
  std::string shape = "sinusoid", from_nsrdb, config, out;
  double peak = 200.0;
  double jitter = 0.0;
};

int cmd_gen_energy(const GenArgs& a, const Common& common, std::ostream& out) {
  const std::uint64_t seed = resolve_seed(common).value_or(0);
  std::optional<energy::EnergyProfile> profile;
  if (!a.from_nsrdb.empty()) {
    const auto cfg = config_or_default(a.config);
    profile = checked("--from-nsrdb", [&] {
      const auto records = energy::parse_nsrdb_csv(fs::path(a.from_nsrdb), cfg.nsrdb);
      return energy::build_profile(fs::path(a.from_nsrdb).stem().string(), records, cfg.panel);
    });
  } else {
    const auto shape = energy::parse_synth_shape(a.shape);
    if (!shape) throw FlagError("--shape", "unknown shape '" + a.shape + "'");
    if (!(a.peak >= 0) || !std::isfinite(a.peak)) throw FlagError("--peak", "must be >= 0");
    if (!(a.jitter >= 0 && a.jitter <= 1)) throw FlagError("--jitter", "must lie in [0, 1]");
    profile = energy::synth_profile(seed, *shape, a.peak, a.jitter);
  }
  csv::write_file_atomic(a.out, [&](std::ostream& os) { energy::write_profile_csv(os, *profile); });
  out << "site=" << profile->site_name() << " hours=" << profile->size() << '\n';
  return kExitOk;
}

struct ValidateArgs {
  std::string topology, config, energy, scenario;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  if (a.topology.empty() && a.config.empty() && a.energy.empty() && a.scenario.empty()) {
    throw FlagError("validate", "give --topology, --config, --energy or --scenario");
  }
  try {
    ControllerConfig cfg;
    if (!a.config.empty()) cfg = load_config(a.config);
    if (!a.topology.empty()) load_topology(a.topology).validate();
    if (!a.energy.empty()) {
      if (fs::is_directory(a.energy)) {
        if (energy::load_profile_dir(a.energy, cfg.nsrdb, cfg.panel).empty()) {
          throw ValidationError("energy", "no .csv profiles in " + a.energy);
        }
      } else {
        energy::load_profile(a.energy, cfg.nsrdb, cfg.panel);
      }
    }
    if (!a.scenario.empty()) sim::load_scenario(a.scenario);
  } catch (const Error& e) {
    out << e.what() << '\n';
    return kExitInvalid;
  }
  out << "OK\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"grasp: green-energy-aware job scheduling simulator", "grasp"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "Seed for every random draw (falls back to GRASP_SEED)");

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Schedule a year (or a window of it) hour by hour");
  run_cmd->add_option("--topology", run_args.topology, "Topology file; checks the profile count");
  run_cmd->add_option("--config", run_args.config, "Controller config JSON");
  run_cmd->add_option("--energy-dir", run_args.energy_dir, "Directory of site CSVs")->required();
  run_cmd->add_option("--scheduler", run_args.scheduler, "green_aware or round_robin");
  run_cmd->add_option("--k", run_args.k, "Energy per job, Wh");
  run_cmd->add_option("--jobs-per-hour", run_args.jobs_per_hour, "Jobs scheduled each hour");
  run_cmd->add_option("--hours", run_args.hours, "Number of hours to simulate");
  run_cmd->add_option("--first-hour", run_args.first_hour, "Hour of the year to start at");
  run_cmd->add_option("--out", run_args.out, "Metrics CSV")->required();

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Compare both schedulers across k or load");
  sweep_cmd->add_option("--mode", sweep_args.mode, "k or load")->required();
  sweep_cmd->add_option("--range", sweep_args.range, "start:end:step")->required();
  sweep_cmd->add_option("--topology", sweep_args.topology, "Topology file");
  sweep_cmd->add_option("--config", sweep_args.config, "Controller config JSON");
  sweep_cmd->add_option("--energy-dir", sweep_args.energy_dir, "Directory of site CSVs")->required();
  sweep_cmd->add_option("--k", sweep_args.k, "Energy per job for load sweeps, Wh");
  sweep_cmd->add_option("--jobs-per-hour", sweep_args.jobs_per_hour, "Load for k sweeps");
  sweep_cmd->add_option("--hours", sweep_args.hours, "Number of hours per run");
  sweep_cmd->add_option("--jobs", sweep_args.jobs, "Worker threads");
  sweep_cmd->add_option("--out", sweep_args.out, "Sweep CSV")->required();
  sweep_cmd->add_option("--svg", sweep_args.svg, "Line chart output");

  ScenarioArgs scenario_args;
  auto* scenario_cmd = app.add_subcommand("scenario", "Run a protocol-mode scenario");
  scenario_cmd->add_option("--scenario", scenario_args.scenario, "Scenario JSON")->required();
  scenario_cmd->add_option("--trace-out", scenario_args.trace_out, "Event trace output");
  scenario_cmd->add_option("--snapshots-out", scenario_args.snapshots_out,
                           "Flow-table snapshots output");

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen-energy", "Write an hourly energy profile CSV");
  gen_cmd->add_option("--shape", gen_args.shape, "sinusoid, constant or zero");
  gen_cmd->add_option("--peak", gen_args.peak, "Peak (or constant) Wh");
  gen_cmd->add_option("--jitter", gen_args.jitter, "Per-day amplitude jitter in [0, 1]");
  gen_cmd->add_option("--from-nsrdb", gen_args.from_nsrdb, "Convert a weather CSV instead");
  gen_cmd->add_option("--config", gen_args.config, "Config with column names and panel model");
  gen_cmd->add_option("--out", gen_args.out, "Profile CSV")->required();

  ValidateArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "Check input files");
  validate_cmd->add_option("--topology", validate_args.topology, "Topology file");
  validate_cmd->add_option("--config", validate_args.config, "Controller config JSON");
  validate_cmd->add_option("--energy", validate_args.energy, "Profile CSV or directory");
  validate_cmd->add_option("--scenario", validate_args.scenario, "Scenario JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (*run_cmd) return cmd_run(run_args, common, out);
    if (*sweep_cmd) return cmd_sweep(sweep_args, common, out);
    if (*scenario_cmd) return cmd_scenario(scenario_args, common, out);
    if (*gen_cmd) return cmd_gen_energy(gen_args, common, out);
    if (*validate_cmd) return cmd_validate(validate_args, out);
  } catch (const FlagError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitInvalid;
}

}  // namespace grasp::cli
