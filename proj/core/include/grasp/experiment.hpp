#pragma once

// "Fast mode": hour-by-hour scheduling over a year without the network emulation,
// plus the k and load sweeps built on it.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "grasp/config.hpp"
#include "grasp/energy.hpp"

namespace grasp::exp {

/// Σ_d min(caps[d], loads[d]). Throws LengthMismatch.
double green_jobs(std::span<const double> max_caps, std::span<const std::uint64_t> loads);

struct HourlyMetrics {
  std::size_t hour = 0;
  std::uint64_t jobs = 0;
  double green_jobs = 0.0;
  /// green_jobs / jobs, or 1 for an hour without jobs.
  double ratio = 1.0;
  std::vector<std::uint64_t> per_dc_load;

  friend bool operator==(const HourlyMetrics&, const HourlyMetrics&) = default;
};

struct YearReport {
  SchedulerKind scheduler = SchedulerKind::GreenAware;
  double k = 1.0;
  std::uint64_t jobs_per_hour = 0;
  std::vector<HourlyMetrics> hourly;
  double r_avg = 1.0;

  friend bool operator==(const YearReport&, const YearReport&) = default;
};

/// Schedules `jobs_per_hour` jobs in each of `hours` hours starting at `first_hour`. The
/// round-robin cursor carries over from hour to hour; job counts reset.
/// Throws ValidationError for k <= 0, no profiles, or profiles too short for the window.
YearReport run_year(std::span<const energy::EnergyProfile> profiles, SchedulerKind scheduler,
                    double k, std::uint64_t jobs_per_hour,
                    std::size_t hours = energy::kHoursPerYear, std::size_t first_hour = 0);

struct SweepRow {
  double x = 0.0;  // k or jobs per hour
  double r_avg_green = 0.0;
  double r_avg_rr = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// One run_year per (scheduler, k). `threads` > 1 runs cells concurrently; results do not
/// depend on it.
std::vector<SweepRow> sweep_k(std::span<const energy::EnergyProfile> profiles,
                              std::span<const double> ks, std::uint64_t jobs_per_hour,
                              std::size_t hours = energy::kHoursPerYear, unsigned threads = 1);

std::vector<SweepRow> sweep_load(std::span<const energy::EnergyProfile> profiles,
                                 std::span<const std::uint64_t> loads, double k,
                                 std::size_t hours = energy::kHoursPerYear, unsigned threads = 1);

/// `hour,scheduler,k,jobs,n_g,r,dc_0,...` then one row per hour.
void write_metrics_csv(std::ostream& out, const YearReport& report);

/// `first_column,r_avg_green,r_avg_rr` then one row per point.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows,
                     std::string_view first_column);

}  // namespace grasp::exp
