#pragma once

// Job placement across data centers: the green-energy-aware scheduler and the
// round-robin baseline it is compared against.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "grasp/config.hpp"

namespace grasp::sched {

/// Per-hour scheduling state over m data centers. Index i is the scheduler's view of
/// data center i; callers keep their own stable mapping onto it.
class SchedulerState {
 public:
  SchedulerState() = default;
  /// Throws ValidationError if k <= 0 or an energy value is negative or non-finite.
  SchedulerState(std::vector<double> energy_wh, double job_energy_k);
  /// Throws LengthMismatch when the two arrays differ in length.
  SchedulerState(std::vector<double> energy_wh, std::vector<std::uint64_t> active_jobs,
                 double job_energy_k, std::size_t rr_cursor = 0);

  std::size_t size() const noexcept { return energy_wh_.size(); }
  std::span<const double> energy_wh() const noexcept { return energy_wh_; }
  std::span<const std::uint64_t> active_jobs() const noexcept { return active_jobs_; }
  double job_energy_k() const noexcept { return job_energy_k_; }
  std::size_t rr_cursor() const noexcept { return rr_cursor_; }

  /// Appends a data center with no jobs; returns its index.
  std::size_t add_datacenter(double energy_wh = 0.0);
  void set_energy(std::size_t dc, double energy_wh);
  void record_job(std::size_t dc);
  void clear_jobs();
  /// Returns the cursor and moves it to the next data center.
  std::size_t advance_rr_cursor();

  /// E[d] / k - n[d]: how many more jobs d can still run on green energy.
  double green_headroom(std::size_t dc) const {
    return energy_wh_[dc] / job_energy_k_ - static_cast<double>(active_jobs_[dc]);
  }

  friend bool operator==(const SchedulerState&, const SchedulerState&) = default;

 private:
  std::vector<double> energy_wh_;
  std::vector<std::uint64_t> active_jobs_;
  double job_energy_k_ = 1.0;
  std::size_t rr_cursor_ = 0;
};

struct Decision {
  std::size_t dc_index = 0;
  /// Green headroom of every data center at decision time (zeros for round robin).
  std::vector<double> g_values;
};

/// Picks the smallest index maximising E[d]/k - n[d] and charges it one job.
/// Throws EmptyFleet when there are no data centers.
Decision green_aware_decide(SchedulerState& state);

/// Picks the cursor position, advances the cursor and charges one job.
Decision round_robin_decide(SchedulerState& state);

/// Starts a new hour: replaces E, zeroes n, keeps the round-robin cursor.
void reset_hour(SchedulerState& state, std::span<const double> new_energy);

/// Pluggable scheduling policy. Implementations mutate the state they are handed and
/// are not safe for concurrent calls on the same state.
class Scheduler {
 public:
  virtual ~Scheduler() = default;

  virtual SchedulerKind kind() const noexcept = 0;
  virtual Decision decide(SchedulerState& state) const = 0;
  /// Same choice as decide() without materialising the score vector.
  virtual std::size_t pick(SchedulerState& state) const = 0;

  /// Per-parameter weights from the controller configuration.
  std::span<const double> weights() const noexcept { return weights_; }

 protected:
  explicit Scheduler(std::vector<double> weights) : weights_(std::move(weights)) {}

 private:
  std::vector<double> weights_;
};

std::unique_ptr<Scheduler> make_scheduler(SchedulerKind kind, std::vector<double> weights = {});

}  // namespace grasp::sched
