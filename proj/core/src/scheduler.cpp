#include "grasp/scheduler.hpp"

#include <cmath>

#include "grasp/error.hpp"

namespace grasp::sched {

namespace {

void check_energy(double wh) {
  if (!std::isfinite(wh) || wh < 0.0) throw ValidationError("energy_wh", "must be finite and >= 0");
}

}  // namespace

SchedulerState::SchedulerState(std::vector<double> energy_wh, double job_energy_k)
    : SchedulerState(energy_wh, std::vector<std::uint64_t>(energy_wh.size(), 0), job_energy_k) {}

SchedulerState::SchedulerState(std::vector<double> energy_wh,
                               std::vector<std::uint64_t> active_jobs, double job_energy_k,
                               std::size_t rr_cursor)
    : energy_wh_(std::move(energy_wh)),
      active_jobs_(std::move(active_jobs)),
      job_energy_k_(job_energy_k),
      rr_cursor_(rr_cursor) {
  if (energy_wh_.size() != active_jobs_.size()) {
    throw LengthMismatch(energy_wh_.size(), active_jobs_.size());
  }
  if (!(job_energy_k_ > 0.0) || !std::isfinite(job_energy_k_)) {
    throw ValidationError("job_energy_k", "must be > 0");
  }
  for (double e : energy_wh_) check_energy(e);
  if (!energy_wh_.empty() && rr_cursor_ >= energy_wh_.size()) {
    throw ValidationError("rr_cursor", "out of range");
  }
}

std::size_t SchedulerState::add_datacenter(double energy_wh) {
  check_energy(energy_wh);
  energy_wh_.push_back(energy_wh);
  active_jobs_.push_back(0);
  return energy_wh_.size() - 1;
}

void SchedulerState::set_energy(std::size_t dc, double energy_wh) {
  check_energy(energy_wh);
  energy_wh_.at(dc) = energy_wh;
}

void SchedulerState::record_job(std::size_t dc) { ++active_jobs_.at(dc); }

void SchedulerState::clear_jobs() { std::fill(active_jobs_.begin(), active_jobs_.end(), 0); }

std::size_t SchedulerState::advance_rr_cursor() {
  if (energy_wh_.empty()) throw EmptyFleet();
  const auto chosen = rr_cursor_ % energy_wh_.size();
  rr_cursor_ = (chosen + 1) % energy_wh_.size();
  return chosen;
}

namespace {

std::size_t green_aware_pick(SchedulerState& state) {
  const auto m = state.size();
  if (m == 0) throw EmptyFleet();
  std::size_t best = 0;
  double best_g = state.green_headroom(0);
  for (std::size_t d = 1; d < m; ++d) {
    const double g = state.green_headroom(d);
    if (g > best_g) {  // strict: ties keep the smaller index
      best = d;
      best_g = g;
    }
  }
  state.record_job(best);
  return best;
}

std::size_t round_robin_pick(SchedulerState& state) {
  const auto chosen = state.advance_rr_cursor();
  state.record_job(chosen);
  return chosen;
}

class GreenAwareScheduler final : public Scheduler {
 public:
  explicit GreenAwareScheduler(std::vector<double> weights) : Scheduler(std::move(weights)) {}
  SchedulerKind kind() const noexcept override { return SchedulerKind::GreenAware; }
  Decision decide(SchedulerState& state) const override { return green_aware_decide(state); }
  std::size_t pick(SchedulerState& state) const override { return green_aware_pick(state); }
};

class RoundRobinScheduler final : public Scheduler {
 public:
  explicit RoundRobinScheduler(std::vector<double> weights) : Scheduler(std::move(weights)) {}
  SchedulerKind kind() const noexcept override { return SchedulerKind::RoundRobin; }
  Decision decide(SchedulerState& state) const override { return round_robin_decide(state); }
  std::size_t pick(SchedulerState& state) const override { return round_robin_pick(state); }
};

}  // namespace

Decision green_aware_decide(SchedulerState& state) {
  Decision d;
  d.g_values.resize(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) d.g_values[i] = state.green_headroom(i);
  d.dc_index = green_aware_pick(state);
  return d;
}

Decision round_robin_decide(SchedulerState& state) {
  Decision d;
  d.g_values.assign(state.size(), 0.0);
  d.dc_index = round_robin_pick(state);
  return d;
}

void reset_hour(SchedulerState& state, std::span<const double> new_energy) {
  if (new_energy.size() != state.size()) throw LengthMismatch(state.size(), new_energy.size());
  for (std::size_t d = 0; d < new_energy.size(); ++d) state.set_energy(d, new_energy[d]);
  state.clear_jobs();
}

std::unique_ptr<Scheduler> make_scheduler(SchedulerKind kind, std::vector<double> weights) {
  switch (kind) {
    case SchedulerKind::GreenAware:
      return std::make_unique<GreenAwareScheduler>(std::move(weights));
    case SchedulerKind::RoundRobin:
      return std::make_unique<RoundRobinScheduler>(std::move(weights));
  }
  throw ValidationError("scheduler", "unknown scheduler kind");
}

}  // namespace grasp::sched
