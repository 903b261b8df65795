#include "grasp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "grasp/error.hpp"
#include "grasp/model.hpp"
#include "grasp/scheduler.hpp"

namespace grasp::exp {

double green_jobs(std::span<const double> max_caps, std::span<const std::uint64_t> loads) {
  if (max_caps.size() != loads.size()) throw LengthMismatch(max_caps.size(), loads.size());
  double sum = 0.0;
  for (std::size_t d = 0; d < loads.size(); ++d) {
    sum += std::min(max_caps[d], static_cast<double>(loads[d]));
  }
  return sum;
}

YearReport run_year(std::span<const energy::EnergyProfile> profiles, SchedulerKind scheduler,
                    double k, std::uint64_t jobs_per_hour, std::size_t hours,
                    std::size_t first_hour) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("k", "must be > 0");
  if (profiles.empty()) throw ValidationError("profiles", "need at least one profile");
  for (const auto& p : profiles) {
    if (p.size() < first_hour + hours) {
      throw ValidationError("hours", "profile " + p.site_name() + " has only " +
                                         std::to_string(p.size()) + " hours");
    }
  }

  const std::size_t m = profiles.size();
  const auto sched = sched::make_scheduler(scheduler);
  sched::SchedulerState state(std::vector<double>(m, 0.0), k);
  std::vector<double> energy(m);
  std::vector<double> caps(m);

  YearReport report;
  report.scheduler = scheduler;
  report.k = k;
  report.jobs_per_hour = jobs_per_hour;
  report.hourly.reserve(hours);
  double ratio_sum = 0.0;

  for (std::size_t h = 0; h < hours; ++h) {
    for (std::size_t d = 0; d < m; ++d) {
      energy[d] = profiles[d][first_hour + h];
      caps[d] = energy[d] / k;
    }
    sched::reset_hour(state, energy);
    for (std::uint64_t j = 0; j < jobs_per_hour; ++j) sched->pick(state);

    HourlyMetrics hm;
    hm.hour = first_hour + h;
    hm.jobs = jobs_per_hour;
    hm.per_dc_load.assign(state.active_jobs().begin(), state.active_jobs().end());
    hm.green_jobs = green_jobs(caps, hm.per_dc_load);
    hm.ratio = jobs_per_hour == 0 ? 1.0 : hm.green_jobs / static_cast<double>(jobs_per_hour);
    ratio_sum += hm.ratio;
    report.hourly.push_back(std::move(hm));
  }
  report.r_avg = hours == 0 ? 1.0 : ratio_sum / static_cast<double>(hours);
  return report;
}

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<SweepRow> sweep_k(std::span<const energy::EnergyProfile> profiles,
                              std::span<const double> ks, std::uint64_t jobs_per_hour,
                              std::size_t hours, unsigned threads) {
  std::vector<SweepRow> rows(ks.size());
  parallel_for(ks.size() * 2, threads, [&](std::size_t cell) {
    const std::size_t i = cell / 2;
    const bool green = cell % 2 == 0;
    const auto r = run_year(profiles, green ? SchedulerKind::GreenAware : SchedulerKind::RoundRobin,
                            ks[i], jobs_per_hour, hours);
    rows[i].x = ks[i];
    (green ? rows[i].r_avg_green : rows[i].r_avg_rr) = r.r_avg;
  });
  return rows;
}

std::vector<SweepRow> sweep_load(std::span<const energy::EnergyProfile> profiles,
                                 std::span<const std::uint64_t> loads, double k,
                                 std::size_t hours, unsigned threads) {
  std::vector<SweepRow> rows(loads.size());
  parallel_for(loads.size() * 2, threads, [&](std::size_t cell) {
    const std::size_t i = cell / 2;
    const bool green = cell % 2 == 0;
    const auto r = run_year(profiles, green ? SchedulerKind::GreenAware : SchedulerKind::RoundRobin,
                            k, loads[i], hours);
    rows[i].x = static_cast<double>(loads[i]);
    (green ? rows[i].r_avg_green : rows[i].r_avg_rr) = r.r_avg;
  });
  return rows;
}

void write_metrics_csv(std::ostream& out, const YearReport& report) {
  out << "hour,scheduler,k,jobs,n_g,r";
  const std::size_t m = report.hourly.empty() ? 0 : report.hourly.front().per_dc_load.size();
  for (std::size_t d = 0; d < m; ++d) out << ",dc_" << d;
  out << '\n';
  const auto sched = to_string(report.scheduler);
  const auto k = format_real(report.k);
  for (const auto& h : report.hourly) {
    out << h.hour << ',' << sched << ',' << k << ',' << h.jobs << ',' << format_real(h.green_jobs)
        << ',' << format_real(h.ratio);
    for (auto n : h.per_dc_load) out << ',' << n;
    out << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows,
                     std::string_view first_column) {
  out << first_column << ",r_avg_green,r_avg_rr\n";
  for (const auto& r : rows) {
    out << format_real(r.x) << ',' << format_real(r.r_avg_green) << ',' << format_real(r.r_avg_rr)
        << '\n';
  }
}

}  // namespace grasp::exp
