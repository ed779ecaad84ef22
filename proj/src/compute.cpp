// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#include "densefog/compute.hpp"

#include <algorithm>

namespace densefog {

ResponderSet discover_responders(int origin, const RouteTree& tree, std::span<const std::uint8_t> fog_member,
                                 int vehicle_count, const ComputeParams& params) {
  ResponderSet set;
  set.nodes.push_back(origin);
  if (!fog_member[origin]) return set;
  const auto n = static_cast<int>(tree.parent.size());
  for (int u = 0; u < n; ++u) {
    if (u == origin || !tree.reachable(u)) continue;
    const bool site = u >= vehicle_count;
    if (site ? !params.infrastructure : !fog_member[u]) continue;
    if (2.0 * tree.latency_s[u] > params.response_window_s) continue;
    set.nodes.push_back(u);
    set.dispatch_latency_s = std::max(set.dispatch_latency_s, tree.latency_s[u]);
  }
  return set;
}

double execute_job(double flop_size, double dispatch_latency_s, std::span<const double> effective_flops) {
  double total = 0.0;
  for (double r : effective_flops) total += r;
  return dispatch_latency_s + flop_size / total;
}

JobScheduler::JobScheduler(std::vector<double> node_flops)
    : rates_(std::move(node_flops)), divisor_(rates_.size(), 0), consumed_(rates_.size(), 0.0) {}

int JobScheduler::submit(ComputeJob job) {
  job.id = static_cast<int>(jobs_.size());
  job.remaining = job.flop_size;
  job.completion = kNever;
  jobs_.push_back(std::move(job));
  pending_.push_back(jobs_.back().id);
  return jobs_.back().id;
}

void JobScheduler::advance(double t0, double t1) {
  std::fill(consumed_.begin(), consumed_.end(), 0.0);
  const double span = t1 - t0;
  double now = t0;
  std::vector<double> rate;
  while (true) {
    // Zero-size jobs finish as soon as they start.
    std::erase_if(pending_, [&](int j) {
      ComputeJob& job = jobs_[j];
      if (job.remaining > 0.0 || job.start_time() > now) return false;
      job.completion = std::max(t0, job.start_time());
      return true;
    });
    if (now >= t1) break;
    // Sub-step ends at the next start, the next completion or the tick end.
    std::fill(divisor_.begin(), divisor_.end(), 0);
    double step_end = t1;
    for (int j : pending_) {
      const ComputeJob& job = jobs_[j];
      if (job.start_time() <= now)
        for (int n : job.responders) ++divisor_[n];
      else
        step_end = std::min(step_end, job.start_time());
    }
    rate.assign(pending_.size(), 0.0);
    for (std::size_t k = 0; k < pending_.size(); ++k) {
      const ComputeJob& job = jobs_[pending_[k]];
      if (job.start_time() > now) continue;
      for (int n : job.responders) rate[k] += rates_[n] / divisor_[n];
      step_end = std::min(step_end, now + job.remaining / rate[k]);
    }
    const double dt = step_end - now;
    std::vector<int> still;
    for (std::size_t k = 0; k < pending_.size(); ++k) {
      const int j = pending_[k];
      ComputeJob& job = jobs_[j];
      if (rate[k] > 0.0) {
        for (int n : job.responders) consumed_[n] += rates_[n] / divisor_[n] * dt / span;
        const double finish = now + job.remaining / rate[k];
        if (finish <= step_end) {
          job.completion = finish;
          job.remaining = 0.0;
          continue;
        }
        job.remaining -= rate[k] * dt;
      }
      still.push_back(j);
    }
    pending_ = std::move(still);
    now = step_end;
  }
}

JobSummary summarize_jobs(std::span<const ComputeJob> jobs, double deadline_s, double issued_by) {
  JobSummary s;
  double throughput = 0.0, completion = 0.0, responders = 0.0;
  for (const ComputeJob& j : jobs) {
    if (j.issue_time > issued_by) continue;
    ++s.jobs;
    responders += static_cast<double>(j.responders.size());
    if (!j.done()) continue;
    ++s.completed;
    const double delay = j.completion - j.issue_time;
    completion += delay;
    if (delay <= deadline_s) {
      ++s.on_time;
      if (delay > 0.0) throughput += j.flop_size / delay;
    }
  }
  if (s.jobs > 0) {
    s.mean_throughput_flops = throughput / s.jobs;
    s.mean_responders = responders / s.jobs;
  }
  if (s.completed > 0) s.mean_completion_s = completion / s.completed;
  return s;
}

std::optional<double> on_time_rate_pct(const JobSummary& fog, const JobSummary& standalone) {
  if (standalone.mean_throughput_flops <= 0.0) return std::nullopt;
  return 100.0 * fog.mean_throughput_flops / standalone.mean_throughput_flops;
}

}  // namespace densefog
