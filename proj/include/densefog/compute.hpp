// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "densefog/connectivity.hpp"
#include "densefog/sensing.hpp"

namespace densefog {

struct ComputeParams {
  double job_size_flop = 1e12;
  double vehicle_flops = 5e12;
  double bs_flops = 3e12;
  double job_interval_s = 1.0;
  double deadline_s = 0.25;
  double response_window_s = 0.05;  // round trip
  double offload_payload_bits = 4e6;
  bool infrastructure = true;
};

struct ComputeJob {
  int id = 0;
  int origin = 0;
  double issue_time = 0.0;
  double flop_size = 0.0;
  double remaining = 0.0;
  std::vector<int> responders;  // node ids, origin first
  double dispatch_latency_s = 0.0;
  double completion = kNever;

  double start_time() const { return issue_time + dispatch_latency_s; }
  bool done() const { return completion != kNever; }
};

struct ResponderSet {
  std::vector<int> nodes;  // origin first, then ascending node id
  double dispatch_latency_s = 0.0;
};

/// Origin plus every fog-member vehicle (and, with infrastructure, every
/// site) whose round trip over the origin's route tree fits the response
/// window. Dispatch latency is the largest one-way latency in the set.
/// A non-member origin computes alone.
ResponderSet discover_responders(int origin, const RouteTree& tree, std::span<const std::uint8_t> fog_member,
                                 int vehicle_count, const ComputeParams& params);

/// Completion delay of a job with ideal parallel speedup over fixed
/// effective rates: dispatch + flop / sum(rates).
double execute_job(double flop_size, double dispatch_latency_s, std::span<const double> effective_flops);

/// Processor-sharing executor. Every node splits its rate equally among the
/// jobs it currently serves. Inside a tick the split is recomputed at every
/// job start and completion, so the schedule is exact for any tick length.
class JobScheduler {
 public:
  explicit JobScheduler(std::vector<double> node_flops);

  int submit(ComputeJob job);
  void advance(double t0, double t1);

  const std::vector<ComputeJob>& jobs() const { return jobs_; }
  // Mean FLOPS a node delivered during the last advance.
  double consumed_flops(int node) const { return consumed_[node]; }

 private:
  std::vector<double> rates_;
  std::vector<int> divisor_;  // scratch: jobs per node in the current sub-step
  std::vector<double> consumed_;
  std::vector<ComputeJob> jobs_;
  std::vector<int> pending_;  // indices of unfinished jobs
};

struct JobSummary {
  int jobs = 0;
  int on_time = 0;
  int completed = 0;
  double mean_throughput_flops = 0.0;  // on-time jobs credit flop / delay, late ones 0
  double mean_completion_s = 0.0;      // over completed jobs
  double mean_responders = 0.0;
};

/// Summarizes jobs issued at or before `issued_by`.
JobSummary summarize_jobs(std::span<const ComputeJob> jobs, double deadline_s, double issued_by);

/// Fog on-time processing rate as a percentage of the standalone baseline.
/// Undefined when the baseline delivered nothing.
std::optional<double> on_time_rate_pct(const JobSummary& fog, const JobSummary& standalone);

}  // namespace densefog
