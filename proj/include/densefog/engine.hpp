// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "densefog/config.hpp"
#include "densefog/stats.hpp"

namespace densefog {

struct SweepPoint {
  Experiment experiment = Experiment::Jaywalk;
  double density = 50.0;
  double fog_fraction = 0.0;
  bool infra = false;
};

// File-name label, e.g. "jaywalk_d50_f0.2" or "compute_d20_f1_infra-on".
std::string point_label(const SweepPoint& p);

/// Jaywalk: densities x fog fractions. Compute: fog fractions x infra modes
/// at the compute density.
std::vector<SweepPoint> sweep_points(const ScenarioConfig& config);

struct RoundMetrics {
  int round = 0;
  std::uint64_t seed = 0;
  int vehicles = 0;
  std::int64_t ticks = 0;
  // Jaywalk.
  int events = 0;
  int threatened = 0;
  int misses = 0;
  int detections = 0;
  int warned = 0;
  int undelivered = 0;
  // Network.
  std::int64_t outage_ticks = 0;
  std::int64_t isolated_ticks = 0;
  double mean_links = 0.0;
  std::int64_t reselections = 0;
  int max_degree = 0;
  // Compute.
  int jobs = 0;
  int on_time_jobs = 0;
  std::optional<double> on_time_rate_pct;
  double completion_ms = 0.0;
  double standalone_completion_ms = 0.0;
  double mean_responders = 0.0;
  double max_bs_load_flops = 0.0;
};

struct EventTrace {
  int round = 0;
  int event = 0;
  double spawn_time_s = 0.0;
  Point3 entry;
  double first_detection_s = kNever;
  int first_detector = -1;
  int detectors = 0;
  int warned = 0;
  int threatened = 0;
  int misses = 0;
  int undelivered = 0;
};

struct JobTrace {
  int round = 0;
  int job = 0;
  int origin = 0;
  double issue_s = 0.0;
  int responders = 0;
  double dispatch_ms = 0.0;
  double completion_ms = 0.0;
  double standalone_completion_ms = 0.0;
  bool on_time = false;
};

struct RoundResult {
  RoundMetrics metrics;
  std::vector<EventTrace> events;
  std::vector<JobTrace> jobs;  // only with job_trace
};

std::int64_t tick_count(const ScenarioConfig& config);

/// One independent round at a sweep point. The output is a pure function of
/// (config, point, round index).
RoundResult run_round(const ScenarioConfig& config, const SweepPoint& point, int round_index);

struct PointResult {
  SweepPoint point;
  std::vector<RoundResult> rounds;

  Aggregate misses() const;
  Aggregate events() const;
  Aggregate on_time_rate_pct() const;  // over rounds where it is defined
  Aggregate completion_ms() const;
  Aggregate outage_ticks() const;
  Aggregate isolated_ticks() const;
};

struct ExperimentResult {
  std::vector<PointResult> points;
};

/// Runs every sweep point. Rounds execute concurrently on up to `jobs`
/// threads (0 = OpenMP default); results do not depend on it.
ExperimentResult run_experiment(const ScenarioConfig& config, int jobs = 1);

// CSV documents (header line first).
std::string rounds_csv(const PointResult& p);
std::string events_csv(const PointResult& p);
std::string jobs_csv(const PointResult& p);
std::string summary_csv(const ExperimentResult& r, const ScenarioConfig& config);
extern const char* const kSummaryColumns;
extern const char* const kRoundColumns;

/// Writes rounds_<label>.csv and events_<label>.csv per point (plus
/// jobs_<label>.csv with job_trace), summary.csv and effective_config.toml.
void write_outputs(const ExperimentResult& r, const ScenarioConfig& config, const std::filesystem::path& dir);

// Human-readable summary table.
std::string summary_table(const ExperimentResult& r, const ScenarioConfig& config);

}  // namespace densefog
