// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#include "densefog/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>

#include <omp.h>

#include "densefog/kernels.hpp"
#include "densefog/rng.hpp"

namespace densefog {

namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string csv_number(double v) {
  if (v == kNever) return "NA";
  return format_double(v);
}

std::string csv_optional(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

std::uint64_t density_key(double density) { return std::bit_cast<std::uint64_t>(density); }

}  // namespace

std::string point_label(const SweepPoint& p) {
  std::string s = to_string(p.experiment);
  s += "_d" + short_number(p.density) + "_f" + short_number(p.fog_fraction);
  if (p.experiment == Experiment::Compute) s += p.infra ? "_infra-on" : "_infra-off";
  return s;
}

std::vector<SweepPoint> sweep_points(const ScenarioConfig& c) {
  std::vector<SweepPoint> out;
  if (c.experiment == Experiment::Jaywalk) {
    for (double d : c.densities)
      for (double f : c.fog_fractions) out.push_back({Experiment::Jaywalk, d, f, false});
  } else {
    for (double f : c.fog_fractions)
      for (bool infra : c.infra_modes) out.push_back({Experiment::Compute, c.compute_density, f, infra});
  }
  return out;
}

std::int64_t tick_count(const ScenarioConfig& c) { return std::llround(c.round_duration_s / c.tick_s); }

RoundResult run_round(const ScenarioConfig& config, const SweepPoint& point, int round_index) {
  const std::uint64_t seed = round_seed(config.master_seed, static_cast<std::uint64_t>(round_index));
  const std::uint64_t dkey = density_key(point.density);
  const Deployment dep = build_deployment(config.deployment, seed);
  const StreetGrid& grid = dep.grid;
  const double dt = config.tick_s;
  const double height = config.mobility.transceiver_height_m;
  const bool jaywalk = point.experiment == Experiment::Jaywalk;

  MobilityParams mob = config.mobility;
  mob.density_per_100m = point.density;
  Rng spawn_rng = substream(seed, "mobility", dkey);
  std::vector<VehiclePose> vehicles = spawn_fleet(grid, mob, spawn_rng);
  Rng turns = substream(seed, "turns", dkey);
  const auto n = static_cast<int>(vehicles.size());

  std::vector<double> radar_phase(n);
  Rng phase_rng = substream(seed, "radar-phase", dkey);
  for (double& p : radar_phase) p = phase_rng.uniform(0.0, config.sensing.radar_cycle_s);

  // Membership is nested across fog fractions: one uniform draw per vehicle.
  std::vector<std::uint8_t> member(n);
  Rng fog_rng = substream(seed, "fog", dkey);
  for (auto& m : member) m = fog_rng.uniform() < point.fog_fraction ? 1 : 0;

  std::vector<double> next_job(n);
  Rng job_rng = substream(seed, "jobs", dkey);
  for (double& j : next_job) j = job_rng.uniform(0.0, config.compute.job_interval_s);

  JaywalkProcess jaywalks(grid, config.jaywalk, substream(seed, "jaywalk"));
  DetectionLedger ledger(static_cast<std::size_t>(n));

  ComputeParams cp = config.compute;
  cp.infrastructure = point.infra;
  std::vector<double> rates(static_cast<std::size_t>(n), cp.vehicle_flops);
  std::vector<double> solo_rates = rates;
  rates.resize(static_cast<std::size_t>(n) + dep.bs_sites.size(), cp.bs_flops);
  JobScheduler fog_jobs(rates);
  JobScheduler solo_jobs(solo_rates);

  VehicleIndex index(grid);
  std::vector<BoxObstacle> boxes(static_cast<std::size_t>(n));
  std::vector<Point3> velocities(static_cast<std::size_t>(n));
  auto refresh = [&] {
    for (int i = 0; i < n; ++i) {
      boxes[i] = vehicle_box(vehicles[i], mob);
      velocities[i] = velocity(vehicles[i]);
    }
    index.rebuild(boxes, velocities);
  };
  refresh();

  Oracle oracle(dep, config.radio, config.network, seed);
  OracleTickStats ostats;

  RoundResult out;
  RoundMetrics& m = out.metrics;
  m.round = round_index;
  m.seed = seed;
  m.vehicles = n;
  m.ticks = tick_count(config);

  for (std::int64_t k = 1; k <= m.ticks; ++k) {
    const double t = static_cast<double>(k) * dt;
    step_vehicles(vehicles, grid, dt, turns, height);
    refresh();
    if (jaywalk)
      for (const JaywalkEvent& e : jaywalks.spawn(t, dt)) ledger.add(e);

    oracle.update({vehicles, &index, t, dt}, ostats);
    oracle.allocate_bandwidth();

    if (jaywalk) {
      const auto detections = radar_scan(ledger, vehicles, radar_phase, dep, index, config.sensing, t, dt);
      m.detections += static_cast<int>(detections.size());
      fuse_and_warn(ledger, detections, member, oracle.routing_graph(), config.network, config.sensing, t);
    } else {
      const Graph& graph = oracle.routing_graph();
      for (int v = 0; v < n; ++v) {
        while (next_job[v] <= t) {
          ComputeJob job;
          job.origin = v;
          job.issue_time = next_job[v];
          job.flop_size = cp.job_size_flop;
          if (member[v]) {
            const RouteTree tree =
                widest_paths(graph, v, config.network.forwarding_delay_s, cp.offload_payload_bits);
            ResponderSet rs = discover_responders(v, tree, member, n, cp);
            job.responders = std::move(rs.nodes);
            job.dispatch_latency_s = rs.dispatch_latency_s;
          } else {
            job.responders = {v};
          }
          fog_jobs.submit(job);
          job.responders = {v};
          job.dispatch_latency_s = 0.0;
          solo_jobs.submit(job);
          next_job[v] += cp.job_interval_s;
        }
      }
      fog_jobs.advance(t - dt, t);
      solo_jobs.advance(t - dt, t);
      for (std::size_t s = 0; s < dep.bs_sites.size(); ++s)
        m.max_bs_load_flops = std::max(m.max_bs_load_flops, fog_jobs.consumed_flops(n + static_cast<int>(s)));
    }

    // Metric capture sees the post-update state.
    if (jaywalk) judge_misses(ledger, vehicles, index, grid.lane_width(), config.sensing, t);
    m.max_degree = std::max(m.max_degree, oracle.max_vehicle_degree());
  }

  m.outage_ticks = ostats.outage_ticks;
  m.isolated_ticks = ostats.isolated_ticks;
  m.reselections = ostats.reselections;
  m.mean_links = m.ticks > 0 ? static_cast<double>(ostats.link_count) / static_cast<double>(m.ticks) : 0.0;

  for (const EventRecord& r : ledger.events()) {
    ++m.events;
    m.threatened += r.threatened;
    m.misses += r.misses;
    m.warned += r.warned;
    m.undelivered += r.undelivered;
    out.events.push_back({round_index, r.event.id, r.event.spawn_time, r.event.entry, r.first_detection,
                          r.first_detector, r.detectors, r.warned, r.threatened, r.misses, r.undelivered});
  }

  if (!jaywalk) {
    // Jobs issued later than one deadline before the end are not judged.
    const double horizon = static_cast<double>(m.ticks) * dt - cp.deadline_s;
    const JobSummary fog = summarize_jobs(fog_jobs.jobs(), cp.deadline_s, horizon);
    const JobSummary solo = summarize_jobs(solo_jobs.jobs(), cp.deadline_s, horizon);
    m.jobs = fog.jobs;
    m.on_time_jobs = fog.on_time;
    m.on_time_rate_pct = on_time_rate_pct(fog, solo);
    m.completion_ms = fog.mean_completion_s * 1e3;
    m.standalone_completion_ms = solo.mean_completion_s * 1e3;
    m.mean_responders = fog.mean_responders;
    if (config.job_trace) {
      const auto& fj = fog_jobs.jobs();
      const auto& sj = solo_jobs.jobs();
      for (std::size_t i = 0; i < fj.size(); ++i) {
        const ComputeJob& j = fj[i];
        const double delay = j.completion - j.issue_time;
        out.jobs.push_back({round_index, j.id, j.origin, j.issue_time, static_cast<int>(j.responders.size()),
                            j.dispatch_latency_s * 1e3, j.done() ? delay * 1e3 : kNever,
                            sj[i].done() ? (sj[i].completion - sj[i].issue_time) * 1e3 : kNever,
                            j.done() && delay <= cp.deadline_s});
      }
    }
  }
  return out;
}

namespace {

template <class F>
Aggregate aggregate_by(const std::vector<RoundResult>& rounds, F f) {
  std::vector<double> v;
  for (const auto& r : rounds)
    if (auto x = f(r.metrics)) v.push_back(*x);
  return aggregate(v);
}

}  // namespace

Aggregate PointResult::misses() const {
  return aggregate_by(rounds, [](const RoundMetrics& m) { return std::optional<double>(m.misses); });
}
Aggregate PointResult::events() const {
  return aggregate_by(rounds, [](const RoundMetrics& m) { return std::optional<double>(m.events); });
}
Aggregate PointResult::on_time_rate_pct() const {
  return aggregate_by(rounds, [](const RoundMetrics& m) { return m.on_time_rate_pct; });
}
Aggregate PointResult::completion_ms() const {
  return aggregate_by(rounds, [](const RoundMetrics& m) { return std::optional<double>(m.completion_ms); });
}
Aggregate PointResult::outage_ticks() const {
  return aggregate_by(rounds, [](const RoundMetrics& m) { return std::optional<double>(m.outage_ticks); });
}
Aggregate PointResult::isolated_ticks() const {
  return aggregate_by(rounds, [](const RoundMetrics& m) { return std::optional<double>(m.isolated_ticks); });
}

ExperimentResult run_experiment(const ScenarioConfig& config, int jobs) {
  validate_config(config);
  ExperimentResult result;
  for (const SweepPoint& p : sweep_points(config)) {
    PointResult pr;
    pr.point = p;
    pr.rounds.resize(static_cast<std::size_t>(config.rounds));
    result.points.push_back(std::move(pr));
  }
  const auto tasks = static_cast<std::ptrdiff_t>(result.points.size() * static_cast<std::size_t>(config.rounds));
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const bool concurrent = threads > 1 && tasks > 1;
  const bool kernels = kernel_parallelism();
  // Rounds and kernels do not nest: with concurrent rounds the kernels run
  // serially inside each.
  if (concurrent) set_kernel_parallelism(false);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (concurrent)
  for (std::ptrdiff_t i = 0; i < tasks; ++i) {
    const std::size_t point = static_cast<std::size_t>(i) / static_cast<std::size_t>(config.rounds);
    const int round = static_cast<int>(i % config.rounds);
    try {
      result.points[point].rounds[static_cast<std::size_t>(round)] =
          run_round(config, result.points[point].point, round);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  set_kernel_parallelism(kernels);
  if (failure) std::rethrow_exception(failure);
  return result;
}

const char* const kRoundColumns =
    "round,seed,vehicles,ticks,events,threatened,misses,detections,warned,undelivered,outage_ticks,"
    "isolated_ticks,mean_links,reselections,max_degree,jobs,on_time_jobs,on_time_rate_pct,completion_ms,"
    "standalone_completion_ms,mean_responders,max_bs_load_flops";

const char* const kSummaryColumns =
    "experiment,density,fog_fraction,infra,proactive,degree,rounds,simulated_minutes,events_mean,misses_mean,"
    "misses_ci95_low,misses_ci95_high,on_time_rate_pct_mean,on_time_rate_pct_ci95_low,on_time_rate_pct_ci95_high,"
    "completion_ms_mean,completion_ms_ci95_low,completion_ms_ci95_high,outage_ticks_mean,isolated_ticks_mean";

std::string rounds_csv(const PointResult& p) {
  std::string s = std::string(kRoundColumns) + "\n";
  for (const auto& r : p.rounds) {
    const RoundMetrics& m = r.metrics;
    s += std::to_string(m.round) + "," + std::to_string(m.seed) + "," + std::to_string(m.vehicles) + "," +
         std::to_string(m.ticks) + "," + std::to_string(m.events) + "," + std::to_string(m.threatened) + "," +
         std::to_string(m.misses) + "," + std::to_string(m.detections) + "," + std::to_string(m.warned) + "," +
         std::to_string(m.undelivered) + "," + std::to_string(m.outage_ticks) + "," +
         std::to_string(m.isolated_ticks) + "," + format_double(m.mean_links) + "," +
         std::to_string(m.reselections) + "," + std::to_string(m.max_degree) + "," + std::to_string(m.jobs) + "," +
         std::to_string(m.on_time_jobs) + "," + csv_optional(m.on_time_rate_pct) + "," +
         format_double(m.completion_ms) + "," + format_double(m.standalone_completion_ms) + "," +
         format_double(m.mean_responders) + "," + format_double(m.max_bs_load_flops) + "\n";
  }
  return s;
}

std::string events_csv(const PointResult& p) {
  std::string s =
      "round,event,spawn_time_s,x,y,first_detection_s,first_detector,detectors,warned,threatened,misses,undelivered\n";
  for (const auto& r : p.rounds)
    for (const EventTrace& e : r.events)
      s += std::to_string(e.round) + "," + std::to_string(e.event) + "," + format_double(e.spawn_time_s) + "," +
           format_double(e.entry.x) + "," + format_double(e.entry.y) + "," + csv_number(e.first_detection_s) + "," +
           std::to_string(e.first_detector) + "," + std::to_string(e.detectors) + "," + std::to_string(e.warned) +
           "," + std::to_string(e.threatened) + "," + std::to_string(e.misses) + "," +
           std::to_string(e.undelivered) + "\n";
  return s;
}

std::string jobs_csv(const PointResult& p) {
  std::string s = "round,job,origin,issue_s,responders,dispatch_ms,completion_ms,standalone_completion_ms,on_time\n";
  for (const auto& r : p.rounds)
    for (const JobTrace& j : r.jobs)
      s += std::to_string(j.round) + "," + std::to_string(j.job) + "," + std::to_string(j.origin) + "," +
           format_double(j.issue_s) + "," + std::to_string(j.responders) + "," + format_double(j.dispatch_ms) + "," +
           csv_number(j.completion_ms) + "," + csv_number(j.standalone_completion_ms) + "," +
           (j.on_time ? "1" : "0") + "\n";
  return s;
}

std::string summary_csv(const ExperimentResult& r, const ScenarioConfig& config) {
  std::string s = std::string(kSummaryColumns) + "\n";
  const double minutes = config.rounds * config.round_duration_s / 60.0;
  for (const PointResult& p : r.points) {
    const Aggregate misses = p.misses(), rate = p.on_time_rate_pct(), completion = p.completion_ms();
    const bool compute = p.point.experiment == Experiment::Compute;
    s += std::string(to_string(p.point.experiment)) + "," + format_double(p.point.density) + "," +
         format_double(p.point.fog_fraction) + "," + (p.point.infra ? "on" : "off") + "," +
         (config.network.proactive ? "true" : "false") + "," + std::to_string(config.network.max_links) + "," +
         std::to_string(config.rounds) + "," + format_double(minutes) + "," + format_double(p.events().mean) + "," +
         format_double(misses.mean) + "," + csv_optional(misses.low()) + "," + csv_optional(misses.high()) + "," +
         (compute && rate.n > 0 ? format_double(rate.mean) : "NA") + "," + csv_optional(rate.low()) + "," +
         csv_optional(rate.high()) + "," + (compute ? format_double(completion.mean) : "NA") + "," +
         (compute ? csv_optional(completion.low()) : "NA") + "," + (compute ? csv_optional(completion.high()) : "NA") +
         "," + format_double(p.outage_ticks().mean) + "," + format_double(p.isolated_ticks().mean) + "\n";
  }
  return s;
}

void write_outputs(const ExperimentResult& r, const ScenarioConfig& config, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream f(dir / name, std::ios::binary);
    f << body;
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  };
  for (const PointResult& p : r.points) {
    const std::string label = point_label(p.point);
    write("rounds_" + label + ".csv", rounds_csv(p));
    if (p.point.experiment == Experiment::Jaywalk) write("events_" + label + ".csv", events_csv(p));
    if (config.job_trace && p.point.experiment == Experiment::Compute) write("jobs_" + label + ".csv", jobs_csv(p));
  }
  write("summary.csv", summary_csv(r, config));
  write("effective_config.toml", serialize_config(config));
}

std::string summary_table(const ExperimentResult& r, const ScenarioConfig& config) {
  char line[256];
  std::string s;
  std::snprintf(line, sizeof line, "%d rounds x %g s per point (%g simulated minutes)\n", config.rounds,
                config.round_duration_s, config.rounds * config.round_duration_s / 60.0);
  s += line;
  auto ci = [](const Aggregate& a) { return a.ci95_half ? *a.ci95_half : std::nan(""); };
  if (config.experiment == Experiment::Jaywalk) {
    s += "density  fog    events  misses  +/-ci95  outage_ticks\n";
    for (const PointResult& p : r.points) {
      const Aggregate m = p.misses();
      std::snprintf(line, sizeof line, "%7g  %4g  %6.2f  %6.2f  %7.2f  %12.1f\n", p.point.density,
                    p.point.fog_fraction, p.events().mean, m.mean, ci(m), p.outage_ticks().mean);
      s += line;
    }
  } else {
    s += "density  fog    infra  on_time_rate_%  +/-ci95  completion_ms  +/-ci95\n";
    for (const PointResult& p : r.points) {
      const Aggregate rate = p.on_time_rate_pct(), c = p.completion_ms();
      std::snprintf(line, sizeof line, "%7g  %4g  %5s  %14.1f  %7.1f  %13.2f  %7.2f\n", p.point.density,
                    p.point.fog_fraction, p.point.infra ? "on" : "off", rate.n ? rate.mean : std::nan(""), ci(rate),
                    c.mean, ci(c));
      s += line;
    }
  }
  return s;
}

}  // namespace densefog
