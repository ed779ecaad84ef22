// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "densefog/engine.hpp"
#include "doctest.h"

using namespace densefog;

namespace {

// Small, fast scenario: 2 s rounds at low density.
ScenarioConfig quick(Experiment e) {
  ScenarioConfig c;
  c.experiment = e;
  c.rounds = 3;
  c.round_duration_s = 2.0;
  c.densities = {5.0};
  c.fog_fractions = {0.0, 1.0};
  c.compute_density = 5.0;
  c.infra_modes = {false, true};
  c.jaywalk.jaywalking_intensity_per_min = 60.0;  // about two events per round
  return c;
}

std::vector<std::string> csv_column(const std::string& csv, const std::string& name) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  std::istringstream h(line);
  for (std::string cell; std::getline(h, cell, ',');) header.push_back(cell);
  std::size_t col = 0;
  while (col < header.size() && header[col] != name) ++col;
  std::vector<std::string> out;
  while (std::getline(in, line)) {
    std::istringstream r(line);
    std::string cell;
    for (std::size_t i = 0; i <= col; ++i) std::getline(r, cell, ',');
    out.push_back(cell);
  }
  return out;
}

}  // namespace

TEST_CASE("tick_count: 10 min at 0.01 s is 60,000 ticks") {
  ScenarioConfig c;
  c.round_duration_s = 600.0;
  CHECK(tick_count(c) == 60000);
  c.round_duration_s = 60.0;
  CHECK(tick_count(c) == 6000);
}

TEST_CASE("sweep_points and labels") {
  ScenarioConfig c;
  CHECK(sweep_points(c).size() == 20);
  c.densities = {50.0};
  const auto pts = sweep_points(c);
  REQUIRE(pts.size() == 4);  // fog sweep {0, 0.2, 0.5, 1}
  CHECK(point_label(pts[1]) == "jaywalk_d50_f0.2");
  c.experiment = Experiment::Compute;
  const auto cp = sweep_points(c);
  REQUIRE(cp.size() == 8);
  std::set<std::string> labels;
  for (const auto& p : cp) labels.insert(point_label(p));
  CHECK(labels.size() == 8);
  CHECK(labels.count("compute_d20_f1_infra-on") == 1);
}

TEST_CASE("run_round is a pure function of (config, point, round)") {
  const ScenarioConfig c = quick(Experiment::Jaywalk);
  const SweepPoint p{Experiment::Jaywalk, 5.0, 1.0, false};
  const RoundResult a = run_round(c, p, 1), b = run_round(c, p, 1);
  PointResult pa{p, {a}}, pb{p, {b}};
  CHECK(rounds_csv(pa) == rounds_csv(pb));
  CHECK(events_csv(pa) == events_csv(pb));
  CHECK(a.metrics.ticks == 200);
  CHECK(a.metrics.vehicles == 160);
  CHECK(a.metrics.max_degree <= 3);
}

TEST_CASE("paired rounds: fog fraction does not change the world") {
  const ScenarioConfig c = quick(Experiment::Jaywalk);
  const RoundResult base = run_round(c, {Experiment::Jaywalk, 5.0, 0.0, false}, 0);
  const RoundResult fog = run_round(c, {Experiment::Jaywalk, 5.0, 1.0, false}, 0);
  REQUIRE(base.events.size() == fog.events.size());
  REQUIRE(!base.events.empty());
  for (std::size_t i = 0; i < base.events.size(); ++i) {
    CHECK(base.events[i].spawn_time_s == fog.events[i].spawn_time_s);
    CHECK(base.events[i].entry == fog.events[i].entry);
    // Local radar detections are identical: only warnings differ.
    CHECK(base.events[i].first_detection_s == fog.events[i].first_detection_s);
    CHECK(base.events[i].detectors == fog.events[i].detectors);
    CHECK(base.events[i].misses >= fog.events[i].misses);
  }
  CHECK(base.metrics.outage_ticks == fog.metrics.outage_ticks);
  CHECK(base.metrics.warned == 0);
}

TEST_CASE("RNG stream isolation: the job arrival knob leaves jaywalk rounds untouched") {
  ScenarioConfig c = quick(Experiment::Jaywalk);
  const SweepPoint p{Experiment::Jaywalk, 5.0, 1.0, false};
  const RoundResult a = run_round(c, p, 2);
  c.compute.job_interval_s = 0.37;
  const RoundResult b = run_round(c, p, 2);
  PointResult pa{p, {a}}, pb{p, {b}};
  CHECK(events_csv(pa) == events_csv(pb));
  CHECK(rounds_csv(pa) == rounds_csv(pb));
}

TEST_CASE("run_experiment: result does not depend on the number of worker threads") {
  const ScenarioConfig c = quick(Experiment::Compute);
  const ExperimentResult serial = run_experiment(c, 1);
  const ExperimentResult threaded = run_experiment(c, 3);
  CHECK(summary_csv(serial, c) == summary_csv(threaded, c));
  REQUIRE(serial.points.size() == 4);
  for (std::size_t i = 0; i < serial.points.size(); ++i)
    CHECK(rounds_csv(serial.points[i]) == rounds_csv(threaded.points[i]));
  // kernel parallelism is restored afterwards
  CHECK(kernel_parallelism());
}

TEST_CASE("compute rounds: fog without members matches standalone, pooling helps") {
  ScenarioConfig c = quick(Experiment::Compute);
  c.rounds = 1;
  const RoundResult none = run_round(c, {Experiment::Compute, 5.0, 0.0, false}, 0);
  REQUIRE(none.metrics.on_time_rate_pct.has_value());
  CHECK(*none.metrics.on_time_rate_pct == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(none.metrics.completion_ms == doctest::Approx(none.metrics.standalone_completion_ms));
  CHECK(none.metrics.mean_responders == 1.0);
  CHECK(none.metrics.max_bs_load_flops == 0.0);
  const RoundResult all = run_round(c, {Experiment::Compute, 5.0, 1.0, true}, 0);
  CHECK(all.metrics.completion_ms < none.metrics.completion_ms);
  CHECK(all.metrics.max_bs_load_flops <= 3e12 * (1 + 1e-9));
  CHECK(all.metrics.jobs == none.metrics.jobs);
}

TEST_CASE("aggregates recomputed from per-round values match within 1e-12") {
  const ScenarioConfig c = quick(Experiment::Jaywalk);
  const ExperimentResult r = run_experiment(c, 1);
  for (const PointResult& p : r.points) {
    double sum = 0.0;
    for (const auto& rr : p.rounds) sum += rr.metrics.misses;
    const double mean = sum / static_cast<double>(p.rounds.size());
    CHECK(std::abs(p.misses().mean - mean) <= 1e-12);
    const auto from_csv = csv_column(rounds_csv(p), "misses");
    double csv_sum = 0.0;
    for (const auto& s : from_csv) csv_sum += std::stod(s);
    CHECK(std::abs(csv_sum / static_cast<double>(from_csv.size()) - mean) <= 1e-12);
  }
}

TEST_CASE("summary: frozen columns, undefined CI with one round, simulated minutes") {
  ScenarioConfig c = quick(Experiment::Jaywalk);
  c.rounds = 1;
  c.fog_fractions = {0.0, 0.2, 0.5, 1.0};
  c.round_duration_s = 0.5;
  const ExperimentResult r = run_experiment(c, 1);
  const std::string csv = summary_csv(r, c);
  CHECK(csv.substr(0, csv.find('\n')) == kSummaryColumns);
  CHECK(csv_column(csv, "misses_ci95_low") == std::vector<std::string>(4, "NA"));
  CHECK(csv_column(csv, "on_time_rate_pct_mean") == std::vector<std::string>(4, "NA"));
  CHECK(r.points.size() == 4);

  // 100 rounds of 10 minutes are labeled 1,000 simulated minutes.
  ScenarioConfig full;
  apply_paper_scale(full);
  ExperimentResult fake;
  fake.points.push_back({{Experiment::Jaywalk, 50.0, 0.0, false}, std::vector<RoundResult>(100)});
  CHECK(csv_column(summary_csv(fake, full), "simulated_minutes") == std::vector<std::string>{"1000"});
}

TEST_CASE("summary column schema is frozen") {
  CHECK(std::string(kSummaryColumns) ==
        "experiment,density,fog_fraction,infra,proactive,degree,rounds,simulated_minutes,events_mean,misses_mean,"
        "misses_ci95_low,misses_ci95_high,on_time_rate_pct_mean,on_time_rate_pct_ci95_low,on_time_rate_pct_ci95_high,"
        "completion_ms_mean,completion_ms_ci95_low,completion_ms_ci95_high,outage_ticks_mean,isolated_ticks_mean");
}

TEST_CASE("aggregate and spearman") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const Aggregate a = aggregate(v);
  CHECK(a.mean == 2.5);
  // t(0.975, 3) = 3.182446305, sd = 1.290994449
  REQUIRE(a.ci95_half.has_value());
  CHECK(*a.ci95_half == doctest::Approx(3.182446305 * 1.290994449 / 2.0).epsilon(1e-8));
  CHECK_FALSE(aggregate(std::vector<double>{7.0}).ci95_half.has_value());
  const std::vector<double> x{1, 2, 3, 4, 5}, y{2, 4, 4, 9, 10};
  CHECK(*spearman(x, y) == doctest::Approx(0.9746794345).epsilon(1e-9));
  const std::vector<double> flat{3, 3, 3, 3, 3};
  CHECK_FALSE(spearman(x, flat).has_value());
}
