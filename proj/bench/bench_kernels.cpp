// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

// Serial reference vs OpenMP kernels on a density-50 snapshot.

#include <benchmark/benchmark.h>

#include <vector>

#include "densefog/kernels.hpp"
#include "densefog/mobility.hpp"
#include "densefog/rng.hpp"

namespace {

using namespace densefog;

struct Snapshot {
  Deployment dep;
  std::vector<VehiclePose> fleet;
  VehicleIndex index;
  std::vector<SegmentQuery> segments;
  std::vector<RadarQuery> radar;
};

const Snapshot& snapshot() {
  static const Snapshot s = [] {
    Snapshot s;
    s.dep = build_deployment(DeploymentParams{}, 1);
    MobilityParams mp;
    Rng rng(1);
    s.fleet = spawn_fleet(s.dep.grid, mp, rng);
    std::vector<BoxObstacle> boxes;
    std::vector<Point3> vel;
    for (const auto& v : s.fleet) {
      boxes.push_back(vehicle_box(v, mp));
      vel.push_back(velocity(v));
    }
    s.index = VehicleIndex(s.dep.grid);
    s.index.rebuild(boxes, vel);
    // About three links per vehicle, as the oracle keeps them.
    Rng pick(2);
    const auto n = s.fleet.size();
    for (std::size_t i = 0; i < 3 * n; ++i) {
      const auto a = pick.below(n), b = pick.below(n);
      s.segments.push_back({s.fleet[a].position, s.fleet[b].position, velocity(s.fleet[a]), velocity(s.fleet[b]),
                            static_cast<int>(a), static_cast<int>(b)});
      s.radar.push_back({s.fleet[a].position, s.fleet[a].position + Point3{pick.uniform(-50, 50), pick.uniform(-50, 50), -0.4},
                         static_cast<int>(a)});
    }
    return s;
  }();
  return s;
}

void BM_ClassifySerial(benchmark::State& state) {
  const Snapshot& s = snapshot();
  std::vector<SegmentState> out(s.segments.size());
  for (auto _ : state) {
    classify_segments_serial(s.segments, 0.1, static_cast<int>(state.range(0)), s.dep, s.index, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.segments.size()));
}

void BM_ClassifyParallel(benchmark::State& state) {
  const Snapshot& s = snapshot();
  std::vector<SegmentState> out(s.segments.size());
  for (auto _ : state) {
    classify_segments_parallel(s.segments, 0.1, static_cast<int>(state.range(0)), s.dep, s.index, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.segments.size()));
}

void BM_RadarSerial(benchmark::State& state) {
  const Snapshot& s = snapshot();
  std::vector<std::uint8_t> out(s.radar.size());
  for (auto _ : state) {
    radar_visibility_serial(s.radar, 50.0, s.dep, s.index, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.radar.size()));
}

void BM_RadarParallel(benchmark::State& state) {
  const Snapshot& s = snapshot();
  std::vector<std::uint8_t> out(s.radar.size());
  for (auto _ : state) {
    radar_visibility_parallel(s.radar, 50.0, s.dep, s.index, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.radar.size()));
}

}  // namespace

BENCHMARK(BM_ClassifySerial)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassifyParallel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RadarSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RadarParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
