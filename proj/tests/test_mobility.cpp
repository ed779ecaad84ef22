// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <vector>

#include "densefog/geometry.hpp"
#include "densefog/mobility.hpp"
#include "densefog/rng.hpp"
#include "doctest.h"

using namespace densefog;

namespace {

StreetGrid grid400() { return StreetGrid{100.0, 20.0, 4, 4, 4}; }

// Distance from a vehicle's position to the nearest lane centerline of the
// street it claims to be on.
double lane_error(const VehiclePose& v, const StreetGrid& g) {
  const Point3 p = lane_position(g, v.axis, v.street, v.dir, v.lane, v.s, v.position.z);
  return distance(p, v.position);
}

}  // namespace

TEST_CASE("fleet_size: density times total street length") {
  const StreetGrid g = grid400();
  CHECK(g.total_street_length() == 3200.0);
  CHECK(fleet_size(g, 50.0) == 1600);
  CHECK(fleet_size(g, 10.0) == 320);
  CHECK(fleet_size(g, 0.0) == 0);
}

TEST_CASE("spawn_fleet: exact size, unique ids, on lane, speed 40 km/h") {
  const StreetGrid g = grid400();
  MobilityParams p;
  Rng rng(1);
  const auto fleet = spawn_fleet(g, p, rng);
  REQUIRE(fleet.size() == 1600);
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    CHECK(fleet[i].id == static_cast<int>(i));
    CHECK(fleet[i].speed == doctest::Approx(40.0 / 3.6));
    CHECK(lane_error(fleet[i], g) < 1e-9);
    CHECK(fleet[i].s >= 0.0);
    CHECK(fleet[i].s < 400.0);
  }
}

TEST_CASE("step_vehicles: dt = 0 is a no-op") {
  const StreetGrid g = grid400();
  MobilityParams p;
  Rng rng(2), turns(3);
  auto fleet = spawn_fleet(g, p, rng);
  const auto before = fleet;
  step_vehicles(fleet, g, 0.0, turns, p.transceiver_height_m);
  for (std::size_t i = 0; i < fleet.size(); ++i) CHECK(fleet[i].position == before[i].position);
}

TEST_CASE("step_vehicles: 1 s between intersections moves 11.11 m straight") {
  const StreetGrid g = grid400();
  VehiclePose v;
  v.axis = Axis::X;
  v.street = 1;
  v.dir = 1;
  v.lane = 0;
  v.s = 20.0;
  v.speed = kmh_to_ms(40.0);
  v.position = lane_position(g, v.axis, v.street, v.dir, v.lane, v.s, 1.4);
  std::vector<VehiclePose> one{v};
  Rng turns(1);
  step_vehicles(one, g, 1.0, turns, 1.4);
  CHECK(one[0].s == doctest::Approx(31.1111).epsilon(1e-5));
  CHECK(one[0].position.y == v.position.y);
  CHECK(one[0].axis == Axis::X);
}

TEST_CASE("step_vehicles: fleet conserved, always on a lane, wraps inside the area") {
  const StreetGrid g = grid400();
  MobilityParams p;
  p.density_per_100m = 20.0;
  Rng rng(4), turns(5);
  auto fleet = spawn_fleet(g, p, rng);
  const std::size_t n = fleet.size();
  int turned = 0;
  for (int t = 0; t < 3000; ++t) {
    const auto before = fleet;
    step_vehicles(fleet, g, 0.01 * (1 + t % 7), turns, p.transceiver_height_m);
    REQUIRE(fleet.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(lane_error(fleet[i], g) < 1e-3);
      CHECK(fleet[i].s >= 0.0);
      CHECK(fleet[i].s < 400.0);
      turned += fleet[i].axis != before[i].axis;
    }
  }
  CHECK(turned > 0);
}

TEST_CASE("vehicle_box: body lies behind the windshield reference") {
  MobilityParams p;
  VehiclePose v;
  v.heading = {0, -1, 0};
  v.position = {10, 50, 1.4};
  const BoxObstacle b = vehicle_box(v, p);
  CHECK(b.max().y == doctest::Approx(54.8));
  CHECK(b.min().y == doctest::Approx(50.0));
  CHECK(b.max().x - b.min().x == doctest::Approx(1.8));
  CHECK(b.min().z == doctest::Approx(0.0));
  CHECK(b.max().z == doctest::Approx(1.4));
}

TEST_CASE("JaywalkProcess: zero intensity never spawns") {
  JaywalkParams jp;
  jp.jaywalking_intensity_per_min = 0.0;
  JaywalkProcess proc(grid400(), jp, Rng(1));
  for (int t = 1; t <= 6000; ++t) CHECK(proc.spawn(t * 0.1, 0.1).empty());
}

TEST_CASE("JaywalkEvent: 20 m street at 10 km/h takes 7.2 s, starts on a curb") {
  JaywalkProcess proc(grid400(), JaywalkParams{}, Rng(8));
  const auto events = proc.spawn(3600.0, 3600.0);
  REQUIRE(events.size() > 20);
  for (const auto& e : events) {
    CHECK(e.end_time() - e.spawn_time == doctest::Approx(7.2));
    CHECK(e.active_at(e.spawn_time));
    CHECK_FALSE(e.active_at(e.end_time()));
    const double across = e.street_axis == Axis::X ? e.entry.y : e.entry.x;
    CHECK(std::abs(std::abs(across - e.street * 100.0) - 10.0) < 1e-9);
    // Crossing ends on the opposite curb.
    const Point3 exit = e.position_at(e.end_time());
    const double across_exit = e.street_axis == Axis::X ? exit.y : exit.x;
    CHECK(across_exit - e.street * 100.0 == doctest::Approx(-(across - e.street * 100.0)));
    // Mid-block by default.
    const double along = e.street_axis == Axis::X ? e.entry.x : e.entry.y;
    const double off = std::fmod(along, 100.0);
    CHECK(off >= 10.0);
    CHECK(off <= 90.0);
  }
}

TEST_CASE("JaywalkProcess: inter-arrival times pass a KS test for Exp(1/min)") {
  JaywalkProcess proc(grid400(), JaywalkParams{}, Rng(77));
  std::vector<double> times;
  for (int t = 1; t <= 200000 && times.size() < 2000; ++t)
    for (const auto& e : proc.spawn(t * 0.5, 0.5)) times.push_back(e.spawn_time);
  REQUIRE(times.size() >= 1000);
  std::vector<double> gaps;
  for (std::size_t i = 1; i < times.size(); ++i) gaps.push_back(times[i] - times[i - 1]);
  std::sort(gaps.begin(), gaps.end());
  const double rate = 1.0 / 60.0;
  const double n = static_cast<double>(gaps.size());
  double d = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double cdf = 1.0 - std::exp(-rate * gaps[i]);
    d = std::max({d, std::abs((i + 1) / n - cdf), std::abs(cdf - i / n)});
  }
  // Asymptotic critical value at alpha = 0.01.
  CHECK(d < 1.628 / std::sqrt(n));
}

TEST_CASE("JaywalkProcess: mean count over 10 min is 10") {
  double total = 0.0;
  constexpr int runs = 400;
  for (int r = 0; r < runs; ++r) {
    JaywalkProcess proc(grid400(), JaywalkParams{}, substream(r, "jaywalk"));
    for (int t = 1; t <= 600; ++t) total += static_cast<double>(proc.spawn(t, 1.0).size());
  }
  // Standard error is sqrt(10 / 400) = 0.16.
  CHECK(total / runs == doctest::Approx(10.0).epsilon(0.06));
}
